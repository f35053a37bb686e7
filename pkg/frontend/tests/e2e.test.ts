// End-to-end: boots the real service and drives the UI store + DOM through
// the complete scenario (classify -> drill-down -> image -> back), checking
// that every displayed sentence is byte-equal to the API response text.
import { ChildProcess, spawn } from 'node:child_process';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { createApi } from '../src/api';
import { renderChatPane, renderControls, renderTreePane } from '../src/render';
import { DialogueStore, Message } from '../src/state';

const PORT = 8930 + (process.pid % 50);
const BASE = `http://127.0.0.1:${PORT}`;
const CLASSIFY_TEXT =
  'Bobby tracks down dandelion, because Bobby is a herbivore and dandelion is a plant.';
const DRILL_TEXT =
  'Bobby is a herbivore, because Bobby is a rabbit and rabbit is a herbivore.';

let server: ChildProcess;
const api = createApi(BASE);

async function waitForHealth(timeoutMs: number): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    if (await api.health()) return;
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error(`service did not come up on ${BASE}`);
}

function lastSystem(store: DialogueStore): Extract<Message, { kind: 'system' }> {
  const message = store.state.messages.at(-1);
  if (message?.kind !== 'system') {
    throw new Error(`expected a system message, got ${JSON.stringify(message)}`);
  }
  return message;
}

function panes() {
  document.body.innerHTML =
    '<div id="chat"></div><div id="tree"></div><div id="controls"></div>';
  return {
    chat: document.getElementById('chat')!,
    tree: document.getElementById('tree')!,
    controls: document.getElementById('controls')!,
  };
}

function renderAll(store: DialogueStore, p: ReturnType<typeof panes>) {
  renderChatPane(p.chat, store.state, store, api);
  renderTreePane(p.tree, store.state, store, api);
  renderControls(p.controls, store.state, store);
}

function displayedSentences(chat: HTMLElement): string[] {
  return Array.from(chat.querySelectorAll('.bubble.system .sentence')).map(
    (node) => node.textContent ?? '',
  );
}

beforeAll(async () => {
  server = spawn('python3', ['-m', 'explikit.cli', 'serve', '--port', String(PORT)], {
    stdio: ['ignore', 'pipe', 'pipe'],
  });
  server.on('error', (error) => {
    throw error;
  });
  await waitForHealth(55000);
}, 60000);

afterAll(() => {
  server?.kill('SIGTERM');
});

describe('dialogue scenario end-to-end', () => {
  it('completes classify -> drill-down -> image -> back with byte-equal sentences', async () => {
    const store = new DialogueStore(api);
    const p = panes();

    // A/B: classify and receive the local explanation
    await store.startDialogue('tracks_down(bobby,dandelion)');
    expect(lastSystem(store).response.text).toBe(CLASSIFY_TEXT);
    expect(lastSystem(store).response.choices.map((c) => c.text)).toEqual([
      'Bobby is a herbivore',
      'dandelion is a plant',
    ]);
    renderAll(store, p);
    expect(displayedSentences(p.chat).at(-1)).toBe(CLASSIFY_TEXT);
    expect(store.state.cursorPath).toEqual([0]);

    // C.a: drill down into the first reason
    await store.drillDown(1);
    const drillResponse = lastSystem(store).response;
    expect(drillResponse.text).toBe(DRILL_TEXT);
    renderAll(store, p);
    expect(displayedSentences(p.chat).at(-1)).toBe(drillResponse.text);
    expect(store.state.cursorPath).toEqual([0, 1]);

    // the tree pane highlights the server's cursor
    const cursorLabel = p.tree.querySelector('.head.cursor');
    expect(cursorLabel?.textContent).toBe('is(bobby,herbivore)');

    // C.b: ask for a visual explanation
    await store.showImage();
    const imageResponse = lastSystem(store).response;
    expect(imageResponse.images.length).toBeGreaterThan(0);
    expect(imageResponse.images[0].constant).toBe('bobby');
    renderAll(store, p);
    const bubbles = p.chat.querySelectorAll('.bubble.system');
    const img = bubbles[bubbles.length - 1].querySelector('img') as HTMLImageElement;
    expect(img).not.toBeNull();
    const media = await fetch(api.mediaUrl(imageResponse.images[0].url));
    expect(media.status).toBe(200);
    expect(media.headers.get('content-type')).toBe(imageResponse.images[0].mime);

    // D: return to the last explanation; the sentence is byte-identical
    await store.back();
    expect(lastSystem(store).response.text).toBe(CLASSIFY_TEXT);
    renderAll(store, p);
    expect(displayedSentences(p.chat).at(-1)).toBe(CLASSIFY_TEXT);
    expect(store.state.cursorPath).toEqual([0]);

    // back is disabled at the root
    const back = p.controls.querySelector('button.back') as HTMLButtonElement;
    expect(back.disabled).toBe(true);

    // every system sentence ever displayed matches its response byte-for-byte
    const expected = store.state.messages
      .filter((m): m is Extract<Message, { kind: 'system' }> => m.kind === 'system')
      .map((m) => m.response.text);
    expect(displayedSentences(p.chat)).toEqual(expected);
  });

  it('answers the global what-does-it-mean question', async () => {
    const store = new DialogueStore(api);
    const p = panes();
    await store.whatMeans('tracks_down');
    const text = lastSystem(store).response.text;
    const sentences = text.split('\n');
    expect(sentences).toHaveLength(2);
    expect(sentences).toContain(
      'A tracks down B, because A is a carnivore and B is a herbivore.',
    );
    renderAll(store, p);
    expect(displayedSentences(p.chat).at(-1)).toBe(text);
  });

  it('shows a negative classification notice without a tree', async () => {
    const store = new DialogueStore(api);
    const p = panes();
    await store.startDialogue('tracks_down(argo,argo)');
    const last = store.state.messages.at(-1);
    expect(last?.kind).toBe('negative');
    expect(store.state.treeSnapshot).toBeNull();
    renderAll(store, p);
    expect(p.chat.querySelector('.bubble.negative')).not.toBeNull();
    expect(p.tree.querySelector('.placeholder')).not.toBeNull();
  });

  it('surfaces malformed atoms as inline errors', async () => {
    const store = new DialogueStore(api);
    await store.startDialogue('tracks_down(bobby');
    const last = store.state.messages.at(-1);
    expect(last?.kind === 'error' && last.source === 'api').toBe(true);
  });

  it('drills down by clicking a tree child of the cursor', async () => {
    const store = new DialogueStore(api);
    const p = panes();
    await store.startDialogue('tracks_down(bobby,dandelion)');
    renderAll(store, p);
    const clickable = Array.from(
      p.tree.querySelectorAll('.head.clickable'),
    ) as HTMLElement[];
    expect(clickable.map((n) => n.textContent)).toEqual([
      'is(bobby,herbivore)',
      'is(dandelion,plant)',
    ]);
    clickable[1].click();
    await new Promise((resolve) => setTimeout(resolve, 300)); // click handler is async
    expect(lastSystem(store).response.text).toBe(
      'dandelion is a plant, because dandelion is a flower and flower is a plant.',
    );
    expect(store.state.cursorPath).toEqual([0, 5]);
  });
});
