import { Api } from './api';
import { DialogueStore, Message, UiState } from './state';
import type { TreeNode, TreeSnapshot } from './types';

export interface Panes {
  chat: HTMLElement;
  tree: HTMLElement;
  controls: HTMLElement;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderMessage(message: Message, store: DialogueStore, api: Api): HTMLElement {
  if (message.kind === 'user') {
    return el('div', 'bubble user', message.label);
  }
  if (message.kind === 'negative') {
    return el('div', 'bubble negative', message.text);
  }
  if (message.kind === 'error') {
    return el('div', `bubble error ${message.source}`, message.text);
  }
  const bubble = el('div', 'bubble system');
  // textContent keeps the server's sentence byte-for-byte
  bubble.appendChild(el('div', 'sentence', message.response.text));
  for (const image of message.response.images) {
    const figure = el('figure', 'media');
    const img = el('img');
    img.src = api.mediaUrl(image.url);
    img.alt = image.caption ?? image.constant;
    figure.appendChild(img);
    if (image.caption) figure.appendChild(el('figcaption', undefined, image.caption));
    bubble.appendChild(figure);
  }
  return bubble;
}

function renderChoices(state: UiState, store: DialogueStore): HTMLElement {
  const bar = el('div', 'choices');
  const response = state.lastResponse;
  if (response && !state.ended) {
    for (const choice of response.choices) {
      const button = el('button', 'choice', `${choice.index}. ${choice.text}`);
      button.disabled = state.pending;
      button.onclick = () => void store.drillDown(choice.index);
      bar.appendChild(button);
    }
  }
  return bar;
}

function renderNode(
  snapshot: TreeSnapshot,
  node: TreeNode,
  state: UiState,
  store: DialogueStore,
  api: Api,
): HTMLElement {
  const cursor = state.cursorPath[state.cursorPath.length - 1];
  const onPath = state.cursorPath.includes(node.id);
  const item = el('li', 'node');
  const label = el('span', 'head', node.head.text);
  label.dataset.nodeId = String(node.id);
  if (node.id === cursor) label.classList.add('cursor');
  if (onPath) label.classList.add('on-path');
  item.appendChild(label);

  // children of the cursor are clickable drill-down choices
  const parent = snapshot.nodes.find((n) => n.children.includes(node.id));
  if (parent && parent.id === cursor) {
    const index = parent.children.indexOf(node.id) + 1;
    label.classList.add('clickable');
    label.onclick = () => void store.drillDown(index);
  }

  if (node.children.length === 0 && node.images.length > 0) {
    const thumb = el('img', 'thumb');
    thumb.src = api.mediaUrl(node.images[0].url);
    thumb.alt = node.images[0].caption ?? node.head.text;
    item.appendChild(thumb);
  }

  // the explored path stays expanded; unexplored siblings stay collapsed
  if (node.children.length > 0 && (onPath || node.id === cursor)) {
    const list = el('ul', 'children');
    for (const childId of node.children) {
      const child = snapshot.nodes.find((n) => n.id === childId);
      if (child) list.appendChild(renderNode(snapshot, child, state, store, api));
    }
    item.appendChild(list);
  } else if (node.children.length > 0) {
    item.appendChild(el('span', 'collapsed', `(${node.children.length} reasons)`));
  }
  return item;
}

export function renderTreePane(
  pane: HTMLElement,
  state: UiState,
  store: DialogueStore,
  api: Api,
): void {
  pane.replaceChildren();
  const snapshot = state.treeSnapshot;
  if (!snapshot) {
    pane.appendChild(el('p', 'placeholder', 'No explanation yet.'));
    return;
  }
  pane.appendChild(el('h2', undefined, 'Explanatory tree'));
  pane.appendChild(el('p', 'model-clause', snapshot.model_clause));
  const rootNode = snapshot.nodes.find((n) => n.id === snapshot.root);
  if (rootNode) {
    const list = el('ul', 'tree-root');
    list.appendChild(renderNode(snapshot, rootNode, state, store, api));
    pane.appendChild(list);
  }
}

export function renderChatPane(
  pane: HTMLElement,
  state: UiState,
  store: DialogueStore,
  api: Api,
): void {
  pane.replaceChildren();
  for (const message of state.messages) {
    pane.appendChild(renderMessage(message, store, api));
  }
  pane.appendChild(renderChoices(state, store));
  pane.scrollTop = pane.scrollHeight;
}

export function renderControls(
  pane: HTMLElement,
  state: UiState,
  store: DialogueStore,
): void {
  pane.replaceChildren();
  const form = el('form', 'classify-form');
  const input = el('input');
  input.type = 'text';
  input.placeholder = 'tracks_down(bobby,dandelion)';
  input.id = 'atom-input';
  const go = el('button', 'primary', 'Classify');
  go.type = 'submit';
  go.disabled = state.pending || state.ended;
  form.append(input, go);
  form.onsubmit = (event) => {
    event.preventDefault();
    if (input.value.trim()) void store.startDialogue(input.value);
  };
  pane.appendChild(form);

  const nav = el('div', 'nav');
  const backButton = el('button', 'back', 'Back');
  backButton.disabled = state.pending || state.ended || !state.treeSnapshot || store.atRoot;
  backButton.onclick = () => void store.back();
  const whyButton = el('button', undefined, 'Why?');
  whyButton.disabled = state.pending || state.ended || !state.treeSnapshot;
  whyButton.onclick = () => void store.send({ type: 'why' });
  const imageButton = el('button', undefined, 'Show image');
  imageButton.disabled = state.pending || state.ended || !state.treeSnapshot;
  imageButton.onclick = () => void store.showImage();
  const meaningButton = el('button', undefined, 'What does tracks_down mean?');
  meaningButton.disabled = state.pending || state.ended;
  meaningButton.onclick = () => void store.whatMeans('tracks_down');
  const quitButton = el('button', 'quit', 'Quit');
  quitButton.disabled = state.pending || state.ended;
  quitButton.onclick = () => void store.quit();
  nav.append(backButton, whyButton, imageButton, meaningButton, quitButton);
  pane.appendChild(nav);
}

export function mount(panes: Panes, store: DialogueStore, api: Api): () => void {
  return store.subscribe((state) => {
    renderChatPane(panes.chat, state, store, api);
    renderTreePane(panes.tree, state, store, api);
    renderControls(panes.controls, state, store);
  });
}
