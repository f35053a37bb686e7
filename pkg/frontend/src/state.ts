import { Api, ApiError } from './api';
import type { DialogueRequest, DialogueResponse, TreeSnapshot } from './types';

/** One entry of the conversation pane. System sentences keep the server's
 * response verbatim: the UI never mutates explanation content. */
export type Message =
  | { kind: 'user'; label: string }
  | { kind: 'system'; response: DialogueResponse }
  | { kind: 'negative'; text: string }
  | { kind: 'error'; source: 'api' | 'transport'; text: string };

export interface UiState {
  sessionId: string | null;
  messages: Message[];
  treeSnapshot: TreeSnapshot | null;
  cursorPath: number[];
  pending: boolean;
  ended: boolean;
  lastResponse: DialogueResponse | null;
}

export type Listener = (state: UiState) => void;

function describe(request: DialogueRequest): string {
  switch (request.type) {
    case 'classify':
      return `Classify ${request.atom}`;
    case 'what_means':
      return `What does ${request.predicate} mean?`;
    case 'why':
      return 'Why is that?';
    case 'drill_down':
      return `Why reason ${request.index}?`;
    case 'show_image':
      return request.constant ? `Show an image of ${request.constant}` : 'Show an image';
    case 'back':
      return 'Go back';
    case 'quit':
      return 'Quit';
  }
}

/** Session store: every transition is driven by a server response, and the
 * tree snapshot (with the authoritative cursor path) is refetched after each
 * request. One request in flight at a time. */
export class DialogueStore {
  state: UiState = {
    sessionId: null,
    messages: [],
    treeSnapshot: null,
    cursorPath: [],
    pending: false,
    ended: false,
    lastResponse: null,
  };

  private listeners: Listener[] = [];

  constructor(private api: Api) {}

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    listener(this.state);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private notify(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  private update(patch: Partial<UiState>): void {
    this.state = { ...this.state, ...patch };
    this.notify();
  }

  /** Open a session (once) and classify the given example. */
  async startDialogue(atomText: string): Promise<void> {
    await this.send({ type: 'classify', atom: atomText.trim() });
  }

  async send(request: DialogueRequest): Promise<void> {
    if (this.state.pending || this.state.ended) return;
    this.update({
      pending: true,
      messages: [...this.state.messages, { kind: 'user', label: describe(request) }],
    });
    try {
      if (this.state.sessionId === null) {
        const sessionId = await this.api.createSession();
        this.update({ sessionId });
      }
      const response = await this.api.sendRequest(this.state.sessionId!, request);
      this.update({
        messages: [...this.state.messages, { kind: 'system', response }],
        lastResponse: response,
        ended: response.state_after === 'ended',
      });
      await this.refreshTree(response.state_after === 'exploring');
    } catch (error) {
      this.applyError(error);
    } finally {
      this.update({ pending: false });
    }
  }

  private async refreshTree(exploring: boolean): Promise<void> {
    if (!exploring) {
      this.update({ treeSnapshot: null, cursorPath: [] });
      return;
    }
    try {
      const snapshot = await this.api.fetchTree(this.state.sessionId!);
      this.update({ treeSnapshot: snapshot, cursorPath: snapshot.path });
    } catch {
      // a stale or missing snapshot is not fatal; the chat already advanced
      this.update({ treeSnapshot: null, cursorPath: [] });
    }
  }

  private applyError(error: unknown): void {
    if (error instanceof ApiError) {
      if (error.isNegativeClassification) {
        this.update({
          messages: [...this.state.messages, { kind: 'negative', text: error.message }],
          treeSnapshot: null,
          cursorPath: [],
          lastResponse: null,
        });
        return;
      }
      this.update({
        messages: [
          ...this.state.messages,
          { kind: 'error', source: 'api', text: error.message },
        ],
      });
      return;
    }
    const text = error instanceof Error ? error.message : String(error);
    this.update({
      messages: [
        ...this.state.messages,
        { kind: 'error', source: 'transport', text: `service unreachable: ${text}` },
      ],
    });
  }

  drillDown(index: number): Promise<void> {
    return this.send({ type: 'drill_down', index });
  }

  back(): Promise<void> {
    return this.send({ type: 'back' });
  }

  showImage(constant?: string): Promise<void> {
    return this.send(constant ? { type: 'show_image', constant } : { type: 'show_image' });
  }

  whatMeans(predicate: string): Promise<void> {
    return this.send({ type: 'what_means', predicate });
  }

  quit(): Promise<void> {
    return this.send({ type: 'quit' });
  }

  get atRoot(): boolean {
    return this.state.cursorPath.length <= 1;
  }
}
