// Wire types mirroring the service's JSON schemas (docs/schemas in the repo).

export type SessionState = 'awaiting_query' | 'exploring' | 'ended';

export interface ImageRef {
  constant: string;
  url: string;
  mime: string;
  caption?: string | null;
}

export interface Choice {
  index: number;
  text: string;
}

export interface DialogueResponse {
  text: string;
  images: ImageRef[];
  choices: Choice[];
  state_after: SessionState;
  classification?: 'positive' | 'negative';
}

export type DialogueRequest =
  | { type: 'classify'; atom: string }
  | { type: 'what_means'; predicate: string }
  | { type: 'why' }
  | { type: 'drill_down'; index: number }
  | { type: 'show_image'; constant?: string }
  | { type: 'back' }
  | { type: 'quit' };

export interface AtomJson {
  text: string;
  predicate: string;
  args: Array<{ const?: string; var?: string }>;
}

export interface TreeNode {
  id: number;
  head: AtomJson;
  body: AtomJson[];
  children: number[];
  depth: number;
  images: ImageRef[];
}

export interface TreeSnapshot {
  query: AtomJson;
  root: number;
  model_clause: string;
  nodes: TreeNode[];
  cursor: number;
  path: number[];
}

export interface ModelClause {
  text: string;
  head: AtomJson;
  body: AtomJson[];
}

export interface ModelView {
  target: string;
  clauses: ModelClause[];
}
