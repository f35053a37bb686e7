import { createApi } from './api';
import { mount } from './render';
import { DialogueStore } from './state';

// Same-origin by default; override with ?service=http://host:port or a
// window.EXPLIKIT_BASE_URL set by the embedding page.
declare global {
  interface Window {
    EXPLIKIT_BASE_URL?: string;
  }
}

function baseUrl(): string {
  const fromQuery = new URLSearchParams(window.location.search).get('service');
  return fromQuery ?? window.EXPLIKIT_BASE_URL ?? '';
}

function main(): void {
  const api = createApi(baseUrl());
  const store = new DialogueStore(api);
  mount(
    {
      chat: document.getElementById('chat')!,
      tree: document.getElementById('tree')!,
      controls: document.getElementById('controls')!,
    },
    store,
    api,
  );
}

document.addEventListener('DOMContentLoaded', main);
