// Wizard bootstrap: wires DOM events to the store flows and refreshes the
// three panes after every envelope. One active session per tab; actions are
// serialized through a simple busy latch.

import { LdaClient } from './api.js';
import {
  renderConceptList, renderDelta, renderDiagnostics, renderHistory,
  renderPending, renderPreview, renderSelected, renderStateHash,
} from './render.js';
import { SessionStore, DecisionAction } from './state.js';
import type { ConceptInfo } from './types.js';

const client = new LdaClient('');
const store = new SessionStore(client);

let concepts: ConceptInfo[] = [];
let busy = false;

function pane(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) {
    throw new Error(`missing pane #${id}`);
  }
  return el;
}

function redraw() {
  const view = store.view;
  const filter = (pane('kb-query') as HTMLInputElement).value.trim().toLowerCase();
  const visible = filter
    ? concepts.filter((c) => c.id.includes(filter) || c.kind === filter
        || c.description.toLowerCase().includes(filter))
    : concepts;
  pane('kb-list').innerHTML = renderConceptList(visible, view.selected);
  pane('selected').innerHTML = renderSelected(view);
  pane('pending').innerHTML = renderPending(view);
  pane('delta').innerHTML = renderDelta(view);
  pane('diagnostics').innerHTML = renderDiagnostics(view);
  pane('history').innerHTML = renderHistory(view);
  pane('state-hash').innerHTML = renderStateHash(view);
  (pane('finalize') as HTMLButtonElement).disabled = !store.finalizeEnabled;
}

async function run(flow: () => Promise<unknown>) {
  if (busy) {
    return;         // requests are serialized per tab
  }
  busy = true;
  try {
    await flow();
  } finally {
    busy = false;
    redraw();
  }
}

function decisionFromClick(target: HTMLElement): DecisionAction | null {
  const action = target.dataset['action'];
  const concept = target.dataset['concept'];
  if (!action || action === 'accept-all') {
    return null;
  }
  if (action === 'select' || action === 'deselect' || action === 'accept-consequence') {
    return concept ? { action, concept } : null;
  }
  return null;
}

async function acceptAll() {
  // accept the head repeatedly; the server recomputes pending every time
  while (store.view.pending.length > 0) {
    const head = store.view.pending[0]!;
    await store.decide({ action: 'accept-consequence', concept: head });
  }
}

export async function boot() {
  concepts = (await client.concepts()).envelope.data ?? [];
  await store.open();
  store.subscribe(() => redraw());

  document.body.addEventListener('click', (event) => {
    const target = event.target as HTMLElement;
    if (target.dataset['action'] === 'accept-all') {
      void run(acceptAll);
      return;
    }
    const decision = decisionFromClick(target);
    if (decision) {
      void run(() => store.decide(decision));
    }
  });

  pane('kb-query').addEventListener('input', () => redraw());

  pane('finalize').addEventListener('click', () => void run(async () => {
    const name = (pane('design-name') as HTMLInputElement).value || 'Untitled';
    const start = (pane('start-symbol') as HTMLInputElement).value || 'Prog';
    const envelope = await store.finalize(name, start);
    if (envelope.ok) {
      pane('preview-pane').innerHTML = '<p class="empty">Finalized. Try a sample.</p>';
    }
  }));

  pane('preview-run').addEventListener('click', () => void run(async () => {
    const start = (pane('start-symbol') as HTMLInputElement).value || 'Prog';
    const raw = (pane('sample') as HTMLTextAreaElement).value;
    const { preview, error } = await store.preview(raw, start);
    pane('preview-pane').innerHTML = renderPreview(preview, error, raw);
  }));

  redraw();
}

if (typeof document !== 'undefined' && document.getElementById('kb-list')) {
  void boot();
}
