// Wizard session store. Optimistic updates are disabled by design: the
// constraint feedback *is* the product, so every state change waits for the
// server envelope and copies it verbatim. Nothing here recomputes closures,
// conflicts, advice, or formatting.

import type { LdaClient } from './api.js';
import type {
  ApiError, DecisionRecord, PreviewResponse, SessionData, UpdateDelta,
} from './types.js';

export type DecisionAction =
  | { action: 'select'; concept: string }
  | { action: 'deselect'; concept: string }
  | { action: 'accept-consequence'; concept: string }
  | { action: 'set-param'; concept: string; param: string; value: string }
  | { action: 'rename-token'; concept: string; slot: string; new: string };

export interface SessionView {
  sessionId: string;
  stateHash: string;
  selectedByKind: Record<string, string[]>;
  selected: string[];
  pending: string[];
  violations: SessionData['violations'];
  advice: SessionData['advice'];
  log: DecisionRecord[];
  lastDelta: UpdateDelta | null;
  lastError: ApiError | null;
}

function viewOf(data: SessionData, delta: UpdateDelta | null): SessionView {
  return {
    sessionId: data['session-id'],
    stateHash: data['state-hash'],
    selectedByKind: data['selected-by-kind'],
    selected: data.selected,
    pending: data.pending,
    violations: data.violations,
    advice: data.advice,
    log: data.log,
    lastDelta: delta,
    lastError: null,
  };
}

export class SessionStore {
  private view_: SessionView | null = null;
  private listeners: ((view: SessionView) => void)[] = [];

  constructor(private readonly client: LdaClient) {}

  get view(): SessionView {
    if (!this.view_) {
      throw new Error('no open session');
    }
    return this.view_;
  }

  subscribe(listener: (view: SessionView) => void) {
    this.listeners.push(listener);
  }

  private commit(view: SessionView) {
    this.view_ = view;
    for (const listener of this.listeners) {
      listener(view);
    }
  }

  async open(): Promise<SessionView> {
    const { envelope } = await this.client.createSession();
    if (!envelope.ok || !envelope.data) {
      throw new Error(envelope.error?.message ?? 'session create failed');
    }
    this.commit(viewOf(envelope.data, null));
    return this.view;
  }

  /** Refetch the session; reloading renders a view with the same state-hash. */
  async refresh(): Promise<SessionView> {
    const { envelope } = await this.client.getSession(this.view.sessionId);
    if (!envelope.ok || !envelope.data) {
      throw new Error(envelope.error?.message ?? 'session fetch failed');
    }
    this.commit(viewOf(envelope.data, this.view_?.lastDelta ?? null));
    return this.view;
  }

  /**
   * Post one decision with the next sequence number. On a 409 (someone else
   * advanced the session) refetch and replay the action exactly once. Domain
   * errors land in the view, never thrown away.
   */
  async decide(action: DecisionAction): Promise<SessionView> {
    const attempt = async (): Promise<{ status: number; ok: boolean }> => {
      const record: DecisionRecord = { seq: this.view.log.length + 1, ...action };
      const { status, envelope } = await this.client.postDecision(
        this.view.sessionId, record);
      if (envelope.ok && envelope.data) {
        this.commit(viewOf(envelope.data.session, envelope.data.update));
      } else if (envelope.error && status !== 409) {
        this.commit({ ...this.view, lastError: envelope.error });
      }
      return { status, ok: envelope.ok };
    };

    const first = await attempt();
    if (first.status === 409) {
      await this.refresh();
      await attempt();
    }
    return this.view;
  }

  async finalize(name: string, start: string) {
    const { envelope } = await this.client.finalize(this.view.sessionId, name, start);
    if (!envelope.ok && envelope.error) {
      this.commit({ ...this.view, lastError: envelope.error });
    }
    return envelope;
  }

  /** Empty sample: empty preview, no request, no error. */
  async preview(program: string, start: string):
      Promise<{ preview: PreviewResponse | null; error: ApiError | null }> {
    if (!program.trim()) {
      return { preview: { grammar: { start, productions: [], tokens: [] },
                          typed: false, formatted: '' },
               error: null };
    }
    const { envelope } = await this.client.preview(this.view.sessionId, program, start);
    if (envelope.ok && envelope.data) {
      return { preview: envelope.data, error: null };
    }
    return { preview: null, error: envelope.error ?? null };
  }

  get finalizeEnabled(): boolean {
    return this.view_ !== null
      && this.view.pending.length === 0
      && this.view.violations.length === 0
      && this.view.selected.length > 0;
  }
}
