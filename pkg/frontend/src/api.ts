// Thin typed client over fetch. Every call resolves to the envelope, never
// throws on domain errors: callers branch on ok/status so violations are
// surfaced, not swallowed.

import type {
  ConceptInfo, DecisionRecord, DecisionResponse, DiagnosticsData, Envelope,
  FinalizeResponse, PreviewResponse, SessionData,
} from './types.js';

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export interface ApiResult<T> {
  status: number;
  envelope: Envelope<T>;
}

export class LdaClient {
  constructor(
    private readonly base: string = '',
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown):
      Promise<ApiResult<T>> {
    const init: RequestInit = { method, headers: { 'content-type': 'application/json' } };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(this.base + path, init);
    const envelope = (await response.json()) as Envelope<T>;
    if (envelope['api-version'] !== 'lda/1') {
      throw new Error(`unexpected api version: ${envelope['api-version']}`);
    }
    return { status: response.status, envelope };
  }

  health() {
    return this.request<{ status: string }>('GET', '/health');
  }

  concepts() {
    return this.request<ConceptInfo[]>('GET', '/kb/concepts');
  }

  query(query: unknown) {
    return this.request<{ ids: string[] }>('POST', '/kb/query', { query });
  }

  createSession() {
    return this.request<SessionData>('POST', '/sessions', {});
  }

  getSession(sid: string) {
    return this.request<SessionData>('GET', `/sessions/${sid}`);
  }

  getDiagnostics(sid: string) {
    return this.request<DiagnosticsData>('GET', `/sessions/${sid}/diagnostics`);
  }

  postDecision(sid: string, decision: DecisionRecord) {
    return this.request<DecisionResponse>('POST', `/sessions/${sid}/decisions`, decision);
  }

  finalize(sid: string, name: string, start: string) {
    return this.request<FinalizeResponse>('POST', `/sessions/${sid}/finalize`,
                                          { name, start });
  }

  preview(sid: string, program: string, start: string) {
    return this.request<PreviewResponse>('POST', `/sessions/${sid}/preview`,
                                         { program, start });
  }
}
