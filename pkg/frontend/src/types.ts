// Wire types of the lda/1 API. The server is the sole authority for every
// derived fact (closures, conflicts, formatting); the client only displays
// what an envelope carried.

export interface ApiError {
  code: string;
  message: string;
  details: Record<string, unknown>;
}

export interface Envelope<T> {
  ok: boolean;
  data?: T;
  error?: ApiError;
  'api-version': string;
}

export interface ConceptInfo {
  id: string;
  kind: string;
  description: string;
  parameters: { name: string; values: string[]; default: string }[];
}

export interface Violation {
  kind: string;
  members: string[];
  message: string;
}

export interface Advice {
  id: string;
  message: string;
  severity: 'hint' | 'warning';
}

export interface DecisionRecord {
  seq: number;
  action: string;
  concept: string;
  param?: string;
  value?: string;
  slot?: string;
  new?: string;
}

export interface SessionData {
  'session-id': string;
  'kb-ref': string;
  'state-hash': string;
  log: DecisionRecord[];
  selected: string[];
  'selected-by-kind': Record<string, string[]>;
  params: Record<string, string>;
  pending: string[];
  violations: Violation[];
  advice: Advice[];
}

export interface UpdateDelta {
  'newly-pending': string[];
  'newly-violated': Violation[];
  'newly-advised': string[];
  cleared: { pending: string[]; violations: Violation[]; advice: string[] };
}

export interface DiagnosticsData {
  violations: Violation[];
  pending: string[];
  advice: Advice[];
  selected: Record<string, string[]>;
}

export interface DecisionResponse {
  update: UpdateDelta;
  session: SessionData;
  'state-hash': string;
}

export interface FinalizeResponse {
  name: string;
  start: string;
  blocks: string[];
  description: unknown;
}

export interface PreviewResponse {
  grammar: { start: string; productions: string[]; tokens: string[] };
  typed: boolean;
  formatted: string;
  term?: unknown;
}
