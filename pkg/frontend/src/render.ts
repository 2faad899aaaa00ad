// HTML renderers for the three wizard panes: knowledge-base browser on the
// left, decision panel in the center, diagnostics on the right. Pure
// string-in/string-out so they are testable without a DOM.

import type { SessionView } from './state.js';
import type { ApiError, ConceptInfo, PreviewResponse } from './types.js';

export function esc(text: string): string {
  return text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

export function renderConceptList(concepts: ConceptInfo[], selected: string[]): string {
  const rows = concepts.map((c) => {
    const on = selected.includes(c.id);
    const params = c.parameters.length
      ? `<span class="params">${c.parameters.map((p) => esc(p.name)).join(', ')}</span>`
      : '';
    return `<li class="concept ${on ? 'selected' : ''}" data-concept="${esc(c.id)}">
      <button class="toggle" data-action="${on ? 'deselect' : 'select'}" data-concept="${esc(c.id)}">${on ? '−' : '+'}</button>
      <span class="id">${esc(c.id)}</span>
      <span class="kind kind-${esc(c.kind)}">${esc(c.kind)}</span>
      ${params}
      <span class="desc">${esc(c.description)}</span>
    </li>`;
  });
  return `<ul class="concepts">${rows.join('\n')}</ul>`;
}

export function renderSelected(view: SessionView): string {
  const kinds = Object.keys(view.selectedByKind).sort();
  if (kinds.length === 0) {
    return '<p class="empty">Nothing selected yet. Pick building blocks on the left.</p>';
  }
  const groups = kinds.map((kind) => {
    const items = (view.selectedByKind[kind] ?? [])
      .map((id) => `<li data-concept="${esc(id)}">${esc(id)}</li>`).join('');
    return `<section class="group"><h3>${esc(kind)}</h3><ul>${items}</ul></section>`;
  });
  return groups.join('\n');
}

export function renderPending(view: SessionView): string {
  if (view.pending.length === 0) {
    return '<p class="empty">No pending consequences.</p>';
  }
  const items = view.pending.map((id) =>
    `<li><span>${esc(id)}</span>
     <button class="accept" data-action="accept-consequence" data-concept="${esc(id)}">accept</button></li>`);
  return `<ul class="pending">${items.join('\n')}</ul>
    <button class="accept-all" data-action="accept-all">accept all</button>`;
}

export function renderDiagnostics(view: SessionView): string {
  const parts: string[] = [];
  for (const violation of view.violations) {
    const members = violation.members.map((m) =>
      `<span class="member" data-concept="${esc(m)}">${esc(m)}</span>`).join(' ');
    parts.push(`<div class="banner violation violation-${esc(violation.kind)}">
      <strong>${esc(violation.kind)}</strong> ${members}
      <p>${esc(violation.message)}</p></div>`);
  }
  for (const advice of view.advice) {
    parts.push(`<div class="banner advice advice-${esc(advice.severity)}">
      <strong>${esc(advice.severity)}</strong> ${esc(advice.id)}
      <p>${esc(advice.message)}</p></div>`);
  }
  if (view.lastError) {
    parts.push(`<div class="banner error"><strong>${esc(view.lastError.code)}</strong>
      <p>${esc(view.lastError.message)}</p></div>`);
  }
  if (parts.length === 0) {
    parts.push('<p class="empty all-clear">No violations.</p>');
  }
  return parts.join('\n');
}

export function renderDelta(view: SessionView): string {
  const delta = view.lastDelta;
  if (!delta) {
    return '';
  }
  const bits: string[] = [];
  if (delta['newly-pending'].length) {
    bits.push(`now pending: ${delta['newly-pending'].map(esc).join(', ')}`);
  }
  if (delta['newly-violated'].length) {
    bits.push(`new violations: ${delta['newly-violated'].map((v) => esc(v.kind)).join(', ')}`);
  }
  if (delta['newly-advised'].length) {
    bits.push(`new advice: ${delta['newly-advised'].map(esc).join(', ')}`);
  }
  if (delta.cleared.pending.length || delta.cleared.violations.length) {
    bits.push('cleared: '
      + [...delta.cleared.pending,
         ...delta.cleared.violations.map((v) => v.kind)].map(esc).join(', '));
  }
  return bits.length ? `<div class="delta">${bits.join(' · ')}</div>` : '';
}

export function renderHistory(view: SessionView): string {
  const rows = view.log.map((d) => {
    const detail = d.action === 'set-param' ? ` ${d.param}=${d.value}`
      : d.action === 'rename-token' ? ` ${d.slot}→${d.new}` : '';
    return `<li>#${d.seq} ${esc(d.action)} <b>${esc(d.concept)}</b>${esc(detail)}</li>`;
  });
  return `<ol class="history">${rows.join('\n')}</ol>`;
}

export function renderStateHash(view: SessionView): string {
  return `<code class="state-hash" title="state hash">${esc(view.stateHash)}</code>`;
}

export function renderPreview(preview: PreviewResponse | null,
                              error: ApiError | null, raw: string): string {
  if (error) {
    const line = Number(error.details['line'] ?? 0);
    const column = Number(error.details['column'] ?? 0);
    const marked = markPosition(raw, line, column);
    return `<div class="preview-error">
      <pre class="sample">${marked}</pre>
      <p class="message">${esc(error.message)}</p></div>`;
  }
  if (!preview) {
    return '';
  }
  const productions = preview.grammar.productions.map((p) =>
    `<li><code>${esc(p)}</code></li>`).join('');
  return `<div class="preview">
    <section class="grammar"><h3>grammar (start ${esc(preview.grammar.start)})</h3>
      <ul>${productions}</ul></section>
    <section class="side-by-side">
      <pre class="raw">${esc(raw)}</pre>
      <pre class="formatted">${esc(preview.formatted)}</pre>
    </section></div>`;
}

/** Inline error marker: caret under the reported 1-based line:column. */
export function markPosition(text: string, line: number, column: number): string {
  const lines = text.split('\n');
  if (line < 1 || line > lines.length) {
    return esc(text);
  }
  const out: string[] = [];
  lines.forEach((content, index) => {
    out.push(esc(content));
    if (index + 1 === line) {
      out.push(`${' '.repeat(Math.max(column - 1, 0))}<span class="caret">^</span>`);
    }
  });
  return out.join('\n');
}
