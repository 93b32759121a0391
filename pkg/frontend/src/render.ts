// Pure HTML renderers. No DOM access here; app.ts owns events and state.

import type {
  QuestionPayload,
  SessionResult,
  SessionStatus,
} from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function samplesBlock(samples: string[]): string {
  if (!samples.length) return "";
  const items = samples
    .map((s) => `<li><code>${escapeHtml(s)}</code></li>`)
    .join("");
  return `<details class="samples"><summary>context</summary><ul>${items}</ul></details>`;
}

function renderMessageLoss(q: QuestionPayload): string {
  return `
    <p>Does this template carry <em>all</em> the message you need?</p>
    <p class="target"><code>${escapeHtml(q.target_display)}</code></p>
    ${samplesBlock(q.samples)}
    <div class="actions">
      <button data-action="loss" data-loss="true">Something is missing</button>
      <button data-action="loss" data-loss="false">Message is complete</button>
    </div>`;
}

function renderDummyToken(q: QuestionPayload, selected: Set<number>): string {
  const chips = q.target
    .map((tok, i) => {
      const cls = selected.has(i) ? "token selected" : "token";
      return `<button class="${cls}" data-action="toggle-token" data-token="${i}">${escapeHtml(tok)}</button>`;
    })
    .join(" ");
  const disabled = selected.size === 0 ? " disabled" : "";
  return `
    <p>Click the tokens that carry no meaning (leaked parameters), then submit.</p>
    <p class="target">${chips}</p>
    ${samplesBlock(q.samples)}
    <div class="actions">
      <button data-action="submit-tokens"${disabled}>Remove selected</button>
      <button data-action="no-dummy">Cannot identify any</button>
    </div>`;
}

function candidateHtml(tokens: string[], overlap: number[]): string {
  const hot = new Set(overlap);
  return tokens
    .map((tok, i) =>
      hot.has(i)
        ? `<mark>${escapeHtml(tok)}</mark>`
        : escapeHtml(tok),
    )
    .join(" ");
}

function renderSelect(q: QuestionPayload): string {
  // Candidates render exactly in server order; rank statistics depend on it.
  const rows = q.candidates
    .map(
      (cand, i) => `
      <li>
        <button data-action="pick" data-candidate="${i}">this one</button>
        <code>${candidateHtml(cand.tokens, cand.overlap)}</code>
        <span class="lcs">overlap ${cand.lcs_len}</span>
      </li>`,
    )
    .join("");
  const list = q.candidates.length
    ? `<ol class="candidates">${rows}</ol>`
    : `<p class="empty">No similar templates yet.</p>`;
  return `
    <p>Which existing template carries the same message as this?</p>
    <p class="target"><code>${escapeHtml(q.target_display)}</code></p>
    ${samplesBlock(q.samples)}
    ${list}
    <div class="actions">
      <button data-action="none">None of these</button>
    </div>`;
}

export function renderQuestion(
  q: QuestionPayload,
  selectedTokens: Set<number>,
): string {
  const body =
    q.kind === "message_loss"
      ? renderMessageLoss(q)
      : q.kind === "dummy_token"
        ? renderDummyToken(q, selectedTokens)
        : renderSelect(q);
  return `<div class="question" data-seq="${q.seq}">
    <h3>Question #${q.seq} <span class="origin">${escapeHtml(q.origin)}</span></h3>
    ${body}
  </div>`;
}

export function renderStatus(status: SessionStatus): string {
  const { phase, done, total } = status.progress;
  const pct = total > 0 ? Math.floor((100 * done) / total) : 0;
  const c = status.counters;
  return `
    <div class="phase">${escapeHtml(phase)} — ${done}/${total} (${pct}%), state: ${escapeHtml(status.state)}</div>
    <div class="bar"><div class="fill" style="width:${pct}%"></div></div>
    <div class="ticker">
      answered: ${c.n_total}
      (loss ${c.n_message_loss} / select ${c.n_select} / dummy ${c.n_dummy_token})
    </div>
    ${status.error ? `<div class="error">${escapeHtml(status.error)}</div>` : ""}`;
}

export function renderResult(result: SessionResult): string {
  const report = result.report;
  const metrics = report
    ? `<p class="metrics">
         GA ${report.ga_before.toFixed(4)} → <strong>${report.ga_after.toFixed(4)}</strong>,
         MA ${report.ma_before.toFixed(4)} → <strong>${report.ma_after.toFixed(4)}</strong>
       </p>`
    : `<p class="metrics">No ground truth supplied; accuracy not computed.</p>`;
  const clusters = result.clustering.clusters
    .map((c) => {
      const shown = c.display ?? c.template.join(" ");
      const samples = (c.samples ?? [])
        .map((s) => `<li><code>${escapeHtml(s)}</code></li>`)
        .join("");
      return `<li>
        <code class="template">${escapeHtml(shown)}</code>
        <span class="size">${c.members.length} logs</span>
        ${samples ? `<ul class="samples">${samples}</ul>` : ""}
      </li>`;
    })
    .join("");
  return `${metrics}<ol class="clusters">${clusters}</ol>`;
}

export function renderSessionList(sessions: SessionStatus[]): string {
  if (!sessions.length) {
    return `<p class="empty">No sessions yet. Create one above.</p>`;
  }
  const rows = sessions
    .map(
      (s) => `<li>
        <button data-action="open-session" data-session="${escapeHtml(s.id)}">open</button>
        <code>${escapeHtml(s.id.slice(0, 8))}</code> — ${escapeHtml(s.state)}
      </li>`,
    )
    .join("");
  return `<ul class="sessions">${rows}</ul>`;
}

export function renderBanner(message: string): string {
  return `<div class="banner">
    ${escapeHtml(message)}
    <button data-action="retry">retry</button>
  </div>`;
}
