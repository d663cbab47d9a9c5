// HTML/SVG string templates. Pure string-in/string-out so tests can assert
// on markup without a DOM; app.ts attaches listeners via event delegation.

import { GraphView, layout } from "./graph.js";
import type { ViewModel, CardView } from "./viewmodel.js";

export function esc(text: unknown): string {
  return String(text)
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

function card(view: CardView, actionable: boolean): string {
  const disabled = view.busy ? "disabled" : "";
  const buttons = actionable
    ? `<div class="card-actions">
        <button data-action="accept" data-rec="${esc(view.id)}" ${disabled}>Accept</button>
        <button data-action="reject" data-rec="${esc(view.id)}" ${disabled}>Reject</button>
      </div>`
    : "";
  const error = view.error
    ? `<p class="card-error">${esc(view.error)}</p>`
    : "";
  return `<article class="card card-${esc(view.kind)}" data-card="${esc(view.id)}" data-select="${esc(view.id)}">
    <header>${esc(view.title)}</header>
    <p class="detail">${esc(view.detail)}</p>
    ${error}${buttons}
  </article>`;
}

export function renderQuestions(vm: ViewModel): string {
  if (vm.questions.length === 0) {
    return `<p class="empty">No open questions.</p>`;
  }
  return vm.questions
    .map(
      (q) => `<article class="question" data-question="${esc(q.id)}">
      <p>${esc(q.text)}</p>
      <form data-answer="${esc(q.id)}">
        <input name="value" placeholder="answer" ${q.busy ? "disabled" : ""} required>
        <button type="submit" ${q.busy ? "disabled" : ""}>Answer</button>
      </form>
    </article>`,
    )
    .join("\n");
}

export function renderCards(vm: ViewModel): string {
  const proposed = vm.cards.length
    ? vm.cards.map((c) => card(c, true)).join("\n")
    : `<p class="empty">Nothing proposed right now.</p>`;
  const dismissed = vm.dismissed.length
    ? `<details><summary>Dismissed (${vm.dismissed.length})</summary>
       ${vm.dismissed.map((c) => card(c, false)).join("\n")}</details>`
    : "";
  const accepted = vm.accepted.length
    ? `<details><summary>Accepted (${vm.accepted.length})</summary>
       ${vm.accepted.map((c) => card(c, false)).join("\n")}</details>`
    : "";
  return proposed + dismissed + accepted;
}

export function renderSummary(vm: ViewModel): string {
  const docs = vm.documents
    .map(
      (d) =>
        `<li><code>${esc(d.id)}</code> <span class="dialect">${esc(d.dialect)}</span> ${esc(d.label)}</li>`,
    )
    .join("");
  const hardware = vm.hardware.length
    ? vm.hardware.map((h) => `<span class="chip">${esc(h)}</span>`).join(" ")
    : `<span class="empty">none yet</span>`;
  const attrs = vm.attributes
    .map(([k, v]) => `<li><code>${esc(k)}</code> = ${esc(v)}</li>`)
    .join("");
  return `
    <p class="revision">Project <code>${esc(vm.projectId)}</code> · revision <b data-revision>${vm.revision}</b></p>
    <h3>Documents</h3><ul>${docs}</ul>
    <h3>Hardware</h3><p data-hardware>${hardware}</p>
    <h3>Attributes</h3><ul>${attrs || "<li class='empty'>none</li>"}</ul>`;
}

export function renderGraph(
  view: GraphView,
  width = 520,
  height = 420,
): string {
  const positions = layout(view, width, height);
  const edges = view.edges
    .map((e) => {
      const a = positions.get(e.source)!;
      const b = positions.get(e.target)!;
      const cls = e.highlighted ? "edge hot" : "edge";
      return `<line class="${cls}" x1="${a.x.toFixed(1)}" y1="${a.y.toFixed(1)}" x2="${b.x.toFixed(1)}" y2="${b.y.toFixed(1)}"><title>${esc(e.predicate)}</title></line>`;
    })
    .join("");
  const nodes = view.nodes
    .map((n) => {
      const p = positions.get(n.id)!;
      const cls = n.highlighted ? "node hot" : "node";
      return `<g class="${cls}" transform="translate(${p.x.toFixed(1)},${p.y.toFixed(1)})">
        <circle r="6"></circle>
        <text dx="8" dy="3">${esc(shorten(n.id))}</text>
      </g>`;
    })
    .join("");
  const note = view.truncated
    ? `<text x="8" y="${height - 8}" class="truncated">showing first ${view.nodes.length} nodes</text>`
    : "";
  return `<svg viewBox="0 0 ${width} ${height}" xmlns="http://www.w3.org/2000/svg">${edges}${nodes}${note}</svg>`;
}

function shorten(id: string): string {
  return id.length > 24 ? id.slice(0, 21) + "…" : id;
}

export function renderPredicateOptions(
  predicates: string[],
  selected: string | null,
): string {
  const all = `<option value="">all predicates</option>`;
  return (
    all +
    predicates
      .map(
        (p) =>
          `<option value="${esc(p)}" ${p === selected ? "selected" : ""}>${esc(p)}</option>`,
      )
      .join("")
  );
}
