// Panel entry point: state container, 2 s polling, event delegation.
// All mutations go through the service; the view is re-rendered from
// fetched state only (no optimistic updates).

import { ApiClient, ApiError } from "./api.js";
import { projectGraph } from "./graph.js";
import {
  renderCards,
  renderGraph,
  renderPredicateOptions,
  renderQuestions,
  renderSummary,
  esc,
} from "./render.js";
import type { Question, Recommendation, Triple } from "./types.js";
import { buildViewModel } from "./viewmodel.js";

const POLL_INTERVAL_MS = 2000;

interface PanelState {
  projectId: string | null;
  state: import("./types.js").ProjectState | null;
  recommendations: Recommendation[];
  questions: Question[];
  triples: Triple[];
  inflight: Set<string>;
  cardErrors: Map<string, string>;
  selectedRec: string | null;
  predicate: string | null;
  error: string | null;
  lastRenderKey: string;
}

const panel: PanelState = {
  projectId: null,
  state: null,
  recommendations: [],
  questions: [],
  triples: [],
  inflight: new Set(),
  cardErrors: new Map(),
  selectedRec: null,
  predicate: null,
  error: null,
  lastRenderKey: "",
};

const api = new ApiClient("");

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

async function refresh(): Promise<void> {
  if (!panel.projectId) return;
  try {
    const [state, recs, questions, knowledge] = await Promise.all([
      api.getProject(panel.projectId),
      api.getRecommendations(panel.projectId),
      api.getQuestions(panel.projectId),
      api.knowledge(),
    ]);
    panel.state = state;
    panel.recommendations = recs.recommendations;
    panel.questions = questions.questions;
    panel.triples = knowledge.triples;
    panel.error = null;
  } catch (err) {
    panel.error =
      err instanceof ApiError ? err.message : `service unreachable: ${err}`;
  }
  render();
}

function render(): void {
  const banner = el("error");
  banner.textContent = panel.error ?? "";
  banner.hidden = !panel.error;
  if (!panel.state) return;

  const vm = buildViewModel(
    panel.state,
    panel.recommendations,
    panel.questions,
    panel.inflight,
    panel.cardErrors,
  );
  const graph = projectGraph(panel.triples, {
    predicate: panel.predicate,
    highlightRecId: panel.selectedRec,
  });
  const key = JSON.stringify([vm, graph, panel.selectedRec]);
  if (key === panel.lastRenderKey) return; // nothing changed: keep the DOM
  panel.lastRenderKey = key;

  el("summary").innerHTML = renderSummary(vm);
  el("questions").innerHTML = renderQuestions(vm);
  el("cards").innerHTML = renderCards(vm);
  el("graph").innerHTML = renderGraph(graph);
  (el("predicate") as HTMLSelectElement).innerHTML = renderPredicateOptions(
    graph.predicates,
    panel.predicate,
  );
  for (const node of document.querySelectorAll(`[data-card]`)) {
    node.classList.toggle(
      "selected",
      node.getAttribute("data-card") === panel.selectedRec,
    );
  }
}

async function decide(recId: string, decision: "accept" | "reject") {
  if (!panel.projectId || panel.inflight.has(recId)) return;
  panel.inflight.add(recId);
  panel.cardErrors.delete(recId);
  render();
  try {
    await api.decide(panel.projectId, recId, decision);
  } catch (err) {
    // server rejection shows on the card itself; no optimistic mutation
    panel.cardErrors.set(
      recId,
      err instanceof ApiError ? err.message : String(err),
    );
  } finally {
    panel.inflight.delete(recId);
  }
  await refresh();
}

async function answer(questionId: string, value: string) {
  if (!panel.projectId || panel.inflight.has(questionId)) return;
  panel.inflight.add(questionId);
  render();
  try {
    await api.answer(panel.projectId, questionId, value);
  } catch (err) {
    panel.error = err instanceof ApiError ? err.message : String(err);
  } finally {
    panel.inflight.delete(questionId);
  }
  await refresh();
}

const DEMO_SKETCH = `#include <Servo.h>
// sweep a servo from a potentiometer
Servo horn;
void setup() { horn.attach(9); }
void loop() {
  int val = analogRead(0);
  horn.write(map(val, 0, 1023, 0, 180));
  delay(15);
}`;

async function createDemoProject(): Promise<void> {
  const created = await api.createProject({
    documents: [
      {
        id: "demo-sketch",
        dialect: "arduino",
        sources: [{ name: "sweep.ino", text: DEMO_SKETCH }],
      },
    ],
    components: ["servo", "potentiometer"],
    level: "L1",
  });
  openProject(created.project_id);
}

function openProject(projectId: string): void {
  panel.projectId = projectId;
  panel.selectedRec = null;
  panel.lastRenderKey = "";
  const url = new URL(window.location.href);
  url.searchParams.set("project", projectId);
  window.history.replaceState(null, "", url.toString());
  el("chooser").hidden = true;
  el("panel").hidden = false;
  void refresh();
}

export function boot(): void {
  const params = new URLSearchParams(window.location.search);
  const fromUrl = params.get("project");
  if (fromUrl) {
    openProject(fromUrl);
  }

  el("open-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    const input = el("project-input") as HTMLInputElement;
    if (input.value.trim()) openProject(input.value.trim());
  });
  el("create-demo").addEventListener("click", () => {
    void createDemoProject().catch((err) => {
      panel.error = String(err);
      render();
    });
  });
  el("analyze").addEventListener("click", () => {
    if (panel.projectId) {
      void api.analyze(panel.projectId).then(refresh);
    }
  });
  (el("predicate") as HTMLSelectElement).addEventListener("change", (ev) => {
    const value = (ev.target as HTMLSelectElement).value;
    panel.predicate = value || null;
    render();
  });

  // one delegated listener handles every card button and question form
  el("cards").addEventListener("click", (ev) => {
    const target = ev.target as HTMLElement;
    const action = target.getAttribute("data-action");
    const recId = target.getAttribute("data-rec");
    if (action && recId) {
      void decide(recId, action as "accept" | "reject");
      return;
    }
    const selectable = target.closest("[data-select]");
    if (selectable) {
      const id = selectable.getAttribute("data-select");
      panel.selectedRec = panel.selectedRec === id ? null : id;
      render();
    }
  });
  el("questions").addEventListener("submit", (ev) => {
    ev.preventDefault();
    const form = ev.target as HTMLFormElement;
    const questionId = form.getAttribute("data-answer");
    const value = (form.elements.namedItem("value") as HTMLInputElement).value;
    if (questionId && value) void answer(questionId, value);
  });

  window.setInterval(() => void refresh(), POLL_INTERVAL_MS);
}

declare global {
  interface Window {
    aeskitBooted?: boolean;
  }
}

if (typeof document !== "undefined" && !window.aeskitBooted) {
  window.aeskitBooted = true;
  document.addEventListener("DOMContentLoaded", boot);
}

export { esc };
