// Pure projection of server state (plus in-flight UI actions) into what
// the panel renders. Reloading at the same revision reproduces the same
// view; nothing here mutates or talks to the network.

import type {
  ProjectState,
  Question,
  Recommendation,
  RecommendationKind,
} from "./types.js";

export interface CardView {
  id: string;
  kind: RecommendationKind;
  title: string;
  detail: string;
  confidence: number | null;
  busy: boolean; // a decision is in flight: buttons disabled
  error: string | null; // last server rejection for this card
}

export interface QuestionView {
  id: string;
  text: string;
  busy: boolean;
}

export interface ViewModel {
  projectId: string;
  revision: number;
  documents: { id: string; label: string; dialect: string }[];
  hardware: string[];
  attributes: [string, string][];
  questions: QuestionView[];
  cards: CardView[];
  dismissed: CardView[];
  accepted: CardView[];
}

const KIND_ORDER: Record<RecommendationKind, number> = {
  classification: 0,
  hardware: 1,
  similar_code: 2,
};

export function cardTitle(rec: Recommendation): string {
  const p = rec.payload as Record<string, unknown>;
  switch (rec.kind) {
    case "classification":
      return `Classify ${p.document_id} as "${p.label}"`;
    case "hardware":
      return `Add hardware: ${p.category}`;
    case "similar_code":
      return `Similar code for ${p.document_id}`;
  }
}

export function cardDetail(rec: Recommendation): string {
  const p = rec.payload as Record<string, unknown>;
  if (rec.kind === "similar_code") {
    const neighbors = (p.neighbors as { id: string; score: number }[]) ?? [];
    return neighbors
      .map((n) => `${n.id} (${n.score.toFixed(3)})`)
      .join(", ");
  }
  if (rec.kind === "hardware") {
    return `rank ${p.rank}, score ${(p.score as number).toFixed(3)}`;
  }
  return `confidence ${((p.confidence as number) ?? 0).toFixed(3)}`;
}

function toCard(
  rec: Recommendation,
  inflight: ReadonlySet<string>,
  errors: ReadonlyMap<string, string>,
): CardView {
  const p = rec.payload as Record<string, unknown>;
  const confidence =
    rec.kind === "classification"
      ? ((p.confidence as number) ?? null)
      : rec.kind === "hardware"
        ? ((p.score as number) ?? null)
        : null;
  return {
    id: rec.id,
    kind: rec.kind,
    title: cardTitle(rec),
    detail: cardDetail(rec),
    confidence,
    busy: inflight.has(rec.id),
    error: errors.get(rec.id) ?? null,
  };
}

const NO_ERRORS: ReadonlyMap<string, string> = new Map();

export function buildViewModel(
  state: ProjectState,
  recommendations: Recommendation[],
  questions: Question[],
  inflight: ReadonlySet<string>,
  errors: ReadonlyMap<string, string> = NO_ERRORS,
): ViewModel {
  const byStatus = (status: string) =>
    recommendations
      .filter((r) => r.status === status)
      .sort(
        (a, b) =>
          KIND_ORDER[a.kind] - KIND_ORDER[b.kind] ||
          a.id.localeCompare(b.id),
      )
      .map((r) => toCard(r, inflight, errors));
  return {
    projectId: state.project_id,
    revision: state.revision,
    documents: state.documents.map((d) => ({
      id: d.id,
      label: d.label ?? "(unlabeled)",
      dialect: d.dialect ?? "arduino",
    })),
    hardware: state.hardware.categories,
    attributes: Object.entries(state.attributes)
      .filter(([key]) => !key.startsWith("similar_code."))
      .sort(),
    questions: questions
      .filter((q) => q.status === "pending")
      .sort((a, b) => a.id.localeCompare(b.id))
      .map((q) => ({ id: q.id, text: q.text, busy: inflight.has(q.id) })),
    cards: byStatus("proposed"),
    dismissed: byStatus("rejected"),
    accepted: byStatus("accepted"),
  };
}
