import { describe, expect, it } from "vitest";

import { buildViewModel, cardTitle } from "../src/viewmodel.js";
import type { ProjectState, Question, Recommendation } from "../src/types.js";

const state: ProjectState = {
  project_id: "p1",
  revision: 3,
  attributes: {
    safety_integrity_level: "SIL-2",
    "similar_code.doc-a": '["x"]',
  },
  hardware: { level: "L1", present: [1, 0, 0, 0, 0, 0, 0, 0, 1], categories: ["Actuators", "Sensors"] },
  documents: [
    { id: "doc-a", dialect: "arduino", label: null, sources: [] },
    { id: "doc-b", dialect: "arduino", label: "robots", sources: [] },
  ],
};

function rec(
  id: string,
  kind: Recommendation["kind"],
  status: Recommendation["status"] = "proposed",
  payload: Record<string, unknown> = {},
): Recommendation {
  const defaults: Record<string, Record<string, unknown>> = {
    classification: { document_id: "doc-a", label: "robots", confidence: 0.91 },
    hardware: { category: "Power", slot: 7, score: 0.82, rank: 1 },
    similar_code: {
      document_id: "doc-a",
      neighbors: [{ id: "n1", score: 0.97 }],
    },
  };
  return { id, kind, status, revision_created: 0, payload: { ...defaults[kind], ...payload } };
}

const questions: Question[] = [
  { id: "q-2", attribute_key: "safety_integrity_level", text: "What is the safety integrity level of this project?", status: "pending" },
  { id: "q-1", attribute_key: "other", text: "Answered already", status: "answered" },
];

describe("buildViewModel", () => {
  it("shows revision, documents, hardware and filters internal attributes", () => {
    const vm = buildViewModel(state, [], [], new Set());
    expect(vm.revision).toBe(3);
    expect(vm.documents).toHaveLength(2);
    expect(vm.documents[0].label).toBe("(unlabeled)");
    expect(vm.hardware).toEqual(["Actuators", "Sensors"]);
    expect(vm.attributes).toEqual([["safety_integrity_level", "SIL-2"]]);
  });

  it("keeps only pending questions", () => {
    const vm = buildViewModel(state, [], questions, new Set());
    expect(vm.questions).toHaveLength(1);
    expect(vm.questions[0].text).toContain("safety integrity level");
  });

  it("partitions cards by status and orders kinds stably", () => {
    const recs = [
      rec("r-3", "similar_code"),
      rec("r-1", "hardware"),
      rec("r-2", "classification"),
      rec("r-4", "hardware", "rejected"),
      rec("r-5", "classification", "accepted"),
    ];
    const vm = buildViewModel(state, recs, [], new Set());
    expect(vm.cards.map((c) => c.kind)).toEqual([
      "classification",
      "hardware",
      "similar_code",
    ]);
    expect(vm.dismissed.map((c) => c.id)).toEqual(["r-4"]);
    expect(vm.accepted.map((c) => c.id)).toEqual(["r-5"]);
  });

  it("marks in-flight cards busy so buttons render disabled", () => {
    const vm = buildViewModel(state, [rec("r-1", "hardware")], [], new Set(["r-1"]));
    expect(vm.cards[0].busy).toBe(true);
  });

  it("is a pure projection: same inputs, same output", () => {
    const recs = [rec("r-1", "hardware")];
    const a = buildViewModel(state, recs, questions, new Set());
    const b = buildViewModel(state, recs, questions, new Set());
    expect(a).toEqual(b);
  });
});

describe("cardTitle", () => {
  it("names each kind by what accepting it does", () => {
    expect(cardTitle(rec("r", "classification"))).toContain('as "robots"');
    expect(cardTitle(rec("r", "hardware"))).toContain("Power");
    expect(cardTitle(rec("r", "similar_code"))).toContain("doc-a");
  });
});
