"""Assistant loop: project state, questions, recommendation lifecycle.

The store keeps per-project state and re-analyzes on every mutation
(create, accepted recommendation, answered question). Analyses emit

* a classification recommendation per unlabeled document,
* a similar-code recommendation per document (until one is accepted),
* one hardware recommendation per top-ranked absent component,

plus pending questions for required project attributes that are missing.
Rejected recommendations are remembered by a stable payload key and never
proposed again; proposals identical to one already made at the current
revision are dropped. Every applied mutation bumps the revision by
exactly one. All events are journaled as JSONL and the store can be
rebuilt by replay.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import CodeDocument
from .errors import (
    AlreadyAnswered,
    AlreadyDecided,
    ModelsMissing,
    UnknownProject,
    UnknownQuestion,
    UnknownRecommendation,
)
from .features import extract_features
from .hwrec import recommend_top_k
from .knowledge import TripleStore
from .pipeline import ModelBundle
from .taxonomy import LEVEL_SIZES, HardwareConfig, Taxonomy, builtin_taxonomy, normalize_components

REQUIRED_ATTRIBUTES = {
    "safety_integrity_level": "What is the safety integrity level of this project?",
}

HARDWARE_TOP_K = 3
NEIGHBOR_K = 3


@dataclass
class Question:
    id: str
    attribute_key: str
    text: str
    status: str = "pending"  # pending | answered

    def to_json(self) -> dict:
        return {
            "id": self.id, "attribute_key": self.attribute_key,
            "text": self.text, "status": self.status,
        }


@dataclass
class Recommendation:
    id: str
    kind: str  # classification | similar_code | hardware
    payload: dict
    status: str = "proposed"  # proposed | accepted | rejected
    revision_created: int = 0
    payload_key: str = ""

    def to_json(self) -> dict:
        return {
            "id": self.id, "kind": self.kind, "payload": self.payload,
            "status": self.status, "revision_created": self.revision_created,
        }


@dataclass
class ProjectState:
    project_id: str
    documents: list[CodeDocument]
    hardware: HardwareConfig
    attributes: dict[str, str] = field(default_factory=dict)
    revision: int = 0

    def to_json(self) -> dict:
        tax = builtin_taxonomy(self.hardware.level)
        return {
            "project_id": self.project_id,
            "revision": self.revision,
            "attributes": dict(self.attributes),
            "hardware": {
                "level": self.hardware.level,
                "present": self.hardware.present.tolist(),
                "categories": self.hardware.present_categories(tax),
            },
            "documents": [doc.to_record() for doc in self.documents],
        }


def payload_key(kind: str, payload: dict) -> str:
    """Stable identity of a proposal, ignoring volatile scores, so a
    rejected suggestion stays rejected even if its confidence drifts."""
    if kind == "classification":
        core = {"document_id": payload["document_id"], "label": payload["label"]}
    elif kind == "similar_code":
        core = {
            "document_id": payload["document_id"],
            "neighbors": [n["id"] for n in payload["neighbors"]],
        }
    elif kind == "hardware":
        core = {"category": payload["category"]}
    else:
        core = payload
    blob = json.dumps({"kind": kind, **core}, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def compute_proposals(
    state: ProjectState, models: ModelBundle
) -> list[tuple[str, dict]]:
    """Pure analysis pass: (kind, payload) proposals for the given state."""
    proposals: list[tuple[str, dict]] = []
    for doc in state.documents:
        feats = extract_features(doc)
        tokens = models.tokens_of(doc)
        if feats.label is None and models.classifier is not None:
            label, probs = models.classify_tokens(tokens)
            proposals.append(
                (
                    "classification",
                    {
                        "document_id": doc.id,
                        "label": label,
                        "confidence": round(probs[label], 6),
                    },
                )
            )
        if (
            models.index is not None
            and f"similar_code.{doc.id}" not in state.attributes
        ):
            neighbors = [
                n for n in models.neighbors_for_tokens(tokens, NEIGHBOR_K + 1)
                if n.id != doc.id
            ][:NEIGHBOR_K]
            if neighbors:
                proposals.append(
                    (
                        "similar_code",
                        {
                            "document_id": doc.id,
                            "neighbors": [
                                {"id": n.id, "score": round(n.score, 6)}
                                for n in neighbors
                            ],
                        },
                    )
                )
    if models.has_hw_model and np.any(state.hardware.present == 0):
        tax = builtin_taxonomy(state.hardware.level)
        scores = models.hw_scores(state.hardware)
        for rank, (slot, score) in enumerate(
            recommend_top_k(scores, HARDWARE_TOP_K), start=1
        ):
            proposals.append(
                (
                    "hardware",
                    {
                        "category": tax.categories[slot],
                        "slot": int(slot),
                        "score": round(float(score), 6),
                        "rank": rank,
                    },
                )
            )
    return proposals


class AssistantStore:
    """Project registry plus the recommendation/question lifecycle.

    One writer per project: every mutation runs under that project's lock.
    """

    def __init__(self, models: ModelBundle | None = None, state_dir: str | Path | None = None):
        self.models = models
        self.projects: dict[str, ProjectState] = {}
        self.recommendations: dict[str, dict[str, Recommendation]] = {}
        self.questions: dict[str, dict[str, Question]] = {}
        self.rejected_keys: dict[str, set[str]] = {}
        self.triples = TripleStore()
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        self._counter = 0
        self._journal_path = None
        if state_dir is not None:
            state_dir = Path(state_dir)
            state_dir.mkdir(parents=True, exist_ok=True)
            self._journal_path = state_dir / "journal.jsonl"
            if self._journal_path.exists():
                self._replay()

    # -- infrastructure ----------------------------------------------------

    def _lock(self, project_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(project_id, threading.Lock())

    def _journal(self, event: dict) -> None:
        if self._journal_path is None:
            return
        with open(self._journal_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, sort_keys=True, separators=(",", ":")))
            fh.write("\n")

    def _next_id(self, prefix: str) -> str:
        self._counter += 1
        return f"{prefix}-{self._counter:06d}"

    def _state(self, project_id: str) -> ProjectState:
        try:
            return self.projects[project_id]
        except KeyError:
            raise UnknownProject(project_id) from None

    # -- lifecycle ----------------------------------------------------------

    def create_project(
        self,
        documents: list[dict],
        components: list[str] | None = None,
        level: str = "L1",
        attributes: dict[str, str] | None = None,
        project_id: str | None = None,
        dialect: str = "arduino",
        analyze: bool = True,
    ) -> ProjectState:
        docs = [CodeDocument.from_record(rec, dialect) for rec in documents]
        tax = builtin_taxonomy(level)
        hardware, _ = normalize_components(components or [], tax)
        with self._registry_lock:
            if project_id is None:
                self._counter += 1
                project_id = f"project-{self._counter:06d}"
            if project_id in self.projects:
                raise ValueError(f"project {project_id!r} already exists")
            state = ProjectState(
                project_id=project_id,
                documents=docs,
                hardware=hardware,
                attributes=dict(attributes or {}),
            )
            self.projects[project_id] = state
            self.recommendations[project_id] = {}
            self.questions[project_id] = {}
            self.rejected_keys[project_id] = set()
        self._journal(
            {
                "op": "create",
                "project_id": project_id,
                "documents": documents,
                "components": components or [],
                "level": level,
                "attributes": attributes or {},
            }
        )
        if analyze and self.models is not None:
            self.analyze(project_id)
        return state

    def analyze(self, project_id: str) -> tuple[list[Recommendation], list[Question]]:
        """Run all analyses: returns newly created recommendations/questions."""
        if self.models is None:
            raise ModelsMissing("no models loaded; start the service with a bundle")
        with self._lock(project_id):
            state = self._state(project_id)
            return self._analyze_locked(state)

    def _analyze_locked(self, state: ProjectState):
        pid = state.project_id
        existing = self.recommendations[pid]
        pending = {r.payload_key for r in existing.values() if r.status == "proposed"}
        same_rev = {
            r.payload_key
            for r in existing.values()
            if r.revision_created == state.revision
        }
        rejected = self.rejected_keys[pid]

        new_recs: list[Recommendation] = []
        for kind, payload in compute_proposals(state, self.models):
            key = payload_key(kind, payload)
            if key in pending or key in same_rev or key in rejected:
                continue
            rec = Recommendation(
                id=self._next_id("rec"),
                kind=kind,
                payload=payload,
                revision_created=state.revision,
                payload_key=key,
            )
            existing[rec.id] = rec
            pending.add(key)
            new_recs.append(rec)
            self._provenance(state, rec)
            self._journal({"op": "propose", "project_id": pid, "rec": {
                "id": rec.id, "kind": rec.kind, "payload": rec.payload,
                "revision_created": rec.revision_created,
            }})

        new_questions: list[Question] = []
        pending_attrs = {
            q.attribute_key
            for q in self.questions[pid].values()
            if q.status == "pending"
        }
        for attr, text in REQUIRED_ATTRIBUTES.items():
            if attr in state.attributes or attr in pending_attrs:
                continue
            q = Question(id=self._next_id("q"), attribute_key=attr, text=text)
            self.questions[pid][q.id] = q
            new_questions.append(q)
            self._journal({"op": "ask", "project_id": pid, "question": q.to_json()})
        return new_recs, new_questions

    def _provenance(self, state: ProjectState, rec: Recommendation) -> None:
        subject = f"rec:{rec.id}"
        model_node = {
            "classification": "model:classifier",
            "similar_code": "model:search-index",
            "hardware": "model:hardware",
        }[rec.kind]
        added = [
            (f"project:{state.project_id}", "has-recommendation", subject),
            (subject, "derived-from", model_node),
        ]
        if "document_id" in rec.payload:
            added.append((subject, "derived-from", f"doc:{rec.payload['document_id']}"))
        if rec.kind == "classification":
            added.append((subject, "recommends-label", rec.payload["label"]))
        elif rec.kind == "hardware":
            added.append((subject, "recommends-component", rec.payload["category"]))
        elif rec.kind == "similar_code":
            for n in rec.payload["neighbors"]:
                added.append((subject, "recommends-similar", f"doc:{n['id']}"))
        for s, p, o in added:
            if self.triples.add(s, p, o):
                self._journal({"op": "triple", "t": [s, p, o]})

    def decide(
        self, project_id: str, rec_id: str, decision: str, _replaying: bool = False
    ) -> ProjectState:
        if decision not in ("accept", "reject"):
            raise ValueError(f"decision must be accept or reject, got {decision!r}")
        with self._lock(project_id):
            state = self._state(project_id)
            rec = self.recommendations[project_id].get(rec_id)
            if rec is None:
                raise UnknownRecommendation(rec_id)
            if rec.status != "proposed":
                raise AlreadyDecided(rec_id)
            self._journal(
                {"op": "decide", "project_id": project_id, "rec_id": rec_id,
                 "decision": decision}
            )
            if decision == "reject":
                rec.status = "rejected"
                self.rejected_keys[project_id].add(rec.payload_key)
                return state
            rec.status = "accepted"
            self._apply_mutation(state, rec)
            state.revision += 1
            if not _replaying and self.models is not None:
                self._analyze_locked(state)
            return state

    def _apply_mutation(self, state: ProjectState, rec: Recommendation) -> None:
        if rec.kind == "classification":
            for doc in state.documents:
                if doc.id == rec.payload["document_id"]:
                    doc.label = rec.payload["label"]
                    break
        elif rec.kind == "hardware":
            tax = builtin_taxonomy(state.hardware.level)
            slot = rec.payload.get("slot")
            if slot is None:
                slot = tax.slot_of(rec.payload["category"])
            state.hardware.present[int(slot)] = 1
        elif rec.kind == "similar_code":
            state.attributes[f"similar_code.{rec.payload['document_id']}"] = json.dumps(
                [n["id"] for n in rec.payload["neighbors"]]
            )

    def answer(
        self, project_id: str, question_id: str, value: str, _replaying: bool = False
    ) -> ProjectState:
        with self._lock(project_id):
            state = self._state(project_id)
            q = self.questions[project_id].get(question_id)
            if q is None:
                raise UnknownQuestion(question_id)
            if q.status != "pending":
                raise AlreadyAnswered(question_id)
            self._journal(
                {"op": "answer", "project_id": project_id,
                 "question_id": question_id, "value": value}
            )
            q.status = "answered"
            state.attributes[q.attribute_key] = value
            state.revision += 1
            if not _replaying and self.models is not None:
                self._analyze_locked(state)
            return state

    def knowledge_query(
        self, s: str | None = None, p: str | None = None, o: str | None = None
    ):
        return self.triples.query(s, p, o)

    # -- journal replay ------------------------------------------------------

    def _replay(self) -> None:
        journal_path = self._journal_path
        self._journal_path = None  # do not re-journal replayed events
        try:
            with open(journal_path, encoding="utf-8") as fh:
                for line in fh:
                    if not line.strip():
                        continue
                    ev = json.loads(line)
                    op = ev["op"]
                    if op == "create":
                        self.create_project(
                            ev["documents"],
                            components=ev["components"],
                            level=ev["level"],
                            attributes=ev["attributes"],
                            project_id=ev["project_id"],
                            analyze=False,
                        )
                    elif op == "propose":
                        pid = ev["project_id"]
                        data = ev["rec"]
                        rec = Recommendation(
                            id=data["id"],
                            kind=data["kind"],
                            payload=data["payload"],
                            revision_created=data["revision_created"],
                            payload_key=payload_key(data["kind"], data["payload"]),
                        )
                        self.recommendations[pid][rec.id] = rec
                        n = int(rec.id.rsplit("-", 1)[1])
                        self._counter = max(self._counter, n)
                    elif op == "ask":
                        pid = ev["project_id"]
                        q = Question(**ev["question"])
                        self.questions[pid][q.id] = q
                        n = int(q.id.rsplit("-", 1)[1])
                        self._counter = max(self._counter, n)
                    elif op == "decide":
                        self.decide(
                            ev["project_id"], ev["rec_id"], ev["decision"],
                            _replaying=True,
                        )
                    elif op == "answer":
                        self.answer(
                            ev["project_id"], ev["question_id"], ev["value"],
                            _replaying=True,
                        )
                    elif op == "triple":
                        self.triples.add(*ev["t"])
        finally:
            self._journal_path = journal_path
