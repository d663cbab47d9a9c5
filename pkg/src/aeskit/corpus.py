"""Corpus data model: on-disk JSONL format, loading, and stratified splits.

A corpus is a list of CodeDocument records, one JSON object per line:

    {"id": str, "dialect": "arduino"|"scl",
     "sources": [{"name": str, "text": str}],
     "title": str?, "tags": [str], "description": str?,
     "label": str?, "components": [str]}

Documents are immutable after load; order is file order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ClassTooSmall, DuplicateId, MalformedRecord, UnknownDialect

DIALECTS = ("arduino", "scl")


@dataclass
class CodeDocument:
    """One project (arduino) or one function block (scl)."""

    id: str
    dialect: str
    sources: list[tuple[str, str]]  # (filename, text)
    title: str | None = None
    tags: list[str] = field(default_factory=list)
    description: str | None = None
    label: str | None = None
    raw_components: list[str] = field(default_factory=list)

    def validate(self) -> None:
        if not self.id:
            raise ValueError("document id must be non-empty")
        if self.dialect not in DIALECTS:
            raise UnknownDialect(self.dialect)
        if not self.sources:
            raise ValueError(f"document {self.id!r} has no sources")
        for name, text in self.sources:
            if not isinstance(name, str) or not isinstance(text, str):
                raise ValueError(f"document {self.id!r} has a non-string source")
        if self.dialect == "scl" and self.raw_components:
            raise ValueError(
                f"scl document {self.id!r} carries hardware components"
            )

    def full_text(self) -> str:
        return "\n".join(text for _, text in self.sources)

    def to_record(self) -> dict:
        rec = {
            "id": self.id,
            "dialect": self.dialect,
            "sources": [{"name": n, "text": t} for n, t in self.sources],
            "tags": list(self.tags),
            "components": list(self.raw_components),
        }
        if self.title is not None:
            rec["title"] = self.title
        if self.description is not None:
            rec["description"] = self.description
        if self.label is not None:
            rec["label"] = self.label
        return rec

    @classmethod
    def from_record(cls, rec: dict, default_dialect: str) -> "CodeDocument":
        if not isinstance(rec, dict):
            raise ValueError("record is not a JSON object")
        for key in ("id", "sources"):
            if key not in rec:
                raise ValueError(f"missing required field {key!r}")
        sources = []
        if not isinstance(rec["sources"], list) or not rec["sources"]:
            raise ValueError("'sources' must be a non-empty list")
        for src in rec["sources"]:
            if not isinstance(src, dict) or "name" not in src or "text" not in src:
                raise ValueError("each source needs 'name' and 'text'")
            sources.append((src["name"], src["text"]))
        doc = cls(
            id=rec["id"],
            dialect=rec.get("dialect", default_dialect),
            sources=sources,
            title=rec.get("title"),
            tags=list(rec.get("tags", [])),
            description=rec.get("description"),
            label=rec.get("label"),
            raw_components=list(rec.get("components", [])),
        )
        doc.validate()
        return doc


Corpus = list[CodeDocument]


def load_corpus(path: str | Path, dialect: str = "arduino") -> Corpus:
    """Load a JSONL corpus. `dialect` applies to records without one.

    Raises MalformedRecord (with the 1-based line number), DuplicateId, or
    UnknownDialect. Document order is file order.
    """
    if dialect not in DIALECTS:
        raise UnknownDialect(dialect)
    docs: Corpus = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(line_no, f"invalid JSON: {exc.msg}") from exc
            try:
                doc = CodeDocument.from_record(rec, default_dialect=dialect)
            except UnknownDialect:
                raise
            except (ValueError, TypeError) as exc:
                raise MalformedRecord(line_no, str(exc)) from exc
            if doc.id in seen:
                raise DuplicateId(doc.id)
            seen.add(doc.id)
            docs.append(doc)
    return docs


def save_corpus(docs: Corpus, path: str | Path) -> None:
    """Canonical JSONL writer: fixed key order, compact separators.

    save(load(f)) is a fixed point: loading and re-saving its own output
    reproduces the file byte for byte.
    """
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for doc in docs:
            fh.write(
                json.dumps(
                    doc.to_record(), sort_keys=True, separators=(",", ":"),
                    ensure_ascii=False,
                )
            )
            fh.write("\n")


@dataclass
class SplitSpec:
    train_fraction: float
    seed: int
    stratified: bool = True

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must lie in (0, 1)")


def stratified_split(corpus: Corpus, spec: SplitSpec) -> tuple[Corpus, Corpus]:
    """Deterministic train/test split.

    Stratified mode splits each label group separately so the per-class
    train fraction is within one document of spec.train_fraction. A class
    that cannot place at least one document on each side raises
    ClassTooSmall. Calling again with train_fraction 1-f and the same seed
    returns the two sides swapped.
    """
    if spec.stratified:
        for doc in corpus:
            if doc.label is None:
                raise ValueError(f"document {doc.id!r} unlabeled; cannot stratify")
        groups: dict[str, list[int]] = {}
        for i, doc in enumerate(corpus):
            groups.setdefault(doc.label, []).append(i)
    else:
        groups = {"": list(range(len(corpus)))}

    rng = np.random.default_rng(spec.seed)
    train_idx: list[int] = []
    test_idx: list[int] = []
    f = spec.train_fraction
    # The shuffle and the cut point depend only on min(f, 1-f), so f and
    # 1-f produce the same partition with the sides exchanged.
    f_small = min(f, 1.0 - f)
    for label in sorted(groups):
        idx = np.array(groups[label])
        n = len(idx)
        if n < 2:
            raise ClassTooSmall(label, n)
        perm = rng.permutation(n)
        m = int(math.floor(n * f_small + 0.5))
        m = max(1, min(m, n - 1))
        lower = idx[perm[:m]]
        upper = idx[perm[m:]]
        if f <= 0.5:
            train_idx.extend(lower.tolist())
            test_idx.extend(upper.tolist())
        else:
            train_idx.extend(upper.tolist())
            test_idx.extend(lower.tolist())

    train_idx.sort()
    test_idx.sort()
    return [corpus[i] for i in train_idx], [corpus[i] for i in test_idx]
