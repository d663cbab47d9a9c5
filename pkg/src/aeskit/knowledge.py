"""In-memory (subject, predicate, object) knowledge store.

Holds the assistant's engineering knowledge and the provenance edges that
analyses write for each recommendation. Supports wildcard pattern queries
(None matches anything) and JSON persistence. Duplicate triples collapse.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

Triple = tuple[str, str, str]


@dataclass
class TripleStore:
    triples: set[Triple]

    def __init__(self, triples=None):
        self.triples = set(tuple(t) for t in (triples or []))

    def add(self, subject: str, predicate: str, obj: str) -> bool:
        """Insert; returns False when the triple was already present."""
        t = (subject, predicate, obj)
        if t in self.triples:
            return False
        self.triples.add(t)
        return True

    def query(
        self,
        subject: str | None = None,
        predicate: str | None = None,
        obj: str | None = None,
    ) -> list[Triple]:
        """All triples matching the pattern; None is a wildcard. Sorted."""
        return sorted(
            t
            for t in self.triples
            if (subject is None or t[0] == subject)
            and (predicate is None or t[1] == predicate)
            and (obj is None or t[2] == obj)
        )

    def __len__(self) -> int:
        return len(self.triples)

    def to_json(self) -> list[list[str]]:
        return [list(t) for t in sorted(self.triples)]

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh)
            fh.write("\n")

    @classmethod
    def load(cls, path: str | Path) -> "TripleStore":
        with open(path, encoding="utf-8") as fh:
            return cls(json.load(fh))
