"""Classification evaluation: per-class F1, aggregates, confusion matrix."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import LengthMismatch


@dataclass
class EvalReport:
    f1_micro: float
    f1_macro: float
    f1_weighted: float
    per_class_f1: dict[str, float]
    confusion: np.ndarray  # confusion[i][j] = count(gold=i, pred=j)
    class_names: list[str]
    n_test: int

    def to_json(self) -> dict:
        return {
            "f1_micro": self.f1_micro,
            "f1_macro": self.f1_macro,
            "f1_weighted": self.f1_weighted,
            "per_class_f1": self.per_class_f1,
            "class_names": self.class_names,
            "confusion": self.confusion.tolist(),
            "n_test": self.n_test,
        }

    def save_json(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, sort_keys=True, indent=2)
            fh.write("\n")

    def confusion_csv(self) -> str:
        """Rows are gold classes, columns predicted classes."""
        lines = ["gold\\pred," + ",".join(self.class_names)]
        for i, name in enumerate(self.class_names):
            lines.append(name + "," + ",".join(str(int(c)) for c in self.confusion[i]))
        return "\n".join(lines) + "\n"


def evaluate_f1(
    pred: list[str], gold: list[str], class_names: list[str]
) -> EvalReport:
    """Per-class F1 = 2PR/(P+R), 0 when P+R = 0; micro/macro/weighted
    aggregates over `class_names` order."""
    if len(pred) != len(gold):
        raise LengthMismatch(f"pred has {len(pred)} labels, gold has {len(gold)}")
    if not gold:
        raise LengthMismatch("need at least one sample")
    index = {c: i for i, c in enumerate(class_names)}
    for label in pred:
        if label not in index:
            raise ValueError(f"predicted label {label!r} not in class_names")
    for label in gold:
        if label not in index:
            raise ValueError(f"gold label {label!r} not in class_names")

    n = len(class_names)
    confusion = np.zeros((n, n), dtype=np.int64)
    for g, p in zip(gold, pred):
        confusion[index[g], index[p]] += 1

    tp = np.diag(confusion).astype(np.float64)
    pred_totals = confusion.sum(axis=0).astype(np.float64)
    gold_totals = confusion.sum(axis=1).astype(np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        precision = np.where(pred_totals > 0, tp / pred_totals, 0.0)
        recall = np.where(gold_totals > 0, tp / gold_totals, 0.0)
        pr = precision + recall
        f1 = np.where(pr > 0, 2 * precision * recall / np.where(pr > 0, pr, 1.0), 0.0)

    support = gold_totals
    n_test = len(gold)
    # single-label multiclass: micro-averaged F1 reduces to accuracy
    f1_micro = float(tp.sum() / n_test)
    f1_macro = float(f1.mean())
    f1_weighted = float((f1 * support).sum() / n_test)
    return EvalReport(
        f1_micro=f1_micro,
        f1_macro=f1_macro,
        f1_weighted=f1_weighted,
        per_class_f1={c: float(f1[i]) for i, c in enumerate(class_names)},
        confusion=confusion,
        class_names=list(class_names),
        n_test=n_test,
    )
