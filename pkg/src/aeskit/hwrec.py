"""Hardware completion: recommenders and leave-one-out precision@k.

A recommender is any callable mapping a partial HardwareConfig to
{absent slot index: score}. Three are provided: exact Bayesian-network
conditionals, autoencoder reconstruction, and a uniform-random floor.

evaluate_p_at_k hides each present component of each test config in turn,
asks the recommender to score every absent slot (the hidden one included),
and records whether the hidden slot lands in the top k. Present slots are
never candidates.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .autoencoder import AutoencoderModel, ae_complete
from .bayesnet import BayesNet, bn_conditional
from .errors import DegenerateConfig
from .taxonomy import HardwareConfig

Recommender = Callable[[HardwareConfig], dict[int, float]]


@dataclass
class PAtKReport:
    k_values: list[int]
    p_at_k: dict[int, float]
    n_trials: int

    def to_csv(self) -> str:
        lines = ["k,p_at_k,n_trials"]
        for k in self.k_values:
            lines.append(f"{k},{self.p_at_k[k]:.4f},{self.n_trials}")
        return "\n".join(lines) + "\n"

    def save_csv(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_csv())


def recommend_top_k(scores: dict[int, float], k: int) -> list[tuple[int, float]]:
    """Top-k slots by score descending; equal scores order by slot index."""
    if k < 1:
        raise ValueError("k must be >= 1")
    ranked = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
    return ranked[:k]


def bn_recommender(net: BayesNet) -> Recommender:
    def rec(partial: HardwareConfig) -> dict[int, float]:
        evidence = {int(i): 1 for i in np.flatnonzero(partial.present)}
        return bn_conditional(net, evidence)

    return rec


def ae_recommender(model: AutoencoderModel) -> Recommender:
    def rec(partial: HardwareConfig) -> dict[int, float]:
        return ae_complete(model, partial)

    return rec


def random_recommender(seed: int) -> Recommender:
    """Uniform random scores over the absent slots (evaluation floor)."""
    rng = np.random.default_rng(seed)

    def rec(partial: HardwareConfig) -> dict[int, float]:
        absent = np.flatnonzero(partial.present == 0)
        draws = rng.random(len(absent))
        return {int(slot): float(s) for slot, s in zip(absent, draws)}

    return rec


def evaluate_p_at_k(
    recommender: Recommender,
    test_configs: list[HardwareConfig],
    k_values: list[int],
) -> PAtKReport:
    """Leave-one-out hit rate: one trial per present bit of every config."""
    if not k_values or min(k_values) < 1:
        raise ValueError("k_values must be positive")
    hits = {k: 0 for k in k_values}
    n_trials = 0
    for idx, config in enumerate(test_configs):
        present = np.flatnonzero(config.present)
        if len(present) < 2:
            raise DegenerateConfig(idx)
        for bit in present:
            partial = config.copy()
            partial.present[bit] = 0
            scores = recommender(partial)
            if int(bit) not in scores:
                raise ValueError(
                    f"recommender did not score the held-out slot {int(bit)}"
                )
            s_hidden = scores[int(bit)]
            # rank under the deterministic tie rule (lower slot index first)
            rank = 1 + sum(
                1
                for slot, s in scores.items()
                if s > s_hidden or (s == s_hidden and slot < int(bit))
            )
            for k in k_values:
                if rank <= k:
                    hits[k] += 1
            n_trials += 1
    return PAtKReport(
        k_values=sorted(k_values),
        p_at_k={k: hits[k] / n_trials for k in k_values},
        n_trials=n_trials,
    )
