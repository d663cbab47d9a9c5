"""Discrete Bayesian networks over binary hardware-component variables.

Structure learning finds the globally BIC-optimal DAG by dynamic
programming over variable subsets (local scores for every candidate
parent set, best-parent-set tables, then an optimal sink ordering). The
search is exact and therefore exponential: it refuses more than
`max_vars` variables rather than silently falling back to a heuristic —
wide taxonomies are served by the autoencoder instead.

Inference is exact enumeration over the completions of the evidence; with
at most 12 variables that is at most 4,096 states.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import EmptyData, TooManyVariables, ZeroProbabilityEvidence
from .taxonomy import HardwareConfig

MAX_EXACT_VARS = 12


@dataclass
class BayesNet:
    """DAG + CPTs. cpts[v][idx] = P(var v = 1 | parent assignment idx),
    where idx packs the parent bits in `parents[v]` order (parent j is bit j).
    """

    variables: list[str]
    parents: list[tuple[int, ...]]
    cpts: list[np.ndarray]

    def __post_init__(self):
        n = len(self.variables)
        if len(self.parents) != n or len(self.cpts) != n:
            raise ValueError("parents/cpts must match variable count")
        self.parents = [tuple(p) for p in self.parents]
        self.cpts = [np.asarray(c, dtype=np.float64).reshape(-1) for c in self.cpts]
        for v in range(n):
            if len(self.cpts[v]) != 1 << len(self.parents[v]):
                raise ValueError(f"cpt size mismatch for variable {v}")
            if np.any(self.cpts[v] < 0) or np.any(self.cpts[v] > 1):
                raise ValueError(f"cpt out of [0,1] for variable {v}")
        self.topological_order()  # raises on cycles

    @property
    def n_vars(self) -> int:
        return len(self.variables)

    def topological_order(self) -> list[int]:
        n = len(self.variables)
        indeg = [len(p) for p in self.parents]
        children: list[list[int]] = [[] for _ in range(n)]
        for v, ps in enumerate(self.parents):
            for p in ps:
                children[p].append(v)
        ready = sorted(v for v in range(n) if indeg[v] == 0)
        order: list[int] = []
        while ready:
            v = ready.pop(0)
            order.append(v)
            for c in children[v]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    ready.append(c)
            ready.sort()
        if len(order) != n:
            raise ValueError("parent sets contain a cycle")
        return order

    def _parent_index(self, assignment: np.ndarray, v: int) -> np.ndarray:
        """Pack the parent bits of rows in `assignment` into CPT indices."""
        idx = np.zeros(assignment.shape[0], dtype=np.int64)
        for j, p in enumerate(self.parents[v]):
            idx |= assignment[:, p].astype(np.int64) << j
        return idx

    def joint_prob(self, assignment: np.ndarray) -> np.ndarray:
        """P(rows) for a matrix of full 0/1 assignments."""
        assignment = np.atleast_2d(np.asarray(assignment, dtype=np.uint8))
        probs = np.ones(assignment.shape[0], dtype=np.float64)
        for v in range(self.n_vars):
            p1 = self.cpts[v][self._parent_index(assignment, v)]
            probs *= np.where(assignment[:, v] == 1, p1, 1.0 - p1)
        return probs

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """Ancestral sampling: n rows of 0/1 values."""
        out = np.zeros((n, self.n_vars), dtype=np.uint8)
        for v in self.topological_order():
            p1 = self.cpts[v][self._parent_index(out, v)]
            out[:, v] = (rng.random(n) < p1).astype(np.uint8)
        return out

    def to_json(self) -> dict:
        return {
            "variables": self.variables,
            "parents": [[self.variables[p] for p in ps] for ps in self.parents],
            "cpts": [c.tolist() for c in self.cpts],
        }

    @classmethod
    def from_json(cls, data: dict) -> "BayesNet":
        index = {name: i for i, name in enumerate(data["variables"])}
        parents = [tuple(index[p] for p in ps) for ps in data["parents"]]
        return cls(list(data["variables"]), parents, [np.array(c) for c in data["cpts"]])

    @classmethod
    def independent_bits(cls, variables: list[str], probs) -> "BayesNet":
        probs = np.broadcast_to(np.asarray(probs, dtype=np.float64), (len(variables),))
        return cls(variables, [()] * len(variables), [np.array([p]) for p in probs])


def save_bn(net: BayesNet, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(net.to_json(), fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def load_bn(path: str | Path) -> BayesNet:
    with open(path, encoding="utf-8") as fh:
        return BayesNet.from_json(json.load(fh))


def _config_matrix(configs: list[HardwareConfig]) -> np.ndarray:
    if not configs:
        raise EmptyData("no configurations")
    level = configs[0].level
    for c in configs:
        if c.level != level:
            raise ValueError("configurations mix taxonomy levels")
    return np.stack([c.present for c in configs]).astype(np.uint8)


def _local_bic_scores(data: np.ndarray) -> np.ndarray:
    """scores[v, mask] = max-likelihood log score of v with parent set
    `mask` minus the BIC penalty, for every mask not containing v."""
    n_samples, n_vars = data.shape
    data_int = np.zeros(n_samples, dtype=np.int64)
    for v in range(n_vars):
        data_int |= data[:, v].astype(np.int64) << v
    full = 1 << n_vars
    log_n = np.log(n_samples)
    scores = np.full((n_vars, full), -np.inf)
    for v in range(n_vars):
        bit_v = ((data_int >> v) & 1).astype(np.int64)
        for mask in range(full):
            if mask & (1 << v):
                continue
            cfg = data_int & mask
            combined = cfg * 2 + bit_v
            counts = np.bincount(combined, minlength=2 * full)
            n0 = counts[0::2].astype(np.float64)
            n1 = counts[1::2].astype(np.float64)
            tot = n0 + n1
            nz = tot > 0
            ll = 0.0
            with np.errstate(divide="ignore", invalid="ignore"):
                t0 = np.where(n0[nz] > 0, n0[nz] * np.log(n0[nz] / tot[nz]), 0.0)
                t1 = np.where(n1[nz] > 0, n1[nz] * np.log(n1[nz] / tot[nz]), 0.0)
            ll = float(t0.sum() + t1.sum())
            n_params = 1 << bin(mask).count("1")
            scores[v, mask] = ll - 0.5 * log_n * n_params
    return scores


def learn_bn_structure(
    configs: list[HardwareConfig], max_vars: int = MAX_EXACT_VARS
) -> list[tuple[int, ...]]:
    """Globally BIC-optimal parent sets, by exact subset dynamic programming.

    Ties prefer smaller parent sets (so independent data yields the empty
    graph) and are otherwise broken deterministically.
    """
    data = _config_matrix(configs)
    n_vars = data.shape[1]
    if n_vars > max_vars:
        raise TooManyVariables(n_vars, max_vars)

    local = _local_bic_scores(data)
    full = 1 << n_vars

    # Best parent set restricted to each candidate mask. Subset candidates
    # are considered first and local(v, mask) must strictly beat them, so
    # ties go to the smaller parent set.
    bps_score = np.full((n_vars, full), -np.inf)
    bps_choice = np.zeros((n_vars, full), dtype=np.int64)
    for v in range(n_vars):
        for mask in range(full):
            if mask & (1 << v):
                continue
            best = local[v, 0]
            choice = 0
            m = mask
            while m:
                bit = m & -m
                sub = mask ^ bit
                if bps_score[v, sub] > best:
                    best = bps_score[v, sub]
                    choice = bps_choice[v, sub]
                m ^= bit
            if local[v, mask] > best:
                best = local[v, mask]
                choice = mask
            bps_score[v, mask] = best
            bps_choice[v, mask] = choice

    # Optimal sink ordering over subsets.
    best_sub = np.full(full, -np.inf)
    best_sink = np.full(full, -1, dtype=np.int64)
    best_sub[0] = 0.0
    for mask in range(1, full):
        m = mask
        while m:
            bit = m & -m
            s = bit.bit_length() - 1
            rest = mask ^ bit
            cand = best_sub[rest] + bps_score[s, rest]
            if cand > best_sub[mask]:
                best_sub[mask] = cand
                best_sink[mask] = s
            m ^= bit

    parents: list[tuple[int, ...]] = [()] * n_vars
    mask = full - 1
    while mask:
        s = int(best_sink[mask])
        rest = mask ^ (1 << s)
        choice = int(bps_choice[s, rest])
        parents[s] = tuple(p for p in range(n_vars) if choice & (1 << p))
        mask = rest
    return parents


def bic_score(parents: list[tuple[int, ...]], configs: list[HardwareConfig]) -> float:
    """Total BIC of a given structure on the data (test/ledger oracle)."""
    data = _config_matrix(configs)
    local = _local_bic_scores(data)
    total = 0.0
    for v, ps in enumerate(parents):
        mask = 0
        for p in ps:
            mask |= 1 << p
        total += local[v, mask]
    return float(total)


def fit_bn_cpts(
    parents: list[tuple[int, ...]],
    configs: list[HardwareConfig],
    variables: list[str] | None = None,
) -> BayesNet:
    """Laplace-smoothed CPTs: P(v=1 | cfg) = (count(v=1, cfg) + 1) / (count(cfg) + 2)."""
    data = _config_matrix(configs)
    n_vars = data.shape[1]
    if variables is None:
        variables = [f"x{v}" for v in range(n_vars)]
    cpts = []
    for v in range(n_vars):
        ps = tuple(parents[v])
        q = 1 << len(ps)
        idx = np.zeros(data.shape[0], dtype=np.int64)
        for j, p in enumerate(ps):
            idx |= data[:, p].astype(np.int64) << j
        ones = np.bincount(idx[data[:, v] == 1], minlength=q).astype(np.float64)
        tot = np.bincount(idx, minlength=q).astype(np.float64)
        cpts.append((ones + 1.0) / (tot + 2.0))
    return BayesNet(list(variables), [tuple(p) for p in parents], cpts)


def bn_conditional(net: BayesNet, evidence: dict[int, int]) -> dict[int, float]:
    """P(v=1 | evidence) for every variable not in the evidence.

    Exact: enumerates the 2^(n - |evidence|) completions of the evidence.
    """
    n = net.n_vars
    for v, val in evidence.items():
        if not 0 <= v < n:
            raise ValueError(f"evidence variable {v} out of range")
        if val not in (0, 1):
            raise ValueError("evidence values must be 0 or 1")
    free = [v for v in range(n) if v not in evidence]
    n_free = len(free)
    rows = 1 << n_free
    assignment = np.zeros((rows, n), dtype=np.uint8)
    for v, val in evidence.items():
        assignment[:, v] = val
    for j, v in enumerate(free):
        assignment[:, v] = (np.arange(rows) >> j) & 1
    probs = net.joint_prob(assignment)
    total = probs.sum()
    if total <= 0.0:
        raise ZeroProbabilityEvidence(f"evidence {evidence} has zero probability")
    return {
        v: float(probs[assignment[:, v] == 1].sum() / total) for v in free
    }
