"""Bagged decision-tree ensemble, the tree-based comparison baseline.

CART trees with Gini splits, sqrt(dim) feature subsampling per node,
bootstrap resampling per tree, majority vote over trees. Deterministic
per seed. Stands in for a boosted-tree library as the non-linear
comparison point for the logistic classifier.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import DimensionMismatch, SingleClass


@dataclass
class _Node:
    feature: int = -1
    threshold: float = 0.0
    left: "_Node | None" = None
    right: "_Node | None" = None
    klass: int = -1  # leaf payload

    @property
    def is_leaf(self) -> bool:
        return self.feature < 0


@dataclass
class ForestModel:
    trees: list[_Node]
    class_names: list[str]
    n_features: int


def _gini(counts: np.ndarray) -> float:
    n = counts.sum()
    if n == 0:
        return 0.0
    p = counts / n
    return float(1.0 - np.sum(p * p))


def _majority(y: np.ndarray, n_classes: int) -> int:
    return int(np.bincount(y, minlength=n_classes).argmax())


def _best_split(X, y, feat_ids, n_classes):
    """Best (feature, threshold) by Gini decrease; None when nothing splits."""
    best = None  # (impurity, feature, threshold)
    for f in feat_ids:
        col = X[:, f]
        order = np.argsort(col, kind="stable")
        xs, ys = col[order], y[order]
        left = np.zeros(n_classes, dtype=np.float64)
        right = np.bincount(ys, minlength=n_classes).astype(np.float64)
        n = len(ys)
        for i in range(n - 1):
            left[ys[i]] += 1
            right[ys[i]] -= 1
            if xs[i + 1] <= xs[i]:
                continue
            n_l = i + 1
            imp = (n_l * _gini(left) + (n - n_l) * _gini(right)) / n
            if best is None or imp < best[0] - 1e-15:
                best = (imp, int(f), float((xs[i] + xs[i + 1]) / 2.0))
    return best


def _grow(X, y, depth, max_depth, n_classes, rng):
    node = _Node(klass=_majority(y, n_classes))
    if depth >= max_depth or len(np.unique(y)) < 2:
        return node
    k = max(1, int(round(np.sqrt(X.shape[1]))))
    feat_ids = np.sort(rng.choice(X.shape[1], size=k, replace=False))
    found = _best_split(X, y, feat_ids, n_classes)
    if found is None:
        return node
    _, f, thr = found
    mask = X[:, f] <= thr
    node.feature, node.threshold = f, thr
    node.left = _grow(X[mask], y[mask], depth + 1, max_depth, n_classes, rng)
    node.right = _grow(X[~mask], y[~mask], depth + 1, max_depth, n_classes, rng)
    return node


def train_tree_ensemble(
    X, y: list[str], n_trees: int = 25, max_depth: int = 8, seed: int = 0
) -> ForestModel:
    X = X.toarray() if sp.issparse(X) else np.asarray(X, dtype=np.float64)
    if X.shape[0] != len(y):
        raise DimensionMismatch(X.shape[0], len(y))
    class_names = sorted(set(y))
    if len(class_names) < 2:
        raise SingleClass(f"need >= 2 classes, got {class_names}")
    if X.shape[0] < len(class_names):
        raise DimensionMismatch(len(class_names), X.shape[0])
    index = {c: i for i, c in enumerate(class_names)}
    y_idx = np.array([index[label] for label in y], dtype=np.int64)

    rng = np.random.default_rng(seed)
    trees = []
    for _ in range(n_trees):
        boot = rng.integers(0, X.shape[0], size=X.shape[0])
        trees.append(
            _grow(X[boot], y_idx[boot], 0, max_depth, len(class_names), rng)
        )
    return ForestModel(trees=trees, class_names=class_names, n_features=X.shape[1])


def _tree_predict(node: _Node, x: np.ndarray) -> int:
    while not node.is_leaf:
        node = node.left if x[node.feature] <= node.threshold else node.right
    return node.klass


def forest_predict(model: ForestModel, X) -> list[str]:
    X = X.toarray() if sp.issparse(X) else np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != model.n_features:
        raise DimensionMismatch(model.n_features, X.shape[1])
    out = []
    n_classes = len(model.class_names)
    for row in X:
        votes = np.zeros(n_classes, dtype=np.int64)
        for tree in model.trees:
            votes[_tree_predict(tree, row)] += 1
        out.append(model.class_names[int(votes.argmax())])
    return out
