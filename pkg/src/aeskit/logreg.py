"""Multinomial logistic regression trained by full-batch gradient descent.

The objective is mean softmax cross-entropy plus (l2/2) * ||W||^2 (bias
unpenalized). Steps use backtracking line search (Armijo), so the loss
never increases; training stops at max_iter, when the gradient infinity
norm drops below tol, or when no acceptable step exists. The problem is
convex, so initialization is zero and the run is deterministic.

Accepts dense arrays or scipy sparse matrices for X.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .errors import DimensionMismatch, SingleClass
from .modelio import load_model, save_model


@dataclass
class LogRegModel:
    weights: np.ndarray  # n_classes x dim
    bias: np.ndarray  # n_classes
    class_names: list[str]
    l2: float
    loss_history: list[float] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return self.weights.shape[1]


def _softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def logreg_loss_and_grad(
    weights: np.ndarray,
    bias: np.ndarray,
    X,
    y_idx: np.ndarray,
    l2: float,
):
    """Objective value and analytic gradients (shared by train and tests)."""
    n = X.shape[0]
    z = X @ weights.T + bias
    z = np.asarray(z)
    logits = z - z.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(logits).sum(axis=1))
    loss = float(
        (-logits[np.arange(n), y_idx] + log_norm).mean()
        + 0.5 * l2 * np.sum(weights * weights)
    )
    p = _softmax(z)
    p[np.arange(n), y_idx] -= 1.0
    p /= n
    grad_w = np.asarray((X.T @ p).T) + l2 * weights
    grad_b = p.sum(axis=0)
    return loss, grad_w, grad_b


def train_logreg(
    X,
    y: list[str],
    l2: float = 1e-2,
    max_iter: int = 500,
    tol: float = 1e-6,
    seed: int = 0,
) -> LogRegModel:
    """Fit the classifier. `seed` is accepted for interface uniformity but
    unused: the convex objective is optimized from zero initialization."""
    X = X if sp.issparse(X) else np.asarray(X, dtype=np.float64)
    if X.shape[0] != len(y):
        raise DimensionMismatch(X.shape[0], len(y))
    class_names = sorted(set(y))
    if len(class_names) < 2:
        raise SingleClass(f"need >= 2 classes, got {class_names}")
    if X.shape[0] < len(class_names):
        raise DimensionMismatch(len(class_names), X.shape[0])
    class_index = {c: i for i, c in enumerate(class_names)}
    y_idx = np.array([class_index[label] for label in y], dtype=np.int64)

    n_classes, dim = len(class_names), X.shape[1]
    weights = np.zeros((n_classes, dim), dtype=np.float64)
    bias = np.zeros(n_classes, dtype=np.float64)

    step = 1.0
    loss, grad_w, grad_b = logreg_loss_and_grad(weights, bias, X, y_idx, l2)
    history = [loss]
    for _ in range(max_iter):
        g_inf = max(np.abs(grad_w).max(initial=0.0), np.abs(grad_b).max(initial=0.0))
        if g_inf < tol:
            break
        g_sq = float(np.sum(grad_w * grad_w) + np.sum(grad_b * grad_b))
        t = step
        accepted = False
        while t >= 1e-14:
            w_new = weights - t * grad_w
            b_new = bias - t * grad_b
            new_loss, new_gw, new_gb = logreg_loss_and_grad(w_new, b_new, X, y_idx, l2)
            if new_loss <= loss - 1e-4 * t * g_sq:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            break
        weights, bias = w_new, b_new
        loss, grad_w, grad_b = new_loss, new_gw, new_gb
        history.append(loss)
        step = t * 2.0

    return LogRegModel(
        weights=weights, bias=bias, class_names=class_names, l2=l2,
        loss_history=history,
    )


def predict_proba(model: LogRegModel, x) -> np.ndarray:
    """Softmax class probabilities for one vector or a matrix of rows."""
    single = not sp.issparse(x) and np.asarray(x).ndim == 1
    if single:
        x = np.asarray(x, dtype=np.float64)[None, :]
    if x.shape[1] != model.dim:
        raise DimensionMismatch(model.dim, x.shape[1])
    z = np.asarray(x @ model.weights.T + model.bias)
    p = _softmax(z)
    return p[0] if single else p


def predict_labels(model: LogRegModel, X) -> list[str]:
    p = predict_proba(model, X)
    p = np.atleast_2d(p)
    return [model.class_names[i] for i in p.argmax(axis=1)]


def save_logreg(model: LogRegModel, path: str | Path) -> None:
    save_model(
        path,
        model_kind="logreg",
        params={"class_names": model.class_names, "l2": model.l2},
        matrices={
            "weights": model.weights.astype(np.float64),
            "bias": model.bias.astype(np.float64),
        },
    )


def load_logreg(path: str | Path) -> LogRegModel:
    params, matrices = load_model(path, expected_kind="logreg")
    return LogRegModel(
        weights=matrices["weights"],
        bias=matrices["bias"],
        class_names=list(params["class_names"]),
        l2=float(params["l2"]),
    )
