"""Shallow autoencoder over multi-hot hardware configurations.

One sigmoid hidden layer (narrower than the input) and a sigmoid
reconstruction layer. The loss is per-sample binary cross-entropy summed
over slots, averaged over the batch, plus l1 and l2 penalties on both
weight matrices. Trained with seeded mini-batch gradient descent, so runs
are reproducible. Reconstruction scores of absent slots rank completion
candidates, which is what lets this scale to the 45-slot taxonomy where
exact structure learning cannot go.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import BadDims, LevelMismatch, TooFewSamples
from .modelio import load_model, save_model
from .taxonomy import LEVEL_SIZES, HardwareConfig


@dataclass
class AutoencoderModel:
    level: str
    w1: np.ndarray  # d_hidden x d_in
    b1: np.ndarray  # d_hidden
    w2: np.ndarray  # d_in x d_hidden
    b2: np.ndarray  # d_in
    l1: float
    l2: float
    seed: int
    epoch_losses: list[float]

    @property
    def d_in(self) -> int:
        return self.w1.shape[1]

    @property
    def d_hidden(self) -> int:
        return self.w1.shape[0]


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def ae_forward(params: tuple, X: np.ndarray):
    w1, b1, w2, b2 = params
    hidden = _sigmoid(X @ w1.T + b1)
    z_out = hidden @ w2.T + b2
    return hidden, z_out, _sigmoid(z_out)


def ae_loss_and_grads(params: tuple, X: np.ndarray, l1: float, l2: float):
    """Total loss and gradients w.r.t. (w1, b1, w2, b2) on batch X."""
    w1, b1, w2, b2 = params
    n = X.shape[0]
    hidden, z_out, recon = ae_forward(params, X)
    # stable BCE-with-logits: max(z,0) - z*x + log1p(exp(-|z|))
    bce = np.maximum(z_out, 0.0) - z_out * X + np.log1p(np.exp(-np.abs(z_out)))
    loss = float(
        bce.sum() / n
        + l1 * (np.abs(w1).sum() + np.abs(w2).sum())
        + l2 * ((w1 * w1).sum() + (w2 * w2).sum())
    )
    d_z_out = (recon - X) / n
    d_w2 = d_z_out.T @ hidden + l1 * np.sign(w2) + 2.0 * l2 * w2
    d_b2 = d_z_out.sum(axis=0)
    d_hidden = d_z_out @ w2
    d_z1 = d_hidden * hidden * (1.0 - hidden)
    d_w1 = d_z1.T @ X + l1 * np.sign(w1) + 2.0 * l2 * w1
    d_b1 = d_z1.sum(axis=0)
    return loss, (d_w1, d_b1, d_w2, d_b2)


def train_autoencoder(
    configs: list[HardwareConfig],
    d_hidden: int | None = None,
    l1: float = 1e-5,
    l2: float = 1e-4,
    epochs: int = 300,
    lr: float = 0.05,
    seed: int = 0,
    batch_size: int = 32,
) -> AutoencoderModel:
    """Mini-batch gradient descent on the reconstruction objective.

    d_hidden defaults to ceil(d_in / 2). Deterministic per seed.
    """
    if len(configs) < 10:
        raise TooFewSamples(f"need >= 10 configs, got {len(configs)}")
    level = configs[0].level
    for c in configs:
        if c.level != level:
            raise LevelMismatch(level, c.level)
    d_in = LEVEL_SIZES[level]
    if d_hidden is None:
        d_hidden = (d_in + 1) // 2
    if not 1 <= d_hidden < d_in:
        raise BadDims(f"need 1 <= d_hidden < {d_in}, got {d_hidden}")

    X = np.stack([c.present for c in configs]).astype(np.float64)
    rng = np.random.default_rng(seed)
    limit1 = np.sqrt(6.0 / (d_in + d_hidden))
    w1 = rng.uniform(-limit1, limit1, size=(d_hidden, d_in))
    b1 = np.zeros(d_hidden)
    w2 = rng.uniform(-limit1, limit1, size=(d_in, d_hidden))
    b2 = np.zeros(d_in)

    epoch_losses: list[float] = []
    n = X.shape[0]
    for _ in range(epochs):
        order = rng.permutation(n)
        batch_losses = []
        for start in range(0, n, batch_size):
            batch = X[order[start : start + batch_size]]
            loss, (d_w1, d_b1, d_w2, d_b2) = ae_loss_and_grads(
                (w1, b1, w2, b2), batch, l1, l2
            )
            w1 -= lr * d_w1
            b1 -= lr * d_b1
            w2 -= lr * d_w2
            b2 -= lr * d_b2
            batch_losses.append(loss)
        epoch_losses.append(float(np.mean(batch_losses)))

    return AutoencoderModel(
        level=level, w1=w1, b1=b1, w2=w2, b2=b2,
        l1=l1, l2=l2, seed=seed, epoch_losses=epoch_losses,
    )


def ae_reconstruct(model: AutoencoderModel, config: HardwareConfig) -> np.ndarray:
    if config.level != model.level:
        raise LevelMismatch(model.level, config.level)
    x = config.present.astype(np.float64)[None, :]
    _, _, recon = ae_forward((model.w1, model.b1, model.w2, model.b2), x)
    return recon[0]


def ae_complete(model: AutoencoderModel, partial: HardwareConfig) -> dict[int, float]:
    """Reconstruction scores for the slots not present in `partial`."""
    recon = ae_reconstruct(model, partial)
    return {
        int(i): float(recon[i]) for i in np.flatnonzero(partial.present == 0)
    }


def save_autoencoder(model: AutoencoderModel, path: str | Path) -> None:
    save_model(
        path,
        model_kind="autoencoder",
        params={
            "level": model.level, "l1": model.l1, "l2": model.l2,
            "seed": model.seed, "epoch_losses": model.epoch_losses,
        },
        matrices={
            "w1": model.w1.astype(np.float64),
            "b1": model.b1.astype(np.float64),
            "w2": model.w2.astype(np.float64),
            "b2": model.b2.astype(np.float64),
        },
    )


def load_autoencoder(path: str | Path) -> AutoencoderModel:
    params, m = load_model(path, expected_kind="autoencoder")
    return AutoencoderModel(
        level=params["level"], w1=m["w1"], b1=m["b1"], w2=m["w2"], b2=m["b2"],
        l1=float(params["l1"]), l2=float(params["l2"]),
        seed=int(params["seed"]), epoch_losses=list(params["epoch_losses"]),
    )
