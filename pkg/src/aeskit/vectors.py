"""Dense vector helpers: cosine similarity and the random-embedding baseline."""

from __future__ import annotations

import hashlib

import numpy as np


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity; 0.0 when either vector is zero.

    Inputs are normalized before the dot product, so extreme magnitudes
    cannot underflow the numerator or the norm product.
    """
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0 or not np.isfinite(nu) or not np.isfinite(nv):
        return 0.0
    return float(np.dot(u / nu, v / nv))


def random_embedding(doc_id: str, dim: int, seed: int) -> np.ndarray:
    """Pseudorandom standard-normal vector keyed by (doc_id, seed).

    The key is hashed with SHA-256, so the same inputs give the same
    vector in any process on any platform. Serves as the no-information
    floor for the classifiers.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    digest = hashlib.sha256(f"{seed}\x00{doc_id}".encode("utf-8")).digest()
    rng = np.random.default_rng(int.from_bytes(digest[:8], "little"))
    return rng.standard_normal(dim)


def random_embedding_matrix(doc_ids: list[str], dim: int, seed: int) -> np.ndarray:
    return np.stack([random_embedding(i, dim, seed) for i in doc_ids])
