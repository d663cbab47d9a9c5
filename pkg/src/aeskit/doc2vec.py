"""Paragraph-vector document embeddings trained with negative sampling.

Two training algorithms:

* pv-dm: predict each word from the mean of the document vector and the
  word vectors inside a (randomly reduced) context window.
* pv-dbow: predict each word from the document vector alone.

Both push the predictor through a sigmoid output layer against the true
word plus `negative` noise words drawn from the unigram^0.75 distribution.
A single seeded generator drives initialization, window reduction, and
noise draws, and documents are visited in corpus order, so training is
exactly reproducible. The hot loops are JIT-compiled scalar code; weights
are float32, arithmetic runs in float64.

`dm_example_loss_and_grads` / `dbow_example_loss_and_grads` are float64
reference implementations of the per-example objective used by the
finite-difference gradient tests.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import CorpusTooSmall, UntrainedModel
from .modelio import load_model, save_model

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda fn: fn

TokenSeq = list[str]

ALGORITHMS = ("pv-dm", "pv-dbow")


@dataclass
class Doc2VecParams:
    dim: int = 50
    algorithm: str = "pv-dm"
    negative: int = 5
    window: int = 5
    min_count: int = 2
    epochs: int = 40
    alpha_initial: float = 0.025
    alpha_final: float = 0.0001
    seed: int = 0

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.negative < 1:
            raise ValueError("negative must be >= 1")
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}")
        if not self.alpha_initial >= self.alpha_final > 0:
            raise ValueError("need alpha_initial >= alpha_final > 0")

    def to_dict(self) -> dict:
        return {
            "dim": self.dim, "algorithm": self.algorithm,
            "negative": self.negative, "window": self.window,
            "min_count": self.min_count, "epochs": self.epochs,
            "alpha_initial": self.alpha_initial, "alpha_final": self.alpha_final,
            "seed": self.seed,
        }


@dataclass
class Doc2VecModel:
    params: Doc2VecParams
    vocabulary: dict[str, int]
    word_vectors: np.ndarray  # |V| x dim float32
    doc_vectors: np.ndarray  # |D| x dim float32
    output_vectors: np.ndarray  # |V| x dim float32, negative-sampling layer
    noise_counts: np.ndarray  # |V| int64 unigram counts
    doc_ids: list[str] | None = None
    epoch_losses: list[float] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return self.params.dim

    def doc_vector(self, row: int) -> np.ndarray:
        return self.doc_vectors[row]


def _sigmoid(x: float) -> float:
    # clamped, so log(f) and log(1-f) stay finite
    if x > 30.0:
        x = 30.0
    elif x < -30.0:
        x = -30.0
    return 1.0 / (1.0 + np.exp(-x))


@njit(cache=True, nogil=True)
def _epoch_dm(flat, offsets, Wd, Ww, Wo, reduced, noise,
              alpha, negative, update_words, update_out):
    """One pv-dm pass. Returns summed per-example loss."""
    dim = Wd.shape[1]
    n_docs = offsets.shape[0] - 1
    h = np.empty(dim, dtype=np.float64)
    grad_h = np.empty(dim, dtype=np.float64)
    loss = 0.0
    pos = 0
    for d in range(n_docs):
        start = offsets[d]
        end = offsets[d + 1]
        for t in range(start, end):
            b = reduced[pos]
            lo = t - b
            if lo < start:
                lo = start
            hi = t + b + 1
            if hi > end:
                hi = end
            target = flat[t]
            cnt = 1
            for k in range(dim):
                h[k] = Wd[d, k]
            for j in range(lo, hi):
                if j == t:
                    continue
                w = flat[j]
                for k in range(dim):
                    h[k] += Ww[w, k]
                cnt += 1
            inv = 1.0 / cnt
            for k in range(dim):
                h[k] *= inv
                grad_h[k] = 0.0
            for s in range(negative + 1):
                if s == 0:
                    w_out = target
                    label = 1.0
                else:
                    w_out = noise[pos * negative + s - 1]
                    if w_out == target:
                        continue
                    label = 0.0
                dot = 0.0
                for k in range(dim):
                    dot += h[k] * Wo[w_out, k]
                if dot > 30.0:
                    dot = 30.0
                elif dot < -30.0:
                    dot = -30.0
                f = 1.0 / (1.0 + np.exp(-dot))
                if label == 1.0:
                    loss -= np.log(f)
                else:
                    loss -= np.log(1.0 - f)
                g = (label - f) * alpha
                for k in range(dim):
                    grad_h[k] += g * Wo[w_out, k]
                if update_out:
                    for k in range(dim):
                        Wo[w_out, k] += g * h[k]
            for k in range(dim):
                grad_h[k] *= inv
                Wd[d, k] += grad_h[k]
            if update_words:
                for j in range(lo, hi):
                    if j == t:
                        continue
                    w = flat[j]
                    for k in range(dim):
                        Ww[w, k] += grad_h[k]
            pos += 1
    return loss


@njit(cache=True, nogil=True)
def _epoch_dbow(flat, offsets, Wd, Wo, noise, alpha, negative, update_out):
    """One pv-dbow pass. Returns summed per-example loss."""
    dim = Wd.shape[1]
    n_docs = offsets.shape[0] - 1
    loss = 0.0
    pos = 0
    for d in range(n_docs):
        start = offsets[d]
        end = offsets[d + 1]
        for t in range(start, end):
            target = flat[t]
            grad = np.zeros(dim, dtype=np.float64)
            for s in range(negative + 1):
                if s == 0:
                    w_out = target
                    label = 1.0
                else:
                    w_out = noise[pos * negative + s - 1]
                    if w_out == target:
                        continue
                    label = 0.0
                dot = 0.0
                for k in range(dim):
                    dot += Wd[d, k] * Wo[w_out, k]
                if dot > 30.0:
                    dot = 30.0
                elif dot < -30.0:
                    dot = -30.0
                f = 1.0 / (1.0 + np.exp(-dot))
                if label == 1.0:
                    loss -= np.log(f)
                else:
                    loss -= np.log(1.0 - f)
                g = (label - f) * alpha
                for k in range(dim):
                    grad[k] += g * Wo[w_out, k]
                if update_out:
                    for k in range(dim):
                        Wo[w_out, k] += g * Wd[d, k]
            for k in range(dim):
                Wd[d, k] += grad[k]
            pos += 1
    return loss


def _build_vocab(docs: list[TokenSeq], min_count: int):
    counts: dict[str, int] = {}
    for doc in docs:
        for tok in doc:
            counts[tok] = counts.get(tok, 0) + 1
    kept = sorted(tok for tok, c in counts.items() if c >= min_count)
    vocabulary = {tok: i for i, tok in enumerate(kept)}
    noise_counts = np.array([counts[tok] for tok in kept], dtype=np.int64)
    return vocabulary, noise_counts


def _encode(docs: list[TokenSeq], vocabulary: dict[str, int]):
    encoded = [
        np.array([vocabulary[t] for t in doc if t in vocabulary], dtype=np.int32)
        for doc in docs
    ]
    offsets = np.zeros(len(docs) + 1, dtype=np.int64)
    for i, arr in enumerate(encoded):
        offsets[i + 1] = offsets[i] + len(arr)
    flat = (
        np.concatenate(encoded) if offsets[-1] > 0 else np.zeros(0, dtype=np.int32)
    )
    return flat, offsets


def _noise_cdf(noise_counts: np.ndarray) -> np.ndarray:
    weights = noise_counts.astype(np.float64) ** 0.75
    cdf = np.cumsum(weights)
    return cdf / cdf[-1]


def _draw_noise(rng: np.random.Generator, cdf: np.ndarray, n: int) -> np.ndarray:
    return np.searchsorted(cdf, rng.random(n), side="right").astype(np.int32)


def _doc_shards(n_docs: int, workers: int) -> list[tuple[int, int]]:
    workers = max(1, min(workers, n_docs))
    bounds = np.linspace(0, n_docs, workers + 1, dtype=int)
    return [(int(bounds[i]), int(bounds[i + 1])) for i in range(workers)
            if bounds[i] < bounds[i + 1]]


def _epoch_alpha(params: Doc2VecParams, epoch: int, total: int) -> float:
    if total <= 1:
        return params.alpha_initial
    frac = epoch / (total - 1)
    return params.alpha_initial + (params.alpha_final - params.alpha_initial) * frac


def train_doc2vec(
    docs: list[TokenSeq],
    params: Doc2VecParams,
    doc_ids: list[str] | None = None,
    workers: int = 1,
) -> Doc2VecModel:
    """Train document and word vectors from scratch.

    With workers=1 (the default), the same docs, params, and seed always
    produce bitwise-identical matrices. workers > 1 shards documents
    across threads with lock-free weight updates: faster, but the update
    interleaving makes results run-to-run nondeterministic, so parallel
    mode is for exploratory training only and stays out of the tests.
    """
    if len(docs) < 2:
        raise CorpusTooSmall("need at least 2 documents")
    if sum(len(d) for d in docs) < params.window:
        raise CorpusTooSmall("total token count below window size")
    if doc_ids is not None and len(doc_ids) != len(docs):
        raise ValueError("doc_ids length must match docs")

    vocabulary, noise_counts = _build_vocab(docs, params.min_count)
    if not vocabulary:
        raise CorpusTooSmall(
            f"no token reaches min_count={params.min_count}"
        )
    flat, offsets = _encode(docs, vocabulary)
    n_pos = int(offsets[-1])
    if n_pos == 0:
        raise CorpusTooSmall("no in-vocabulary tokens to train on")

    rng = np.random.default_rng(params.seed)
    dim = params.dim
    n_words = len(vocabulary)
    word_vectors = ((rng.random((n_words, dim), dtype=np.float32) - 0.5) / dim).astype(np.float32)
    doc_vectors = ((rng.random((len(docs), dim), dtype=np.float32) - 0.5) / dim).astype(np.float32)
    output_vectors = np.zeros((n_words, dim), dtype=np.float32)

    cdf = _noise_cdf(noise_counts)
    shards = _doc_shards(len(docs), workers)
    losses: list[float] = []
    for epoch in range(params.epochs):
        alpha = _epoch_alpha(params, epoch, params.epochs)
        noise = _draw_noise(rng, cdf, n_pos * params.negative)
        if params.algorithm == "pv-dm":
            reduced = rng.integers(1, params.window, size=n_pos, endpoint=True).astype(np.int64)
        else:
            reduced = None

        def run_shard(lo: int, hi: int) -> float:
            p0, p1 = int(offsets[lo]), int(offsets[hi])
            if params.algorithm == "pv-dm":
                return _epoch_dm(
                    flat, offsets[lo:hi + 1], doc_vectors[lo:hi],
                    word_vectors, output_vectors,
                    reduced[p0:p1], noise[p0 * params.negative:p1 * params.negative],
                    alpha, params.negative, True, True,
                )
            return _epoch_dbow(
                flat, offsets[lo:hi + 1], doc_vectors[lo:hi], output_vectors,
                noise[p0 * params.negative:p1 * params.negative],
                alpha, params.negative, True,
            )

        if len(shards) == 1:
            total = run_shard(*shards[0])
        else:
            from concurrent.futures import ThreadPoolExecutor

            with ThreadPoolExecutor(max_workers=len(shards)) as pool:
                total = sum(pool.map(lambda s: run_shard(*s), shards))
        losses.append(total / n_pos)

    return Doc2VecModel(
        params=params,
        vocabulary=vocabulary,
        word_vectors=word_vectors,
        doc_vectors=doc_vectors,
        output_vectors=output_vectors,
        noise_counts=noise_counts,
        doc_ids=list(doc_ids) if doc_ids is not None else None,
        epoch_losses=losses,
    )


def infer_doc_vector(
    model: Doc2VecModel, tokens: TokenSeq, steps: int = 50, seed: int = 0
) -> np.ndarray:
    """Embed an unseen token sequence against a trained model.

    Word and output vectors stay frozen; only the fresh document vector is
    updated, for `steps` passes over the sequence. Deterministic per seed.
    """
    if not model.vocabulary or model.word_vectors.size == 0:
        raise UntrainedModel("model has no trained vocabulary")
    params = model.params
    rng = np.random.default_rng(seed)
    vec = ((rng.random((1, params.dim), dtype=np.float32) - 0.5) / params.dim).astype(np.float32)

    ids = np.array(
        [model.vocabulary[t] for t in tokens if t in model.vocabulary], dtype=np.int32
    )
    if ids.size == 0:
        warnings.warn("all tokens out of vocabulary; returning the initialization")
        return vec[0].copy()
    offsets = np.array([0, ids.size], dtype=np.int64)
    cdf = _noise_cdf(model.noise_counts)
    for step in range(steps):
        if steps <= 1:
            alpha = params.alpha_initial
        else:
            frac = step / (steps - 1)
            alpha = params.alpha_initial + (params.alpha_final - params.alpha_initial) * frac
        noise = _draw_noise(rng, cdf, ids.size * params.negative)
        if params.algorithm == "pv-dm":
            reduced = rng.integers(1, params.window, size=ids.size, endpoint=True).astype(np.int64)
            _epoch_dm(
                ids, offsets, vec, model.word_vectors, model.output_vectors,
                reduced, noise, alpha, params.negative, False, False,
            )
        else:
            _epoch_dbow(
                ids, offsets, vec, model.output_vectors,
                noise, alpha, params.negative, False,
            )
    return vec[0].copy()


# -- float64 reference objective for gradient checks ----------------------

def dm_example_loss_and_grads(
    doc_vec: np.ndarray,
    context_vecs: np.ndarray,
    out_target: np.ndarray,
    out_negs: np.ndarray,
):
    """Per-example pv-dm loss and analytic gradients (float64).

    h = mean of doc vector and context vectors;
    loss = -log sigma(u_t.h) - sum_j log sigma(-u_j.h).
    Returns (loss, d_doc, d_contexts, d_out_target, d_out_negs).
    """
    m = context_vecs.shape[0]
    h = (doc_vec + context_vecs.sum(axis=0)) / (m + 1)
    f_t = _sigmoid(float(out_target @ h))
    f_n = np.array([_sigmoid(float(u @ h)) for u in out_negs])
    loss = -np.log(f_t) - np.sum(np.log(1.0 - f_n))
    d_h = (f_t - 1.0) * out_target + (f_n[:, None] * out_negs).sum(axis=0)
    d_doc = d_h / (m + 1)
    d_contexts = np.repeat(d_h[None, :] / (m + 1), m, axis=0)
    d_out_target = (f_t - 1.0) * h
    d_out_negs = f_n[:, None] * h[None, :]
    return loss, d_doc, d_contexts, d_out_target, d_out_negs


def dbow_example_loss_and_grads(
    doc_vec: np.ndarray, out_target: np.ndarray, out_negs: np.ndarray
):
    """Per-example pv-dbow loss and analytic gradients (float64)."""
    f_t = _sigmoid(float(out_target @ doc_vec))
    f_n = np.array([_sigmoid(float(u @ doc_vec)) for u in out_negs])
    loss = -np.log(f_t) - np.sum(np.log(1.0 - f_n))
    d_doc = (f_t - 1.0) * out_target + (f_n[:, None] * out_negs).sum(axis=0)
    d_out_target = (f_t - 1.0) * doc_vec
    d_out_negs = f_n[:, None] * doc_vec[None, :]
    return loss, d_doc, d_out_target, d_out_negs


# -- persistence -----------------------------------------------------------

def save_doc2vec(model: Doc2VecModel, path: str | Path) -> None:
    tokens = [None] * len(model.vocabulary)
    for tok, i in model.vocabulary.items():
        tokens[i] = tok
    params = model.params.to_dict()
    params["tokens"] = tokens
    params["doc_ids"] = model.doc_ids
    params["epoch_losses"] = model.epoch_losses
    save_model(
        path,
        model_kind="doc2vec",
        params=params,
        matrices={
            "word_vectors": model.word_vectors,
            "doc_vectors": model.doc_vectors,
            "output_vectors": model.output_vectors,
            "noise_counts": model.noise_counts,
        },
    )


def load_doc2vec(path: str | Path) -> Doc2VecModel:
    params, matrices = load_model(path, expected_kind="doc2vec")
    tokens = params.pop("tokens")
    doc_ids = params.pop("doc_ids")
    losses = params.pop("epoch_losses")
    return Doc2VecModel(
        params=Doc2VecParams(**params),
        vocabulary={tok: i for i, tok in enumerate(tokens)},
        word_vectors=matrices["word_vectors"],
        doc_vectors=matrices["doc_vectors"],
        output_vectors=matrices["output_vectors"],
        noise_counts=matrices["noise_counts"],
        doc_ids=doc_ids,
        epoch_losses=losses,
    )
