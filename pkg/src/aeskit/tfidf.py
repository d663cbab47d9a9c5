"""Smoothed tf-idf document vectors.

idf(t) = ln((1 + n_docs) / (1 + df(t))) + 1, so no term gets a zero or
negative weight. Transformed vectors are raw term counts scaled by idf and
L2-normalized; an empty (or fully out-of-vocabulary) document maps to the
zero vector. Vectors are scipy CSR rows: vocabulary size tracks the corpus
and can reach 10^4-10^5 for description-like channels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .errors import EmptyCorpus, ModelFormatError
from .modelio import load_model, save_model

TokenSeq = list[str]


@dataclass
class TfIdfModel:
    vocabulary: dict[str, int]  # token -> column, dense in [0, |V|)
    idf: np.ndarray  # float64, length |V|
    n_docs: int


def fit_tfidf(docs: list[TokenSeq]) -> TfIdfModel:
    """Build the vocabulary and idf vector from tokenized documents."""
    if not docs or all(len(d) == 0 for d in docs):
        raise EmptyCorpus("tf-idf needs at least one non-empty document")
    df: dict[str, int] = {}
    for doc in docs:
        for tok in set(doc):
            df[tok] = df.get(tok, 0) + 1
    vocabulary = {tok: i for i, tok in enumerate(sorted(df))}
    n_docs = len(docs)
    idf = np.empty(len(vocabulary), dtype=np.float64)
    for tok, i in vocabulary.items():
        idf[i] = math.log((1 + n_docs) / (1 + df[tok])) + 1.0
    return TfIdfModel(vocabulary=vocabulary, idf=idf, n_docs=n_docs)


def tfidf_transform(model: TfIdfModel, doc: TokenSeq) -> sp.csr_matrix:
    """Embed one document as a 1 x |V| L2-normalized sparse row."""
    counts: dict[int, float] = {}
    for tok in doc:
        col = model.vocabulary.get(tok)
        if col is not None:
            counts[col] = counts.get(col, 0.0) + 1.0
    n_cols = len(model.vocabulary)
    if not counts:
        return sp.csr_matrix((1, n_cols), dtype=np.float64)
    cols = np.array(sorted(counts), dtype=np.int64)
    vals = np.array([counts[c] for c in cols], dtype=np.float64) * model.idf[cols]
    vals /= np.linalg.norm(vals)
    return sp.csr_matrix(
        (vals, cols, np.array([0, len(cols)])), shape=(1, n_cols), dtype=np.float64
    )


def tfidf_transform_all(model: TfIdfModel, docs: list[TokenSeq]) -> sp.csr_matrix:
    """Stack the transforms of many documents into one CSR matrix."""
    rows = [tfidf_transform(model, doc) for doc in docs]
    return sp.vstack(rows, format="csr") if rows else sp.csr_matrix((0, len(model.vocabulary)))


def save_tfidf(model: TfIdfModel, path: str | Path) -> None:
    tokens = [None] * len(model.vocabulary)
    for tok, i in model.vocabulary.items():
        tokens[i] = tok
    save_model(
        path,
        model_kind="tfidf",
        params={"n_docs": model.n_docs, "tokens": tokens},
        matrices={"idf": model.idf.astype(np.float64)},
    )


def load_tfidf(path: str | Path) -> TfIdfModel:
    params, matrices = load_model(path, expected_kind="tfidf")
    tokens = params["tokens"]
    idf = matrices["idf"]
    if len(tokens) != idf.shape[0]:
        raise ModelFormatError(f"{path}: vocabulary/idf size mismatch")
    return TfIdfModel(
        vocabulary={tok: i for i, tok in enumerate(tokens)},
        idf=idf,
        n_docs=int(params["n_docs"]),
    )
