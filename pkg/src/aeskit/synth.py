"""Synthetic corpora and hardware configurations for tests and demos.

The real datasets are proprietary/user-supplied, so the acceptance suite
runs on generated stand-ins: a planted-topic code corpus whose classes are
separable by construction, and multi-hot hardware configs sampled from a
known Bayesian network.
"""

from __future__ import annotations

import numpy as np

from .bayesnet import BayesNet
from .corpus import CodeDocument, Corpus
from .taxonomy import HardwareConfig


def generate_synthetic_corpus(
    n_classes: int,
    docs_per_class: int,
    vocab_per_class: int,
    shared_vocab: int,
    doc_len: int,
    seed: int,
) -> Corpus:
    """Planted-keyword corpus: each class mixes its own vocabulary with a
    shared one (half/half; class-only when shared_vocab is 0).

    Documents are small sketch-shaped sources so the lexer sees realistic
    input. Besides the class/shared mix, every document owns a handful of
    document-local identifiers (the way real sketches carry their own
    variable names); the last document of every class duplicates the first
    exactly (ids differ), so each duplicate pair shares rare identifiers
    that no other document has — a known top-1 answer for retrieval tests.
    Deterministic per seed.
    """
    if min(n_classes, docs_per_class, vocab_per_class, doc_len) < 1 or shared_vocab < 0:
        raise ValueError("all sizes must be >= 1 (shared_vocab >= 0)")
    rng = np.random.default_rng(seed)
    shared_words = [f"util_{i}" for i in range(shared_vocab)]
    docs: Corpus = []
    for c in range(n_classes):
        label = f"class{c:02d}"
        class_words = [f"kw{c:02d}_{i}" for i in range(vocab_per_class)]
        texts: list[str] = []
        for d in range(docs_per_class):
            if d == docs_per_class - 1 and docs_per_class >= 2:
                text = texts[0]  # planted exact duplicate of the first doc
            else:
                local_words = [f"var{c:02d}_{d:04d}_{i}" for i in range(8)]
                words = []
                for _ in range(doc_len):
                    r = rng.random()
                    if shared_vocab and r >= 0.85:
                        words.append(shared_words[rng.integers(shared_vocab)])
                    elif r < 0.15:
                        words.append(local_words[rng.integers(len(local_words))])
                    else:
                        words.append(class_words[rng.integers(vocab_per_class)])
                lines = [
                    "  " + " ".join(f"{w}();" for w in words[i : i + 6])
                    for i in range(0, len(words), 6)
                ]
                text = "void setup() {\n}\nvoid loop() {\n" + "\n".join(lines) + "\n}\n"
            texts.append(text)
            docs.append(
                CodeDocument(
                    id=f"synth-{c:02d}-{d:04d}",
                    dialect="arduino",
                    sources=[("sketch.ino", text)],
                    label=label,
                )
            )
    return docs


def demo_l1_generator() -> BayesNet:
    """A known 9-variable network over the level-1 categories.

    Components come in dependent pairs (sensors bring actuators, power
    follows actuators, electronics bring materials, communications bring
    memory), which makes completion learnable while keeping configurations
    sparse, like curated project lists.
    """
    variables = [
        "Actuators", "Arduino", "Communications", "Electronics",
        "Human Machine Interface", "Materials", "Memory", "Power", "Sensors",
    ]
    parents = [(8,), (), (), (), (8,), (3,), (2,), (0,), ()]
    cpts = [
        np.array([0.015, 0.62]),  # Actuators | Sensors
        np.array([0.10]),         # Arduino
        np.array([0.07]),         # Communications
        np.array([0.22]),         # Electronics
        np.array([0.01, 0.10]),   # HMI | Sensors
        np.array([0.015, 0.55]),  # Materials | Electronics
        np.array([0.01, 0.35]),   # Memory | Communications
        np.array([0.015, 0.35]),  # Power | Actuators
        np.array([0.32]),         # Sensors
    ]
    return BayesNet(variables, parents, cpts)


def generate_synthetic_hwconfigs(
    generator: BayesNet, n: int, seed: int
) -> list[HardwareConfig]:
    """Ancestral samples from `generator`; all-zero rows are resampled."""
    level = "L1" if generator.n_vars == 9 else "L2"
    if generator.n_vars not in (9, 45):
        raise ValueError("generator must cover 9 (L1) or 45 (L2) variables")
    rng = np.random.default_rng(seed)
    rows: list[np.ndarray] = []
    while len(rows) < n:
        batch = generator.sample(max(n - len(rows), 64), rng)
        for row in batch:
            if row.any():
                rows.append(row)
                if len(rows) == n:
                    break
    return [HardwareConfig(level, row) for row in rows]
