import io

import numpy as np

from aeskit.bayesnet import BayesNet
from aeskit.corpus import save_corpus
from aeskit.features import FeatureSetSpec, extract_features, select_features
from aeskit.synth import (
    demo_l1_generator,
    generate_synthetic_corpus,
    generate_synthetic_hwconfigs,
)

CODE = FeatureSetSpec(("code",))


def test_counts_and_labels():
    docs = generate_synthetic_corpus(12, 200, 50, 200, 120, seed=7)
    assert len(docs) == 2400
    assert len({d.label for d in docs}) == 12


def test_deterministic_per_seed(tmp_path):
    a = tmp_path / "a.jsonl"
    b = tmp_path / "b.jsonl"
    save_corpus(generate_synthetic_corpus(3, 10, 5, 10, 40, seed=9), a)
    save_corpus(generate_synthetic_corpus(3, 10, 5, 10, 40, seed=9), b)
    assert a.read_bytes() == b.read_bytes()


def test_duplicate_pair_planted_per_class():
    docs = generate_synthetic_corpus(3, 10, 5, 10, 40, seed=2)
    by_label = {}
    for d in docs:
        by_label.setdefault(d.label, []).append(d)
    for group in by_label.values():
        assert group[0].sources[0][1] == group[-1].sources[0][1]
        assert group[0].id != group[-1].id


def test_disjoint_vocab_separable_by_nearest_centroid():
    """Class-separability oracle: with no shared vocabulary, a bag-of-words
    nearest-centroid classifier must reach 100% train accuracy."""
    docs = generate_synthetic_corpus(2, 5, 10, 0, 50, seed=1)
    seqs = [select_features(extract_features(d), CODE) for d in docs]
    labels = [d.label for d in docs]
    vocab = sorted({t for s in seqs for t in s})
    col = {t: i for i, t in enumerate(vocab)}
    X = np.zeros((len(seqs), len(vocab)))
    for i, s in enumerate(seqs):
        for t in s:
            X[i, col[t]] += 1
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    names = sorted(set(labels))
    centroids = np.stack([X[[l == n for l in labels]].mean(axis=0) for n in names])
    pred = [names[i] for i in (X @ centroids.T).argmax(axis=1)]
    assert pred == labels

    # cross-class vocabulary is disjoint apart from the sketch scaffold
    scaffold = {"void", "setup", "loop"}
    class_vocabs = {}
    for s, l in zip(seqs, labels):
        class_vocabs.setdefault(l, set()).update(set(s) - scaffold)
    a, b = class_vocabs.values()
    assert not (a & b)


def test_hwconfigs_independent_bits_mean():
    gen = BayesNet.independent_bits([f"x{i}" for i in range(9)], 0.5)
    configs = generate_synthetic_hwconfigs(gen, 1000, seed=3)
    assert len(configs) == 1000
    assert all(c.n_present >= 1 for c in configs)
    mean_bits = np.mean([c.n_present for c in configs])
    assert 4.0 <= mean_bits <= 5.0


def test_hwconfigs_empty_request():
    assert generate_synthetic_hwconfigs(demo_l1_generator(), 0, seed=0) == []


def test_hwconfigs_chain_conditional_frequency():
    net = BayesNet(
        ["A", "B"], [(), (0,)], [np.array([0.6]), np.array([0.2, 0.9])]
    )
    # sample directly (no all-zero rejection) so the conditional is untouched
    rng = np.random.default_rng(4)
    rows = net.sample(5000, rng)
    a1 = rows[:, 0] == 1
    p_b_given_a = rows[a1, 1].mean()
    assert abs(p_b_given_a - 0.9) <= 0.05


def test_hwconfigs_deterministic():
    gen = demo_l1_generator()
    a = generate_synthetic_hwconfigs(gen, 50, seed=5)
    b = generate_synthetic_hwconfigs(gen, 50, seed=5)
    assert all(np.array_equal(x.present, y.present) for x, y in zip(a, b))


def test_demo_generator_shape():
    gen = demo_l1_generator()
    assert gen.n_vars == 9
    assert gen.variables[0] == "Actuators"
