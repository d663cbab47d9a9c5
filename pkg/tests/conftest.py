import numpy as np
import pytest

from aeskit.autoencoder import train_autoencoder
from aeskit.bayesnet import fit_bn_cpts, learn_bn_structure
from aeskit.doc2vec import Doc2VecParams, train_doc2vec
from aeskit.features import FeatureSetSpec, extract_features, select_features
from aeskit.logreg import train_logreg
from aeskit.pipeline import ModelBundle
from aeskit.search import build_index
from aeskit.synth import (
    demo_l1_generator,
    generate_synthetic_corpus,
    generate_synthetic_hwconfigs,
)
from aeskit.taxonomy import builtin_taxonomy

CODE = FeatureSetSpec(("code",))


@pytest.fixture(scope="session")
def small_corpus():
    """4 classes x 30 docs, one planted duplicate pair per class."""
    return generate_synthetic_corpus(4, 30, 20, 60, 80, seed=7)


@pytest.fixture(scope="session")
def small_sequences(small_corpus):
    ids = [d.id for d in small_corpus]
    seqs = [select_features(extract_features(d), CODE) for d in small_corpus]
    return ids, seqs


@pytest.fixture(scope="session")
def small_d2v(small_sequences):
    """pv-dbow model over the small corpus; shared by retrieval tests."""
    ids, seqs = small_sequences
    params = Doc2VecParams(
        dim=50, algorithm="pv-dbow", negative=5, epochs=60, seed=3
    )
    return train_doc2vec(seqs, params, doc_ids=ids)


@pytest.fixture(scope="session")
def model_bundle(small_corpus, small_d2v):
    """Trained bundle over the small corpus: classifier, index, hw models."""
    ids = [d.id for d in small_corpus]
    labels = [d.label for d in small_corpus]
    X = small_d2v.doc_vectors.astype(np.float64)
    classifier = train_logreg(X, labels, l2=1e-2, max_iter=200)
    index = build_index(list(zip(ids, X)))

    gen = demo_l1_generator()
    hw_train = generate_synthetic_hwconfigs(gen, 800, seed=19)
    ae = train_autoencoder(hw_train, epochs=150, seed=2)
    bn = fit_bn_cpts(learn_bn_structure(hw_train), hw_train, variables=gen.variables)
    return ModelBundle(
        dialect="arduino",
        feature_spec=CODE,
        d2v=small_d2v,
        classifier=classifier,
        index=index,
        taxonomy=builtin_taxonomy("L1"),
        ae=ae,
        bn=bn,
        infer_steps=30,
        infer_seed=1,
    )
