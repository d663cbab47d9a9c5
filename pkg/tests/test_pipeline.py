import numpy as np
import pytest

from aeskit.corpus import CodeDocument, SplitSpec
from aeskit.doc2vec import Doc2VecParams
from aeskit.errors import ModelsMissing
from aeskit.features import FeatureSetSpec
from aeskit.pipeline import (
    ModelBundle,
    corpus_sequences,
    empty_code_documents,
    hardware_configs_from_corpus,
    load_bundle,
    run_classification,
    save_bundle,
)
from aeskit.taxonomy import builtin_taxonomy

CODE = FeatureSetSpec(("code",))


def test_corpus_sequences_uses_family_labels():
    doc = CodeDocument(
        id="s", dialect="scl",
        sources=[("f.scl", "(* FAMILY: SIGPRO *)\nFUNCTION F : INT\nEND_FUNCTION")],
    )
    ids, seqs, labels = corpus_sequences([doc], CODE)
    assert labels == ["SIGPRO"]
    assert "function" in seqs[0]


def test_empty_code_documents_flagged():
    docs = [
        CodeDocument(id="full", dialect="arduino",
                     sources=[("a.ino", "void loop() { x(); }")]),
        CodeDocument(id="empty", dialect="arduino",
                     sources=[("b.ino", "// nothing but comments\n")]),
    ]
    assert empty_code_documents(docs) == ["empty"]


def test_run_classification_on_small_corpus(small_corpus):
    run = run_classification(
        small_corpus,
        CODE,
        embed_kind="doc2vec",
        d2v_params=Doc2VecParams(dim=24, epochs=20, seed=1, algorithm="pv-dbow"),
        split=SplitSpec(0.7, seed=5),
        seed=1,
    )
    assert run.report.f1_weighted > 0.8
    assert run.index is not None
    assert run.report.n_test == 36  # 4 classes x 30 docs, 30% test side


def test_run_classification_random_baseline_is_weak(small_corpus):
    run = run_classification(
        small_corpus, CODE, embed_kind="random",
        split=SplitSpec(0.7, seed=5), seed=1,
    )
    assert run.report.f1_weighted < 0.6  # 4 balanced classes, chance ~ 0.25
    assert run.index is None


def test_run_classification_tfidf(small_corpus):
    run = run_classification(
        small_corpus, CODE, embed_kind="tfidf", split=SplitSpec(0.7, seed=5),
    )
    assert run.report.f1_weighted > 0.9


def test_hardware_configs_from_corpus():
    docs = [
        CodeDocument(id="a", dialect="arduino",
                     sources=[("a.ino", "void loop() {}")],
                     raw_components=["dht11", "servo", "whatsit"]),
        CodeDocument(id="b", dialect="arduino",
                     sources=[("b.ino", "void loop() {}")]),
    ]
    configs, unmapped = hardware_configs_from_corpus(docs, builtin_taxonomy("L1"))
    assert len(configs) == 1
    assert configs[0].n_present == 2
    assert unmapped == ["whatsit"]


def test_bundle_save_load_roundtrip(tmp_path, model_bundle, small_corpus):
    out = tmp_path / "bundle"
    save_bundle(model_bundle, out)
    again = load_bundle(out)
    assert again.feature_spec == model_bundle.feature_spec
    doc = small_corpus[3]
    tokens = again.tokens_of(doc)
    label_a, probs_a = model_bundle.classify_tokens(tokens)
    label_b, probs_b = again.classify_tokens(tokens)
    assert label_a == label_b
    assert probs_a == probs_b
    na = model_bundle.neighbors_for_tokens(tokens, 3)
    nb = again.neighbors_for_tokens(tokens, 3)
    assert [(n.id, n.score) for n in na] == [(n.id, n.score) for n in nb]
    partial = again.taxonomy and model_bundle.ae is not None
    assert partial


def test_load_bundle_missing_dir(tmp_path):
    with pytest.raises(ModelsMissing):
        load_bundle(tmp_path / "nothing")


def test_bundle_hw_scores_prefers_ae(model_bundle):
    from aeskit.taxonomy import HardwareConfig

    partial = HardwareConfig("L1", np.zeros(9, dtype=np.uint8))
    partial.present[8] = 1
    scores = model_bundle.hw_scores(partial)
    assert set(scores) == set(range(8))  # every absent slot, never the present one


def test_scl_corpus_end_to_end_classification():
    """Function-block corpus whose labels exist only as FAMILY comment
    markers: extraction supplies them and the pipeline classifies well."""
    import numpy as np

    rng = np.random.default_rng(3)
    families = {
        "SIGPRO": ["filter", "sample", "smooth", "deadband", "ramp"],
        "GEOMETRY": ["circle", "radius", "angle", "area", "vector"],
        "STRINGS": ["concat", "trim", "split", "upper", "find"],
    }
    docs = []
    for family, words in families.items():
        for i in range(14):
            body = []
            for line in range(10):
                w = [words[rng.integers(len(words))] for _ in range(3)]
                body.append(f"  {w[0]} := {w[1]}({w[2]});")
            text = (
                f"(* FAMILY: {family} *)\n"
                f"FUNCTION_BLOCK FB_{family}_{i}\n"
                + "\n".join(body)
                + "\nEND_FUNCTION_BLOCK\n"
            )
            docs.append(
                CodeDocument(
                    id=f"{family.lower()}-{i}", dialect="scl",
                    sources=[(f"fb_{i}.scl", text)],
                )
            )
    ids, seqs, labels = corpus_sequences(docs, CODE)
    assert set(labels) == set(families)
    assert all("family" not in tok for seq in seqs for tok in seq)

    run = run_classification(
        docs, CODE,
        d2v_params=Doc2VecParams(dim=16, epochs=40, min_count=1, seed=1,
                                 algorithm="pv-dbow"),
        split=SplitSpec(0.7, seed=5),
    )
    assert run.report.f1_weighted >= 0.8
