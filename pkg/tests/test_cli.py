import json
import subprocess
import sys
from pathlib import Path

import pytest

from aeskit.cli import main

SYNTH_ARGS = [
    "synth", "--classes", "3", "--docs-per-class", "12",
    "--vocab-per-class", "8", "--shared-vocab", "20",
    "--doc-len", "40", "--seed", "5",
]


@pytest.fixture(scope="module")
def corpus_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "corpus.jsonl"
    assert main(SYNTH_ARGS + ["--out", str(path)]) == 0
    return path


def test_synth_then_ingest(tmp_path, corpus_path, capsys):
    out = tmp_path / "canonical.jsonl"
    assert main(["ingest", "--in", str(corpus_path), "--out", str(out)]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["documents"] == 36
    assert out.exists()


def test_featdump(corpus_path, tmp_path):
    out = tmp_path / "features.json"
    rc = main([
        "featdump", "--in", str(corpus_path), "--id", "synth-00-0000",
        "--out", str(out),
    ])
    assert rc == 0
    bundle = json.loads(out.read_text())
    assert bundle["id"] == "synth-00-0000"
    assert bundle["loc"] > 0 and len(bundle["code"]) > 0


def test_featdump_unknown_id_exits_1(corpus_path):
    assert main(["featdump", "--in", str(corpus_path), "--id", "missing"]) == 1


def test_missing_file_exits_1(tmp_path):
    assert main(["ingest", "--in", str(tmp_path / "none.jsonl")]) == 1


def test_unknown_flag_exits_2(corpus_path):
    with pytest.raises(SystemExit) as err:
        main(["ingest", "--in", str(corpus_path), "--frobnicate"])
    assert err.value.code == 2


def test_unknown_subcommand_exits_2():
    with pytest.raises(SystemExit) as err:
        main(["made-up-command"])
    assert err.value.code == 2


@pytest.fixture(scope="module")
def trained_bundle(tmp_path_factory, corpus_path):
    out = tmp_path_factory.mktemp("cli-bundle") / "bundle"
    rc = main([
        "train-classifier", "--in", str(corpus_path),
        "--features", "code", "--embed", "doc2vec",
        "--dim", "16", "--algorithm", "pv-dbow", "--epochs", "15",
        "--seed", "3", "--out", str(out),
    ])
    assert rc == 0
    return out


def test_train_classifier_artifacts(trained_bundle):
    assert (trained_bundle / "bundle.json").exists()
    assert (trained_bundle / "embed_doc2vec.aeskit").exists()
    assert (trained_bundle / "classifier.aeskit").exists()
    assert (trained_bundle / "index.aeskit").exists()
    report = json.loads((trained_bundle / "report.json").read_text())
    assert 0.0 <= report["f1_weighted"] <= 1.0
    confusion = (trained_bundle / "confusion.csv").read_text()
    assert confusion.startswith("gold\\pred,")


def test_eval_classifier(trained_bundle, corpus_path, tmp_path):
    out = tmp_path / "eval.json"
    rc = main([
        "eval-classifier", "--in", str(corpus_path),
        "--bundle", str(trained_bundle), "--out", str(out),
    ])
    assert rc == 0
    report = json.loads(out.read_text())
    assert report["f1_weighted"] > 0.8  # evaluated on its own training corpus


def test_search_by_id(trained_bundle, tmp_path):
    out = tmp_path / "neighbors.json"
    rc = main([
        "search", "--bundle", str(trained_bundle), "--id", "synth-00-0000",
        "--k", "3", "--out", str(out),
    ])
    assert rc == 0
    neighbors = json.loads(out.read_text())
    assert len(neighbors) == 3
    assert "synth-00-0000" not in [n["id"] for n in neighbors]
    scores = [n["score"] for n in neighbors]
    assert scores == sorted(scores, reverse=True)


def test_search_requires_exactly_one_query(trained_bundle):
    assert main(["search", "--bundle", str(trained_bundle)]) == 1


def test_model_dir_env_used(trained_bundle, tmp_path, monkeypatch):
    monkeypatch.setenv("AESKIT_MODEL_DIR", str(trained_bundle))
    out = tmp_path / "n.json"
    rc = main(["search", "--id", "synth-00-0000", "--k", "1", "--out", str(out)])
    assert rc == 0


def test_config_file_fills_defaults(corpus_path, tmp_path, capsys):
    config = tmp_path / "conf.json"
    config.write_text(json.dumps({"classes": 2, "docs-per-class": 4}))
    out = tmp_path / "small.jsonl"
    rc = main(["synth", "--config", str(config), "--out", str(out),
               "--doc-len", "20"])
    assert rc == 0
    info = json.loads(capsys.readouterr().out)
    assert info["documents"] == 8  # 2 classes x 4 docs from the config file


@pytest.fixture(scope="module")
def hw_corpus(tmp_path_factory):
    """Corpus whose components are sampled from the demo generator."""
    import numpy as np

    from aeskit.corpus import CodeDocument, save_corpus
    from aeskit.synth import demo_l1_generator, generate_synthetic_hwconfigs
    from aeskit.taxonomy import builtin_taxonomy

    tax = builtin_taxonomy("L1")
    name_of = {
        "Actuators": "servo", "Arduino": "arduino uno", "Communications": "esp8266",
        "Electronics": "resistor", "Human Machine Interface": "led",
        "Materials": "breadboard", "Memory": "sd card", "Power": "battery",
        "Sensors": "dht11",
    }
    configs = generate_synthetic_hwconfigs(demo_l1_generator(), 500, seed=23)
    docs = []
    for i, config in enumerate(configs):
        components = [name_of[c] for c in config.present_categories(tax)]
        docs.append(CodeDocument(
            id=f"hw-{i}", dialect="arduino",
            sources=[("a.ino", "void loop() { read(); }")],
            raw_components=components,
        ))
    path = tmp_path_factory.mktemp("hw") / "hw.jsonl"
    save_corpus(docs, path)
    return path


def test_train_and_eval_hwrec(hw_corpus, tmp_path):
    bundle = tmp_path / "hw-bundle"
    rc = main([
        "train-hwrec", "--in", str(hw_corpus), "--level", "L1",
        "--model", "both", "--epochs", "120", "--seed", "2",
        "--out", str(bundle),
    ])
    assert rc == 0
    assert (bundle / "hwrec_ae.aeskit").exists()
    assert (bundle / "hwrec_bn.json").exists()

    out = tmp_path / "patk.csv"
    rc = main([
        "eval-hwrec", "--in", str(hw_corpus), "--level", "L1",
        "--bundle", str(bundle), "--model", "ae",
        "--k", "1,3,5,9", "--seed", "2", "--out", str(out),
    ])
    assert rc == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "k,p_at_k,n_trials"
    rows = [line.split(",") for line in lines[1:]]
    assert [r[0] for r in rows] == ["1", "3", "5", "9"]
    assert float(rows[-1][1]) == 1.0  # p@9 saturates


def test_every_subcommand_supports_seed_and_out():
    from aeskit.cli import _build_parser

    parser = _build_parser()
    subparsers = parser._subparsers._group_actions[0].choices
    assert set(subparsers) == {
        "ingest", "featdump", "train-embed", "train-classifier",
        "eval-classifier", "search", "train-hwrec", "eval-hwrec",
        "synth", "serve",
    }
    for name, sub in subparsers.items():
        flags = {opt for action in sub._actions for opt in action.option_strings}
        assert "--seed" in flags, name
        assert "--out" in flags, name
        assert "--config" in flags, name


def test_cli_entrypoint_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "aeskit.cli", "--help"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "train-classifier" in proc.stdout
