"""Command-line driver for the full pipelines.

Subcommands mirror the pipeline stages: ingest, featdump, train-embed,
train-classifier, eval-classifier, search, train-hwrec, eval-hwrec,
synth, serve. Every subcommand takes --seed and --out; --config points at
a JSON file whose entries fill in unset flags; AESKIT_MODEL_DIR provides
the default model directory. Each run logs its resolved configuration.
Usage errors exit 2, data errors exit 1.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from .corpus import SplitSpec, load_corpus, save_corpus, stratified_split
from .doc2vec import Doc2VecParams, save_doc2vec, train_doc2vec
from .errors import AeskitError
from .features import FeatureSetSpec, extract_features
from .pipeline import (
    ModelBundle,
    corpus_sequences,
    empty_code_documents,
    hardware_configs_from_corpus,
    load_bundle,
    run_classification,
    save_bundle,
)
from .synth import generate_synthetic_corpus
from .taxonomy import builtin_taxonomy, load_taxonomy

log = logging.getLogger("aeskit")

MODEL_DIR_ENV = "AESKIT_MODEL_DIR"


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="RNG seed")
    parser.add_argument("--out", type=str, default=None, help="output path")
    parser.add_argument("--config", type=str, default=None,
                        help="JSON file with defaults for unset flags")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aeskit",
        description="learning-based assistants for automation engineering code",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate a corpus and write it canonically")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--dialect", choices=["arduino", "scl"], default="arduino")
    _add_common(p)

    p = sub.add_parser("featdump", help="dump one document's feature bundle as JSON")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--dialect", choices=["arduino", "scl"], default="arduino")
    p.add_argument("--id", dest="doc_id", required=True)
    _add_common(p)

    p = sub.add_parser("train-embed", help="train an embedding model alone")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--dialect", choices=["arduino", "scl"], default="arduino")
    p.add_argument("--features", default="code,comments")
    p.add_argument("--embed", choices=["doc2vec", "tfidf"], default="doc2vec")
    p.add_argument("--dim", type=int, default=50)
    p.add_argument("--algorithm", choices=["pv-dm", "pv-dbow"], default="pv-dm")
    p.add_argument("--negative", type=int, default=5)
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--min-count", type=int, default=2)
    p.add_argument("--epochs", type=int, default=40)
    _add_common(p)

    p = sub.add_parser("train-classifier",
                       help="train embedding + classifier, write a bundle dir")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--dialect", choices=["arduino", "scl"], default="arduino")
    p.add_argument("--features", default="code,comments")
    p.add_argument("--embed", choices=["doc2vec", "tfidf", "random"], default="doc2vec")
    p.add_argument("--dim", type=int, default=50)
    p.add_argument("--algorithm", choices=["pv-dm", "pv-dbow"], default="pv-dm")
    p.add_argument("--negative", type=int, default=5)
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--min-count", type=int, default=2)
    p.add_argument("--epochs", type=int, default=40)
    p.add_argument("--split", type=float, default=0.7)
    p.add_argument("--l2", type=float, default=1e-2)
    _add_common(p)

    p = sub.add_parser("eval-classifier", help="evaluate a bundle on a labeled corpus")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--dialect", choices=["arduino", "scl"], default="arduino")
    p.add_argument("--bundle", default=None)
    _add_common(p)

    p = sub.add_parser("search", help="k nearest neighbors for a document")
    p.add_argument("--bundle", default=None)
    p.add_argument("--id", dest="doc_id", default=None,
                   help="query an indexed document by id")
    p.add_argument("--file", dest="source_file", default=None,
                   help="query an external source file")
    p.add_argument("--dialect", choices=["arduino", "scl"], default="arduino")
    p.add_argument("--k", type=int, default=3)
    _add_common(p)

    p = sub.add_parser("train-hwrec", help="train hardware completion models")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--dialect", choices=["arduino", "scl"], default="arduino")
    p.add_argument("--level", choices=["L1", "L2"], default="L1")
    p.add_argument("--taxonomy", default=None, help="taxonomy JSON (default: builtin)")
    p.add_argument("--model", choices=["ae", "bn", "both"], default="both")
    p.add_argument("--split", type=float, default=0.7)
    p.add_argument("--hidden", type=int, default=None)
    p.add_argument("--epochs", type=int, default=300)
    _add_common(p)

    p = sub.add_parser("eval-hwrec", help="leave-one-out precision@k")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--dialect", choices=["arduino", "scl"], default="arduino")
    p.add_argument("--level", choices=["L1", "L2"], default="L1")
    p.add_argument("--taxonomy", default=None)
    p.add_argument("--bundle", default=None)
    p.add_argument("--model", choices=["ae", "bn", "random"], default="ae")
    p.add_argument("--split", type=float, default=0.7)
    p.add_argument("--k", default="1,3,5,9", help="comma-separated k values")
    _add_common(p)

    p = sub.add_parser("synth", help="generate a synthetic labeled corpus")
    p.add_argument("--classes", type=int, default=12)
    p.add_argument("--docs-per-class", type=int, default=200)
    p.add_argument("--vocab-per-class", type=int, default=50)
    p.add_argument("--shared-vocab", type=int, default=200)
    p.add_argument("--doc-len", type=int, default=120)
    _add_common(p)

    p = sub.add_parser("serve", help="run the assistant HTTP service")
    p.add_argument("--models", default=None, help="bundle directory")
    p.add_argument("--state", default=None, help="journal directory")
    p.add_argument("--ui", default=None, help="static UI directory")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    _add_common(p)

    return parser


def _apply_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    """Fill flags still at their default from the --config JSON file."""
    if not args.config:
        return
    with open(args.config, encoding="utf-8") as fh:
        overrides = json.load(fh)
    defaults = {}
    for action in parser._subparsers._group_actions[0].choices[args.command]._actions:
        if action.dest not in ("help",):
            defaults[action.dest] = action.default
    for key, value in overrides.items():
        dest = key.replace("-", "_")
        if hasattr(args, dest) and getattr(args, dest) == defaults.get(dest):
            setattr(args, dest, value)


def _bundle_dir(args) -> str:
    candidate = getattr(args, "bundle", None) or getattr(args, "models", None)
    if candidate:
        return candidate
    env = os.environ.get(MODEL_DIR_ENV)
    if env:
        return env
    raise AeskitError(
        f"no bundle directory: pass --bundle/--models or set {MODEL_DIR_ENV}"
    )


def _d2v_params(args) -> Doc2VecParams:
    return Doc2VecParams(
        dim=args.dim, algorithm=args.algorithm, negative=args.negative,
        window=args.window, min_count=args.min_count, epochs=args.epochs,
        seed=args.seed,
    )


def _taxonomy(args):
    return load_taxonomy(args.taxonomy) if args.taxonomy else builtin_taxonomy(args.level)


def _write(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# -- subcommand implementations ---------------------------------------------


def _cmd_ingest(args) -> int:
    docs = load_corpus(args.input, args.dialect)
    flagged = empty_code_documents(docs)
    for doc_id in flagged:
        log.warning("document %s has an empty code channel", doc_id)
    labels = sorted({d.label for d in docs if d.label is not None})
    if args.out:
        save_corpus(docs, args.out)
    print(json.dumps({
        "documents": len(docs),
        "labels": len(labels),
        "empty_code": flagged,
        "out": args.out,
    }, indent=2))
    return 0


def _cmd_featdump(args) -> int:
    docs = load_corpus(args.input, args.dialect)
    for doc in docs:
        if doc.id == args.doc_id:
            bundle = extract_features(doc)
            payload = {
                "id": doc.id, "dialect": bundle.dialect, "label": bundle.label,
                "loc": bundle.loc, "includes": bundle.includes,
                "functions": bundle.functions, "comments": bundle.comments,
                "tokens": bundle.tokens, "code": bundle.code,
                "tags": bundle.tags, "title": bundle.title_tokens,
                "description": bundle.description_tokens,
            }
            _write(args.out, json.dumps(payload, indent=2) + "\n")
            return 0
    raise AeskitError(f"no document with id {args.doc_id!r}")


def _cmd_train_embed(args) -> int:
    docs = load_corpus(args.input, args.dialect)
    spec = FeatureSetSpec.parse(args.features)
    ids, seqs, _ = corpus_sequences(docs, spec)
    out = args.out or "embed.aeskit"
    if args.embed == "doc2vec":
        model = train_doc2vec(seqs, _d2v_params(args), doc_ids=ids)
        save_doc2vec(model, out)
        log.info("final epoch loss %.4f", model.epoch_losses[-1])
    else:
        from .tfidf import fit_tfidf, save_tfidf

        save_tfidf(fit_tfidf(seqs), out)
    print(json.dumps({"model": out, "documents": len(ids)}))
    return 0


def _cmd_train_classifier(args) -> int:
    docs = load_corpus(args.input, args.dialect)
    spec = FeatureSetSpec.parse(args.features)
    run = run_classification(
        docs, spec, embed_kind=args.embed, d2v_params=_d2v_params(args),
        split=SplitSpec(args.split, args.seed), l2=args.l2, seed=args.seed,
    )
    out = Path(args.out or "bundle")
    bundle = ModelBundle(
        dialect=args.dialect, feature_spec=spec, d2v=run.d2v,
        tfidf_model=run.tfidf_model, classifier=run.classifier, index=run.index,
    )
    save_bundle(bundle, out)
    run.report.save_json(out / "report.json")
    (out / "confusion.csv").write_text(run.report.confusion_csv(), encoding="utf-8")
    print(json.dumps({
        "bundle": str(out),
        "f1_weighted": run.report.f1_weighted,
        "f1_macro": run.report.f1_macro,
        "f1_micro": run.report.f1_micro,
    }, indent=2))
    return 0


def _cmd_eval_classifier(args) -> int:
    from .logreg import predict_proba
    from .metrics import evaluate_f1

    bundle = load_bundle(_bundle_dir(args))
    docs = load_corpus(args.input, args.dialect)
    ids, seqs, labels = corpus_sequences(docs, bundle.feature_spec)
    if any(lbl is None for lbl in labels):
        raise AeskitError("corpus must be fully labeled for evaluation")
    pred = []
    for tokens in seqs:
        label, _ = bundle.classify_tokens(tokens)
        pred.append(label)
    class_names = sorted(set(labels) | set(bundle.classifier.class_names))
    report = evaluate_f1(pred, labels, class_names)
    text = json.dumps(report.to_json(), sort_keys=True, indent=2) + "\n"
    _write(args.out, text)
    return 0


def _cmd_search(args) -> int:
    bundle = load_bundle(_bundle_dir(args))
    if (args.doc_id is None) == (args.source_file is None):
        raise AeskitError("pass exactly one of --id or --file")
    if args.doc_id is not None:
        neighbors = bundle.neighbors_for_id(args.doc_id, args.k)
    else:
        from .corpus import CodeDocument

        text = Path(args.source_file).read_text(encoding="utf-8")
        doc = CodeDocument(
            id="query", dialect=args.dialect,
            sources=[(Path(args.source_file).name, text)],
        )
        neighbors = bundle.neighbors_for_tokens(bundle.tokens_of(doc), args.k)
    _write(
        args.out,
        json.dumps([{"id": n.id, "score": n.score} for n in neighbors], indent=2)
        + "\n",
    )
    return 0


def _cmd_train_hwrec(args) -> int:
    from .autoencoder import train_autoencoder
    from .bayesnet import fit_bn_cpts, learn_bn_structure

    docs = load_corpus(args.input, args.dialect)
    tax = _taxonomy(args)
    configs, unmapped = hardware_configs_from_corpus(docs, tax, min_bits=1)
    if unmapped:
        log.warning("%d unmapped component names (first: %s)",
                    len(unmapped), unmapped[:5])
    rng = np.random.default_rng(args.seed)
    order = rng.permutation(len(configs))
    n_train = max(1, int(round(len(configs) * args.split)))
    train = [configs[i] for i in order[:n_train]]

    out = Path(args.out or "hwrec")
    out.mkdir(parents=True, exist_ok=True)
    bundle = ModelBundle(dialect=args.dialect)
    if args.model in ("ae", "both"):
        bundle.ae = train_autoencoder(
            train, d_hidden=args.hidden, epochs=args.epochs, seed=args.seed
        )
    if args.model in ("bn", "both"):
        parents = learn_bn_structure(train)
        bundle.bn = fit_bn_cpts(parents, train, variables=tax.categories)
    save_bundle(bundle, out)
    print(json.dumps({
        "bundle": str(out), "train_configs": len(train),
        "total_configs": len(configs), "unmapped_names": len(set(unmapped)),
    }, indent=2))
    return 0


def _cmd_eval_hwrec(args) -> int:
    from .hwrec import ae_recommender, bn_recommender, evaluate_p_at_k, random_recommender

    docs = load_corpus(args.input, args.dialect)
    tax = _taxonomy(args)
    configs, _ = hardware_configs_from_corpus(docs, tax, min_bits=2)
    rng = np.random.default_rng(args.seed)
    order = rng.permutation(len(configs))
    n_train = max(1, int(round(len(configs) * args.split)))
    test = [configs[i] for i in order[n_train:]]
    if not test:
        raise AeskitError("no test configurations with >= 2 components")

    if args.model == "random":
        rec = random_recommender(args.seed)
    else:
        bundle = load_bundle(_bundle_dir(args))
        if args.model == "ae":
            if bundle.ae is None:
                raise AeskitError("bundle has no autoencoder")
            rec = ae_recommender(bundle.ae)
        else:
            if bundle.bn is None:
                raise AeskitError("bundle has no Bayesian network")
            rec = bn_recommender(bundle.bn)
    k_values = [int(k) for k in str(args.k).split(",") if k]
    report = evaluate_p_at_k(rec, test, k_values)
    _write(args.out, report.to_csv())
    return 0


def _cmd_synth(args) -> int:
    docs = generate_synthetic_corpus(
        args.classes, args.docs_per_class, args.vocab_per_class,
        args.shared_vocab, args.doc_len, args.seed,
    )
    out = args.out or "synth.jsonl"
    save_corpus(docs, out)
    print(json.dumps({"out": out, "documents": len(docs), "labels": args.classes}))
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .assistant import AssistantStore
    from .service import create_app

    models = None
    candidate = getattr(args, "models", None) or os.environ.get(MODEL_DIR_ENV)
    if candidate:
        models = load_bundle(candidate)
        log.info("loaded models from %s", candidate)
    store = AssistantStore(models=models, state_dir=args.state)
    app = create_app(store, ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


_COMMANDS = {
    "ingest": _cmd_ingest,
    "featdump": _cmd_featdump,
    "train-embed": _cmd_train_embed,
    "train-classifier": _cmd_train_classifier,
    "eval-classifier": _cmd_eval_classifier,
    "search": _cmd_search,
    "train-hwrec": _cmd_train_hwrec,
    "eval-hwrec": _cmd_eval_hwrec,
    "synth": _cmd_synth,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=logging.INFO, format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    parser = _build_parser()
    args = parser.parse_args(argv)
    _apply_config(args, parser)
    resolved = {k: v for k, v in vars(args).items() if k != "command"}
    log.info("command=%s config=%s", args.command,
             json.dumps(resolved, sort_keys=True, default=str))
    try:
        return _COMMANDS[args.command](args)
    except AeskitError as exc:
        log.error("%s", exc)
        return 1
    except OSError as exc:
        log.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
