"""End-to-end pipelines: corpus -> features -> embeddings -> classifier,
plus the trained-artifact bundle the CLI and the service both load.

A bundle directory holds a manifest (bundle.json) and the individual
model containers: embedding model, classifier, search index over the
training documents, and optionally the hardware models. All writes are
deterministic, so two runs with the same flags and seed produce
byte-identical directories.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .autoencoder import AutoencoderModel, ae_complete, load_autoencoder, save_autoencoder
from .bayesnet import BayesNet, load_bn, save_bn
from .corpus import CodeDocument, Corpus, SplitSpec, stratified_split
from .doc2vec import (
    Doc2VecModel,
    Doc2VecParams,
    infer_doc_vector,
    load_doc2vec,
    save_doc2vec,
    train_doc2vec,
)
from .errors import ModelsMissing
from .features import FeatureSetSpec, extract_features, select_features
from .hwrec import bn_recommender
from .logreg import LogRegModel, load_logreg, predict_proba, save_logreg, train_logreg
from .metrics import EvalReport, evaluate_f1
from .modelio import load_model, save_model
from .search import Neighbor, SearchIndex, build_index, query_knn
from .taxonomy import HardwareConfig, Taxonomy, builtin_taxonomy
from .tfidf import TfIdfModel, fit_tfidf, load_tfidf, save_tfidf, tfidf_transform, tfidf_transform_all
from .vectors import random_embedding_matrix

BUNDLE_MANIFEST = "bundle.json"
BUNDLE_VERSION = 1


def corpus_sequences(
    corpus: Corpus, spec: FeatureSetSpec
) -> tuple[list[str], list[list[str]], list[str | None]]:
    """(ids, token sequences, effective labels) for every document."""
    ids, seqs, labels = [], [], []
    for doc in corpus:
        bundle = extract_features(doc)
        ids.append(doc.id)
        seqs.append(select_features(bundle, spec))
        labels.append(bundle.label)
    return ids, seqs, labels


def empty_code_documents(corpus: Corpus) -> list[str]:
    """Ids of documents whose code channel is empty (retrieval pollution)."""
    flagged = []
    for doc in corpus:
        if not extract_features(doc).code:
            flagged.append(doc.id)
    return flagged


@dataclass
class ClassificationRun:
    embed_kind: str
    feature_spec: FeatureSetSpec
    d2v: Doc2VecModel | None
    tfidf_model: TfIdfModel | None
    classifier: LogRegModel
    report: EvalReport
    index: SearchIndex | None


def run_classification(
    corpus: Corpus,
    feature_spec: FeatureSetSpec,
    embed_kind: str = "doc2vec",
    d2v_params: Doc2VecParams | None = None,
    split: SplitSpec | None = None,
    l2: float = 1e-2,
    max_iter: int = 500,
    seed: int = 0,
) -> ClassificationRun:
    """Embed the whole corpus (unsupervised), split, fit, evaluate."""
    split = split or SplitSpec(train_fraction=0.7, seed=seed)
    ids, seqs, labels = corpus_sequences(corpus, feature_spec)
    if any(lbl is None for lbl in labels):
        missing = [i for i, lbl in zip(ids, labels) if lbl is None]
        raise ValueError(f"unlabeled documents: {missing[:5]} ...")
    row_of = {doc_id: i for i, doc_id in enumerate(ids)}

    d2v = None
    tfidf_model = None
    index = None
    if embed_kind == "doc2vec":
        d2v = train_doc2vec(seqs, d2v_params or Doc2VecParams(seed=seed), doc_ids=ids)
        X_all = d2v.doc_vectors.astype(np.float64)
        index = build_index(list(zip(ids, X_all)))
    elif embed_kind == "tfidf":
        tfidf_model = fit_tfidf(seqs)
        X_all = tfidf_transform_all(tfidf_model, seqs)
    elif embed_kind == "random":
        dim = (d2v_params or Doc2VecParams()).dim
        X_all = random_embedding_matrix(ids, dim, seed)
    else:
        raise ValueError(f"unknown embedding kind {embed_kind!r}")

    train_docs, test_docs = stratified_split(_with_labels(corpus, labels), split)
    tr = [row_of[d.id] for d in train_docs]
    te = [row_of[d.id] for d in test_docs]
    X_train, X_test = X_all[tr], X_all[te]
    y_train = [labels[i] for i in tr]
    y_test = [labels[i] for i in te]

    classifier = train_logreg(X_train, y_train, l2=l2, max_iter=max_iter, seed=seed)
    probs = predict_proba(classifier, X_test)
    pred = [classifier.class_names[i] for i in np.atleast_2d(probs).argmax(axis=1)]
    report = evaluate_f1(pred, y_test, classifier.class_names)
    return ClassificationRun(
        embed_kind=embed_kind,
        feature_spec=feature_spec,
        d2v=d2v,
        tfidf_model=tfidf_model,
        classifier=classifier,
        report=report,
        index=index,
    )


def _with_labels(corpus: Corpus, labels: list[str | None]) -> Corpus:
    """Corpus copy whose labels are the effective (FAMILY-derived) ones."""
    out = []
    for doc, label in zip(corpus, labels):
        if doc.label == label:
            out.append(doc)
        else:
            out.append(
                CodeDocument(
                    id=doc.id, dialect=doc.dialect, sources=doc.sources,
                    title=doc.title, tags=doc.tags, description=doc.description,
                    label=label, raw_components=doc.raw_components,
                )
            )
    return out


def hardware_configs_from_corpus(
    corpus: Corpus, tax: Taxonomy, min_bits: int = 1
) -> tuple[list[HardwareConfig], list[str]]:
    """Normalize every document's component list; returns (configs, unmapped)."""
    from .taxonomy import normalize_components

    configs = []
    unmapped_all: list[str] = []
    for doc in corpus:
        if not doc.raw_components:
            continue
        config, unmapped = normalize_components(doc.raw_components, tax)
        unmapped_all.extend(unmapped)
        if config.n_present >= min_bits:
            configs.append(config)
    return configs, unmapped_all


# -- search index persistence ----------------------------------------------


def save_index(index: SearchIndex, path: str | Path) -> None:
    save_model(
        path,
        model_kind="search_index",
        params={"ids": index.ids, "dim": index.dim},
        matrices={"vectors": index.vectors.astype(np.float64)},
    )


def load_index(path: str | Path) -> SearchIndex:
    params, matrices = load_model(path, expected_kind="search_index")
    return SearchIndex(
        ids=list(params["ids"]), vectors=matrices["vectors"], dim=int(params["dim"])
    )


# -- trained-artifact bundle -------------------------------------------------


@dataclass
class ModelBundle:
    """Everything the assistant needs to analyze a project."""

    dialect: str = "arduino"
    feature_spec: FeatureSetSpec = field(
        default_factory=lambda: FeatureSetSpec(("code", "comments"))
    )
    d2v: Doc2VecModel | None = None
    tfidf_model: TfIdfModel | None = None
    classifier: LogRegModel | None = None
    index: SearchIndex | None = None
    taxonomy: Taxonomy | None = None
    ae: AutoencoderModel | None = None
    bn: BayesNet | None = None
    infer_steps: int = 50
    infer_seed: int = 1

    def tokens_of(self, doc: CodeDocument) -> list[str]:
        return select_features(extract_features(doc), self.feature_spec)

    def embed_tokens(self, tokens: list[str]) -> np.ndarray:
        if self.d2v is not None:
            return infer_doc_vector(
                self.d2v, tokens, steps=self.infer_steps, seed=self.infer_seed
            ).astype(np.float64)
        if self.tfidf_model is not None:
            return np.asarray(
                tfidf_transform(self.tfidf_model, tokens).todense()
            ).ravel()
        raise ModelsMissing("no embedding model loaded")

    def classify_tokens(self, tokens: list[str]) -> tuple[str, dict[str, float]]:
        if self.classifier is None:
            raise ModelsMissing("no classifier loaded")
        vec = self.embed_tokens(tokens)
        probs = predict_proba(self.classifier, vec)
        label = self.classifier.class_names[int(np.argmax(probs))]
        return label, {
            c: float(p) for c, p in zip(self.classifier.class_names, probs)
        }

    def neighbors_for_tokens(self, tokens: list[str], k: int = 3) -> list[Neighbor]:
        if self.index is None:
            raise ModelsMissing("no search index loaded")
        vec = self.embed_tokens(tokens)
        if not np.any(vec):
            return []
        return query_knn(self.index, vec, k)

    def neighbors_for_id(self, doc_id: str, k: int = 3) -> list[Neighbor]:
        if self.index is None:
            raise ModelsMissing("no search index loaded")
        return query_knn(self.index, doc_id, k)

    def hw_scores(self, partial: HardwareConfig) -> dict[int, float]:
        if self.ae is not None and self.ae.level == partial.level:
            return ae_complete(self.ae, partial)
        if self.bn is not None and len(self.bn.variables) == len(partial.present):
            return bn_recommender(self.bn)(partial)
        raise ModelsMissing(f"no hardware model for level {partial.level}")

    @property
    def has_hw_model(self) -> bool:
        return self.ae is not None or self.bn is not None


def save_bundle(bundle: ModelBundle, out_dir: str | Path) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest: dict = {
        "format_version": BUNDLE_VERSION,
        "dialect": bundle.dialect,
        "feature_channels": list(bundle.feature_spec.channels),
        "infer_steps": bundle.infer_steps,
        "infer_seed": bundle.infer_seed,
        "files": {},
    }
    if bundle.d2v is not None:
        save_doc2vec(bundle.d2v, out / "embed_doc2vec.aeskit")
        manifest["files"]["doc2vec"] = "embed_doc2vec.aeskit"
    if bundle.tfidf_model is not None:
        save_tfidf(bundle.tfidf_model, out / "embed_tfidf.aeskit")
        manifest["files"]["tfidf"] = "embed_tfidf.aeskit"
    if bundle.classifier is not None:
        save_logreg(bundle.classifier, out / "classifier.aeskit")
        manifest["files"]["classifier"] = "classifier.aeskit"
    if bundle.index is not None:
        save_index(bundle.index, out / "index.aeskit")
        manifest["files"]["index"] = "index.aeskit"
    if bundle.ae is not None:
        save_autoencoder(bundle.ae, out / "hwrec_ae.aeskit")
        manifest["files"]["ae"] = "hwrec_ae.aeskit"
        manifest["taxonomy_level"] = bundle.ae.level
    if bundle.bn is not None:
        save_bn(bundle.bn, out / "hwrec_bn.json")
        manifest["files"]["bn"] = "hwrec_bn.json"
        manifest.setdefault("taxonomy_level", "L1")
    with open(out / BUNDLE_MANIFEST, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_bundle(bundle_dir: str | Path) -> ModelBundle:
    path = Path(bundle_dir)
    manifest_path = path / BUNDLE_MANIFEST
    if not manifest_path.exists():
        raise ModelsMissing(f"no {BUNDLE_MANIFEST} in {bundle_dir}")
    with open(manifest_path, encoding="utf-8") as fh:
        manifest = json.load(fh)
    if manifest.get("format_version") != BUNDLE_VERSION:
        raise ModelsMissing(
            f"bundle format_version {manifest.get('format_version')} unsupported"
        )
    files = manifest["files"]
    bundle = ModelBundle(
        dialect=manifest.get("dialect", "arduino"),
        feature_spec=FeatureSetSpec(tuple(manifest["feature_channels"])),
        infer_steps=int(manifest.get("infer_steps", 50)),
        infer_seed=int(manifest.get("infer_seed", 1)),
    )
    if "doc2vec" in files:
        bundle.d2v = load_doc2vec(path / files["doc2vec"])
    if "tfidf" in files:
        bundle.tfidf_model = load_tfidf(path / files["tfidf"])
    if "classifier" in files:
        bundle.classifier = load_logreg(path / files["classifier"])
    if "index" in files:
        bundle.index = load_index(path / files["index"])
    if "ae" in files:
        bundle.ae = load_autoencoder(path / files["ae"])
    if "bn" in files:
        bundle.bn = load_bn(path / files["bn"])
    level = manifest.get("taxonomy_level")
    if level:
        bundle.taxonomy = builtin_taxonomy(level)
    return bundle
