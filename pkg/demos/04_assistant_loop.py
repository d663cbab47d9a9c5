#!/usr/bin/env python3
"""Walkthrough: the assistant loop, in process.

Trains a small bundle, opens a project with an unlabeled sketch and a
partial hardware list, and plays the engineer: inspect recommendations,
accept one, reject one, answer the pending question, and watch the
revision counter and knowledge graph evolve. The same flows are exposed
over HTTP by `aeskit serve` and drive the browser panel in frontend/.
"""

import numpy as np

from aeskit import (
    Doc2VecParams,
    FeatureSetSpec,
    build_index,
    demo_l1_generator,
    extract_features,
    fit_bn_cpts,
    generate_synthetic_corpus,
    generate_synthetic_hwconfigs,
    learn_bn_structure,
    select_features,
    train_autoencoder,
    train_doc2vec,
    train_logreg,
)
from aeskit.assistant import AssistantStore
from aeskit.pipeline import ModelBundle
from aeskit.taxonomy import builtin_taxonomy

print("== 1. train a model bundle ==")
corpus = generate_synthetic_corpus(4, 30, 20, 60, 80, seed=7)
spec = FeatureSetSpec(("code",))
ids = [d.id for d in corpus]
seqs = [select_features(extract_features(d), spec) for d in corpus]
d2v = train_doc2vec(
    seqs, Doc2VecParams(dim=50, algorithm="pv-dbow", epochs=60, seed=3),
    doc_ids=ids,
)
X = d2v.doc_vectors.astype(np.float64)
gen = demo_l1_generator()
hw = generate_synthetic_hwconfigs(gen, 800, seed=19)
bundle = ModelBundle(
    feature_spec=spec,
    d2v=d2v,
    classifier=train_logreg(X, [d.label for d in corpus]),
    index=build_index(list(zip(ids, X))),
    taxonomy=builtin_taxonomy("L1"),
    ae=train_autoencoder(hw, epochs=150, seed=2),
    bn=fit_bn_cpts(learn_bn_structure(hw), hw, variables=gen.variables),
)
print("bundle ready")

print("\n== 2. open a project ==")
store = AssistantStore(models=bundle)
records = []
for i, doc in enumerate(corpus[:2]):
    rec = doc.to_record()
    rec["id"] = f"my-doc-{i}"
    if i == 0:
        rec.pop("label")  # the assistant should classify this one
    records.append(rec)
state = store.create_project(records, components=["dht11", "servo"], level="L1")
pid = state.project_id
print(f"project {pid} at revision {state.revision}")
print("hardware so far:", state.hardware.present_categories(builtin_taxonomy('L1')))

print("\n== 3. what does the assistant propose? ==")
for rec in store.recommendations[pid].values():
    print(f"  [{rec.kind}] {rec.payload}")
for q in store.questions[pid].values():
    print(f"  [question] {q.text}")

print("\n== 4. accept the top hardware suggestion ==")
top_hw = next(
    r for r in store.recommendations[pid].values()
    if r.kind == "hardware" and r.payload["rank"] == 1
)
state = store.decide(pid, top_hw.id, "accept")
print(f"accepted {top_hw.payload['category']}; revision -> {state.revision}")
print("hardware now:", state.hardware.present_categories(builtin_taxonomy('L1')))

print("\n== 5. reject a suggestion: it never comes back ==")
victim = next(
    r for r in store.recommendations[pid].values()
    if r.kind == "hardware" and r.status == "proposed"
)
store.decide(pid, victim.id, "reject")
store.analyze(pid)
still_gone = all(
    r.payload_key != victim.payload_key or r.id == victim.id
    for r in store.recommendations[pid].values()
)
print(f"rejected {victim.payload['category']}; re-proposed: {not still_gone}")

print("\n== 6. answer the open question ==")
question = next(q for q in store.questions[pid].values() if q.status == "pending")
state = store.answer(pid, question.id, "SIL-2")
print(f"answered {question.attribute_key!r}; revision -> {state.revision}")

print("\n== 7. provenance in the knowledge graph ==")
for s, p, o in store.knowledge_query(None, "derived-from", None)[:6]:
    print(f"  ({s}) -[{p}]-> ({o})")
print(f"{len(store.triples)} triples total")
