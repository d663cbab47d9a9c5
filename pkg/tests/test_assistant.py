import numpy as np
import pytest

from aeskit.assistant import (
    REQUIRED_ATTRIBUTES,
    AssistantStore,
    compute_proposals,
)
from aeskit.errors import (
    AlreadyAnswered,
    AlreadyDecided,
    ModelsMissing,
    UnknownProject,
    UnknownQuestion,
    UnknownRecommendation,
)


def _records(small_corpus, n=2, unlabel_first=True):
    recs = []
    for i, doc in enumerate(small_corpus[:n]):
        rec = doc.to_record()
        if unlabel_first and i == 0:
            rec.pop("label", None)
        rec["id"] = f"proj-doc-{i}"
        recs.append(rec)
    return recs


@pytest.fixture()
def store(model_bundle):
    return AssistantStore(models=model_bundle)


@pytest.fixture()
def project(store, small_corpus):
    return store.create_project(
        _records(small_corpus),
        components=["dht11", "servo"],  # Sensors + Actuators bits
        level="L1",
    )


def test_create_emits_recommendations_and_question(store, project):
    recs = store.recommendations[project.project_id]
    kinds = {r.kind for r in recs.values()}
    assert "classification" in kinds
    assert "hardware" in kinds
    assert len(recs) >= 2
    questions = store.questions[project.project_id]
    assert any(
        q.attribute_key == "safety_integrity_level" and q.status == "pending"
        for q in questions.values()
    )


def test_reanalyze_unchanged_revision_adds_nothing(store, project):
    before = len(store.recommendations[project.project_id])
    new_recs, new_questions = store.analyze(project.project_id)
    assert new_recs == [] and new_questions == []
    assert len(store.recommendations[project.project_id]) == before


def test_compute_proposals_deterministic(store, project, model_bundle):
    a = compute_proposals(project, model_bundle)
    b = compute_proposals(project, model_bundle)
    assert a == b


def test_accept_hardware_sets_bit_and_bumps_revision(store, project):
    pid = project.project_id
    rec = next(
        r for r in store.recommendations[pid].values() if r.kind == "hardware"
    )
    tax_index = project.hardware.present.copy()
    rev = project.revision
    state = store.decide(pid, rec.id, "accept")
    assert state.revision == rev + 1
    assert state.hardware.present[rec.payload["slot"]] == 1
    assert state.hardware.present.sum() == tax_index.sum() + 1
    assert store.recommendations[pid][rec.id].status == "accepted"


def test_accept_triggers_reanalysis_with_new_candidates(store, project):
    pid = project.project_id
    rec = next(
        r for r in store.recommendations[pid].values()
        if r.kind == "hardware" and r.payload["rank"] == 1
    )
    categories_before = {
        r.payload["category"]
        for r in store.recommendations[pid].values()
        if r.kind == "hardware"
    }
    store.decide(pid, rec.id, "accept")
    categories_after = {
        r.payload["category"]
        for r in store.recommendations[pid].values()
        if r.kind == "hardware"
    }
    # the accepted slot is now present, so re-analysis surfaced a new candidate
    assert categories_after > categories_before


def test_accept_classification_sets_label(store, project):
    pid = project.project_id
    rec = next(
        r for r in store.recommendations[pid].values() if r.kind == "classification"
    )
    state = store.decide(pid, rec.id, "accept")
    doc = next(d for d in state.documents if d.id == rec.payload["document_id"])
    assert doc.label == rec.payload["label"]


def test_reject_is_permanent_across_reanalyses(store, project):
    pid = project.project_id
    rec = next(
        r for r in store.recommendations[pid].values() if r.kind == "hardware"
    )
    store.decide(pid, rec.id, "reject")
    assert store.recommendations[pid][rec.id].status == "rejected"
    # unchanged project: same payload must not come back
    store.analyze(pid)
    same_key = [
        r for r in store.recommendations[pid].values()
        if r.payload_key == rec.payload_key
    ]
    assert same_key == [rec]
    # even after a mutation (new revision) the rejected category stays gone
    other = next(
        r for r in store.recommendations[pid].values()
        if r.kind == "hardware" and r.status == "proposed"
    )
    store.decide(pid, other.id, "accept")
    again = [
        r for r in store.recommendations[pid].values()
        if r.payload_key == rec.payload_key
    ]
    assert again == [rec]


def test_decide_twice_rejected(store, project):
    pid = project.project_id
    rec = next(iter(store.recommendations[pid].values()))
    store.decide(pid, rec.id, "reject")
    with pytest.raises(AlreadyDecided):
        store.decide(pid, rec.id, "accept")


def test_unknown_ids(store, project):
    with pytest.raises(UnknownRecommendation):
        store.decide(project.project_id, "rec-999999", "accept")
    with pytest.raises(UnknownQuestion):
        store.answer(project.project_id, "q-999999", "2")
    with pytest.raises(UnknownProject):
        store.analyze("no-such-project")


def test_answer_question_flow(store, project):
    pid = project.project_id
    q = next(
        q for q in store.questions[pid].values()
        if q.attribute_key == "safety_integrity_level"
    )
    rev = store._state(pid).revision
    state = store.answer(pid, q.id, "SIL-2")
    assert state.attributes["safety_integrity_level"] == "SIL-2"
    assert store.questions[pid][q.id].status == "answered"
    assert state.revision == rev + 1
    with pytest.raises(AlreadyAnswered):
        store.answer(pid, q.id, "SIL-3")
    # answered attribute never re-asked
    store.analyze(pid)
    pending = [
        x for x in store.questions[pid].values()
        if x.attribute_key == "safety_integrity_level" and x.status == "pending"
    ]
    assert pending == []


def test_at_most_one_pending_question_per_attribute(store, project):
    pid = project.project_id
    store.analyze(pid)
    store.analyze(pid)
    pending = [
        q for q in store.questions[pid].values() if q.status == "pending"
    ]
    assert len(pending) == len({q.attribute_key for q in pending})
    assert len(pending) == len(REQUIRED_ATTRIBUTES)


def test_provenance_triples_written(store, project):
    pid = project.project_id
    derived = store.knowledge_query(None, "derived-from", None)
    recs = store.recommendations[pid]
    assert len(derived) >= len(recs)
    for rec in recs.values():
        assert store.knowledge_query(f"rec:{rec.id}", "derived-from", None)


def test_revision_strictly_increases_only_on_mutation(store, project):
    pid = project.project_id
    rev = store._state(pid).revision
    store.analyze(pid)
    assert store._state(pid).revision == rev  # analysis alone never mutates
    rec = next(
        r for r in store.recommendations[pid].values() if r.status == "proposed"
    )
    store.decide(pid, rec.id, "reject")
    assert store._state(pid).revision == rev  # rejection is not a mutation


def test_models_missing():
    store = AssistantStore(models=None)
    state = store.create_project(
        [{"id": "d", "sources": [{"name": "a.ino", "text": "void loop(){}"}]}],
        analyze=False,
    )
    with pytest.raises(ModelsMissing):
        store.analyze(state.project_id)


def test_journal_replay_reconstructs_state(tmp_path, model_bundle, small_corpus):
    state_dir = tmp_path / "state"
    store = AssistantStore(models=model_bundle, state_dir=state_dir)
    state = store.create_project(
        _records(small_corpus), components=["dht11", "servo"], level="L1"
    )
    pid = state.project_id
    rec = next(
        r for r in store.recommendations[pid].values() if r.kind == "hardware"
    )
    store.decide(pid, rec.id, "accept")
    q = next(iter(store.questions[pid].values()))
    store.answer(pid, q.id, "SIL-1")

    rebuilt = AssistantStore(models=None, state_dir=state_dir)
    assert rebuilt._state(pid).to_json() == store._state(pid).to_json()
    assert {
        r.id: r.status for r in rebuilt.recommendations[pid].values()
    } == {r.id: r.status for r in store.recommendations[pid].values()}
    assert rebuilt.questions[pid][q.id].status == "answered"
    assert rebuilt.triples.triples == store.triples.triples


def test_concurrent_decisions_serialize_per_project(store, project):
    import threading

    pid = project.project_id
    proposed = [
        r.id for r in store.recommendations[pid].values() if r.status == "proposed"
    ]
    rev_before = store._state(pid).revision
    outcomes = []

    def worker(rec_id):
        try:
            store.decide(pid, rec_id, "accept")
            outcomes.append("accepted")
        except Exception as exc:  # decided-twice style races must not corrupt
            outcomes.append(type(exc).__name__)

    threads = [threading.Thread(target=worker, args=(r,)) for r in proposed]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    accepted = outcomes.count("accepted")
    assert accepted == len(proposed)
    # one revision bump per accepted mutation, none lost or doubled
    assert store._state(pid).revision == rev_before + accepted
