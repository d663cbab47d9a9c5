import pytest
from fastapi.testclient import TestClient

from aeskit.assistant import AssistantStore
from aeskit.service import create_app


@pytest.fixture()
def client(model_bundle):
    store = AssistantStore(models=model_bundle)
    return TestClient(create_app(store))


def _project_body(small_corpus):
    docs = []
    for i, doc in enumerate(small_corpus[:2]):
        rec = doc.to_record()
        rec["id"] = f"svc-doc-{i}"
        if i == 0:
            rec.pop("label", None)
        docs.append(rec)
    return {
        "documents": docs,
        "components": ["dht11", "servo"],
        "level": "L1",
    }


@pytest.fixture()
def project_id(client, small_corpus):
    resp = client.post("/projects", json=_project_body(small_corpus))
    assert resp.status_code == 200
    return resp.json()["project_id"]


def test_create_and_get_project(client, project_id):
    resp = client.get(f"/projects/{project_id}")
    assert resp.status_code == 200
    state = resp.json()
    assert state["project_id"] == project_id
    assert state["hardware"]["level"] == "L1"
    assert "Sensors" in state["hardware"]["categories"]
    assert len(state["documents"]) == 2


def test_unknown_project_404(client):
    resp = client.get("/projects/nope")
    assert resp.status_code == 404
    body = resp.json()
    assert body["error"] == "UnknownProject"
    assert "detail" in body


def test_recommendations_listing_and_status_filter(client, project_id):
    resp = client.get(f"/projects/{project_id}/recommendations?status=proposed")
    recs = resp.json()["recommendations"]
    assert len(recs) >= 2
    assert all(r["status"] == "proposed" for r in recs)
    kinds = {r["kind"] for r in recs}
    assert {"classification", "hardware"} <= kinds


def test_accept_hardware_via_http(client, project_id):
    recs = client.get(
        f"/projects/{project_id}/recommendations?status=proposed"
    ).json()["recommendations"]
    hw = next(r for r in recs if r["kind"] == "hardware")
    before = client.get(f"/projects/{project_id}").json()
    resp = client.post(
        f"/projects/{project_id}/recommendations/{hw['id']}",
        json={"decision": "accept"},
    )
    assert resp.status_code == 200
    after = resp.json()["project"]
    assert after["revision"] == before["revision"] + 1
    assert hw["payload"]["category"] in after["hardware"]["categories"]
    # deciding again conflicts
    resp = client.post(
        f"/projects/{project_id}/recommendations/{hw['id']}",
        json={"decision": "reject"},
    )
    assert resp.status_code == 409
    assert resp.json()["error"] == "AlreadyDecided"


def test_reject_removes_from_proposed(client, project_id):
    recs = client.get(
        f"/projects/{project_id}/recommendations?status=proposed"
    ).json()["recommendations"]
    target = recs[0]
    client.post(
        f"/projects/{project_id}/recommendations/{target['id']}",
        json={"decision": "reject"},
    )
    client.post(f"/projects/{project_id}/analyze")
    proposed = client.get(
        f"/projects/{project_id}/recommendations?status=proposed"
    ).json()["recommendations"]
    assert target["id"] not in [r["id"] for r in proposed]
    assert target["payload"] not in [
        r["payload"] for r in proposed if r["kind"] == target["kind"]
    ]


def test_invalid_decision_400(client, project_id):
    recs = client.get(f"/projects/{project_id}/recommendations").json()[
        "recommendations"
    ]
    resp = client.post(
        f"/projects/{project_id}/recommendations/{recs[0]['id']}",
        json={"decision": "maybe"},
    )
    assert resp.status_code == 400


def test_question_flow_via_http(client, project_id):
    questions = client.get(f"/projects/{project_id}/questions").json()["questions"]
    sil = next(
        q for q in questions if q["attribute_key"] == "safety_integrity_level"
    )
    assert "safety integrity level" in sil["text"]
    resp = client.post(
        f"/projects/{project_id}/questions/{sil['id']}", json={"value": "SIL-2"}
    )
    assert resp.status_code == 200
    assert resp.json()["project"]["attributes"]["safety_integrity_level"] == "SIL-2"
    again = client.post(
        f"/projects/{project_id}/questions/{sil['id']}", json={"value": "SIL-3"}
    )
    assert again.status_code == 409
    assert again.json()["error"] == "AlreadyAnswered"


def test_classify_endpoint(client, small_corpus):
    doc = small_corpus[0]
    resp = client.post("/classify", json={"document": doc.to_record()})
    assert resp.status_code == 200
    body = resp.json()
    assert body["label"] in {f"class{c:02d}" for c in range(4)}
    total = sum(body["probabilities"].values())
    assert abs(total - 1.0) < 1e-6
    # raw tokens also accepted
    resp = client.post("/classify", json={"tokens": ["kw00_1", "kw00_2"]})
    assert resp.status_code == 200


def test_classify_requires_input(client):
    resp = client.post("/classify", json={})
    assert resp.status_code == 400


def test_search_endpoint(client, small_corpus):
    doc = small_corpus[0]  # in-corpus text: its twin must surface
    resp = client.post("/search", json={"document": doc.to_record(), "k": 3})
    assert resp.status_code == 200
    neighbors = resp.json()["neighbors"]
    assert len(neighbors) == 3
    assert neighbors[0]["score"] >= neighbors[-1]["score"]


def test_hardware_complete_endpoint(client):
    resp = client.post(
        "/hardware/complete",
        json={"present": ["dht11", "frobnicator"], "level": "L1", "k": 3},
    )
    assert resp.status_code == 200
    body = resp.json()
    assert len(body["components"]) == 3
    assert body["unmapped"] == ["frobnicator"]
    names = [c["category"] for c in body["components"]]
    assert "Sensors" not in names  # present slots are never recommended


def test_knowledge_endpoint(client, project_id):
    resp = client.get("/knowledge", params={"p": "derived-from"})
    triples = resp.json()["triples"]
    assert len(triples) >= 2
    assert all(t[1] == "derived-from" for t in triples)


def test_models_missing_503(small_corpus):
    store = AssistantStore(models=None)
    client = TestClient(create_app(store))
    resp = client.post("/classify", json={"tokens": ["x"]})
    assert resp.status_code == 503
    assert resp.json()["error"] == "ModelsMissing"


def test_healthz(client):
    body = client.get("/healthz").json()
    assert body["status"] == "ok" and body["models_loaded"] is True
