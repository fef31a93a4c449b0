"""HTTP API surface: routes, error codes, streaming, startup guards."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor

import pytest
from fastapi.testclient import TestClient

from novobo.errors import MissingCredential, ParseError
from novobo.service.app import AddressInUse, EngineState, bind_port, create_app
from novobo.service.config import EngineConfig
from novobo.service.demo import synthetic_recording
from novobo.session import recording_to_document

from .conftest import CANONICAL_CATALOG_PATH, CANONICAL_KB_PATH


@pytest.fixture
def config(tmp_path) -> EngineConfig:
    return EngineConfig(
        kb_path=CANONICAL_KB_PATH,
        catalog_path=CANONICAL_CATALOG_PATH,
        data_dir=tmp_path / "data",
        stub_mode=True,
        stub_seed=0,
    )


@pytest.fixture
def client(config) -> TestClient:
    with TestClient(create_app(config)) as test_client:
        yield test_client


def _post_scenario(client, session_id: str, catalog_id: str = "lang-leaves"):
    return client.post(f"/sessions/{session_id}/scenario", json={"catalog_id": catalog_id})


def _complete_ratings(client, session_id: str, proposals: list[dict]):
    ratings = [
        {"proposal_ordinal": p["ordinal"], "stars": 4, "comment": f"note {p['ordinal']}"}
        for p in proposals
    ]
    return client.post(f"/sessions/{session_id}/ratings", json={"ratings": ratings})


def test_healthz_reports_counts_and_mode(client):
    body = client.get("/healthz").json()
    assert body["status"] == "ok"
    assert body["mode"] == "stub"
    assert body["gesture_types"] == 4
    assert body["intentions"] == 5
    assert body["exemplars"] == 12
    assert body["scenarios"] >= 1


def test_scenario_catalog_listing(client):
    scenarios = client.get("/scenarios").json()["scenarios"]
    assert scenarios
    ids = [s["id"] for s in scenarios]
    assert len(ids) == len(set(ids))
    assert all(s["scenario_text"] for s in scenarios)


def test_knowledge_lookup_deictic(client):
    response = client.get("/knowledge/gesture_types/deictic")
    assert response.status_code == 200
    body = response.json()
    assert "point out" in body["definition"]
    assert body["citations"]
    assert all(c["key"] and c["display"] for c in body["citations"])


def test_knowledge_lookup_intention_origin(client):
    body = client.get("/knowledge/intentions/role_modeling").json()
    assert body["origin"] == "practitioner_added"


def test_knowledge_lookup_unknown_key(client):
    response = client.get("/knowledge/gesture_types/beat")
    assert response.status_code == 404
    assert response.json()["code"] == "NotFound"


def test_create_session_returns_201(client):
    response = client.post("/sessions", json={"group_label": "G3"})
    assert response.status_code == 201
    body = response.json()
    assert body["id"]
    assert body["stage"] == "PosingQuestion"
    assert body["group_label"] == "G3"


def test_get_unknown_session_is_404(client):
    response = client.get("/sessions/nope")
    assert response.status_code == 404
    assert response.json()["code"] == "NotFound"


def test_full_round_over_the_wire(client):
    session_id = client.post("/sessions", json={}).json()["id"]

    posed = _post_scenario(client, session_id)
    assert posed.status_code == 200
    body = posed.json()
    assert body["stage"] == "Commentary"
    assert 1 <= len(body["proposals"]) <= 4
    assert body["no_gesture_needed"] is False
    assert body["mentee_message"]["text"]

    rated = _complete_ratings(client, session_id, body["proposals"])
    assert rated.status_code == 200
    assert rated.json()["stage"] == "Demonstration"

    recording = recording_to_document(synthetic_recording(seed=2))
    demonstrated = client.post(
        f"/sessions/{session_id}/demonstration", json={"recording": recording}
    )
    assert demonstrated.status_code == 200
    assert demonstrated.json()["stage"] == "Explanation"

    explained = client.post(
        f"/sessions/{session_id}/explanation", json={"text": "slowness carries the image"}
    )
    assert explained.status_code == 200
    final = explained.json()
    assert final["stage"] == "PosingQuestion"
    assert final["summary"]

    document = client.get(f"/sessions/{session_id}").json()
    assert document["stage"] == "PosingQuestion"
    assert len(document["rounds"]) == 1
    assert document["rounds"][0]["summary"] == final["summary"]


def test_incomplete_ratings_is_422_with_code(client):
    session_id = client.post("/sessions", json={}).json()["id"]
    _post_scenario(client, session_id)
    response = client.post(f"/sessions/{session_id}/ratings", json={"ratings": []})
    assert response.status_code == 422
    assert response.json()["code"] == "IncompleteRatings"


def test_wrong_stage_is_409_with_code(client):
    session_id = client.post("/sessions", json={}).json()["id"]
    response = client.post(
        f"/sessions/{session_id}/ratings",
        json={"ratings": [{"proposal_ordinal": 0, "stars": 5, "comment": "x"}]},
    )
    assert response.status_code == 409
    assert response.json()["code"] == "WrongStage"


def test_invalid_recording_names_violation(client):
    session_id = client.post("/sessions", json={}).json()["id"]
    body = _post_scenario(client, session_id).json()
    _complete_ratings(client, session_id, body["proposals"])
    recording = recording_to_document(synthetic_recording(seed=2))
    recording["frames"][0]["joints"][0]["name"] = "left_eye"
    response = client.post(f"/sessions/{session_id}/demonstration", json={"recording": recording})
    assert response.status_code == 422
    assert response.json()["code"] == "InvalidRecording"
    assert "UnknownJoint" in response.json()["message"]


def test_recording_with_image_field_rejected(client):
    session_id = client.post("/sessions", json={}).json()["id"]
    body = _post_scenario(client, session_id).json()
    _complete_ratings(client, session_id, body["proposals"])
    recording = recording_to_document(synthetic_recording(seed=2))
    recording["image"] = "data:image/png;base64,aaaa"
    response = client.post(f"/sessions/{session_id}/demonstration", json={"recording": recording})
    assert response.status_code == 422
    assert "UnexpectedField" in response.json()["message"]


def test_custom_scenario_validation_error(client):
    session_id = client.post("/sessions", json={}).json()["id"]
    response = client.post(
        f"/sessions/{session_id}/scenario",
        json={"scenario": {"scenario_text": "  ", "source": "custom"}},
    )
    assert response.status_code == 422
    assert response.json()["code"] == "InvalidScenario"
    assert client.get(f"/sessions/{session_id}").json()["rounds"] == []


def test_custom_scenario_accepted(client):
    session_id = client.post("/sessions", json={}).json()["id"]
    response = client.post(
        f"/sessions/{session_id}/scenario",
        json={"scenario": {"scenario_text": "Great teamwork, everyone!", "source": "custom"}},
    )
    assert response.status_code == 200
    assert response.json()["stage"] == "Commentary"


def test_unknown_catalog_id_is_404(client):
    session_id = client.post("/sessions", json={}).json()["id"]
    response = _post_scenario(client, session_id, catalog_id="missing-id")
    assert response.status_code == 404


def test_empty_explanation_maps_to_422(client):
    session_id = client.post("/sessions", json={}).json()["id"]
    body = _post_scenario(client, session_id).json()
    _complete_ratings(client, session_id, body["proposals"])
    client.post(
        f"/sessions/{session_id}/demonstration",
        json={"recording": recording_to_document(synthetic_recording(seed=2))},
    )
    response = client.post(f"/sessions/{session_id}/explanation", json={"text": "  "})
    assert response.status_code == 422
    assert response.json()["code"] == "EmptyExplanation"


def _parse_sse(text: str) -> list[dict]:
    events = []
    for line in text.splitlines():
        if line.startswith("data: "):
            events.append(json.loads(line[len("data: "):]))
    return events


def test_streaming_final_text_matches_non_streaming(client):
    plain_id = client.post("/sessions", json={}).json()["id"]
    plain = _post_scenario(client, plain_id).json()

    stream_id = client.post("/sessions", json={}).json()["id"]
    response = client.post(
        f"/sessions/{stream_id}/scenario?stream=true", json={"catalog_id": "lang-leaves"}
    )
    assert response.headers["content-type"].startswith("text/event-stream")
    events = _parse_sse(response.text)
    chunks = [e["text"] for e in events if e["type"] == "chunk"]
    final = next(e for e in events if e["type"] == "final")
    assert "".join(chunks) == final["mentee_message"]["text"]
    assert final["mentee_message"]["text"] == plain["mentee_message"]["text"]
    assert final["proposals"] == plain["proposals"]


def test_streaming_ratings_ack(client):
    session_id = client.post("/sessions", json={}).json()["id"]
    body = _post_scenario(client, session_id).json()
    ratings = [
        {"proposal_ordinal": p["ordinal"], "stars": 5, "comment": "nice"}
        for p in body["proposals"]
    ]
    response = client.post(
        f"/sessions/{session_id}/ratings?stream=true", json={"ratings": ratings}
    )
    events = _parse_sse(response.text)
    final = next(e for e in events if e["type"] == "final")
    assert final["stage"] == "Demonstration"
    assert "".join(e["text"] for e in events if e["type"] == "chunk") == final["mentee_message"]["text"]


def test_sessions_recover_from_disk(config):
    with TestClient(create_app(config)) as first:
        session_id = first.post("/sessions", json={"group_label": "G1"}).json()["id"]
        _post_scenario(first, session_id)
    # a fresh engine over the same data dir serves the stored session
    with TestClient(create_app(config)) as second:
        document = second.get(f"/sessions/{session_id}").json()
        assert document["stage"] == "Commentary"
        assert document["group_label"] == "G1"


def test_same_session_mutations_are_serialized(client):
    session_id = client.post("/sessions", json={}).json()["id"]
    with ThreadPoolExecutor(max_workers=2) as pool:
        results = list(
            pool.map(lambda _: _post_scenario(client, session_id).status_code, range(2))
        )
    assert sorted(results) == [200, 409]


def test_distinct_sessions_proceed_in_parallel(client):
    ids = [client.post("/sessions", json={}).json()["id"] for _ in range(4)]
    with ThreadPoolExecutor(max_workers=4) as pool:
        results = list(pool.map(lambda sid: _post_scenario(client, sid).status_code, ids))
    assert results == [200, 200, 200, 200]


def test_live_mode_requires_credentials(monkeypatch, tmp_path):
    monkeypatch.delenv("NOVOBO_API_KEY", raising=False)
    config = EngineConfig(
        data_dir=tmp_path,
        stub_mode=False,
        llm_endpoint="https://llm.example/v1/chat",
        embed_endpoint="https://llm.example/v1/embed",
        model_reasoning="deep-1",
        model_chat="fast-1",
        model_embed="embed-1",
    )
    with pytest.raises(MissingCredential):
        EngineState(config)
    monkeypatch.setenv("NOVOBO_API_KEY", "sk-test")
    config.validate()  # satisfied once the key is present


def test_live_mode_requires_endpoints(monkeypatch, tmp_path):
    monkeypatch.setenv("NOVOBO_API_KEY", "sk-test")
    config = EngineConfig(data_dir=tmp_path, stub_mode=False)
    with pytest.raises(MissingCredential):
        config.validate()


def test_unreadable_kb_fails_startup(tmp_path):
    config = EngineConfig(kb_path=tmp_path / "nope.yaml", data_dir=tmp_path)
    with pytest.raises(ParseError):
        EngineState(config)


def test_port_clash_raises_address_in_use():
    first = bind_port(0, host="127.0.0.1")
    try:
        port = first.getsockname()[1]
        with pytest.raises(AddressInUse):
            bind_port(port, host="127.0.0.1")
    finally:
        first.close()
