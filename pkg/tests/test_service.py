import json

import pytest
from fastapi.testclient import TestClient

from genem.authoring import NOD_SESSION_ROUNDS
from genem.service import ServiceConfig, SessionStore, create_app

NOD_BODY = {
    "instruction": "Nod your head.",
    "embodiment": "mobile_v1",
    "scenario": "empty",
}

ACK_BODY = {
    "instruction": "Acknowledge a person walking by. You cannot speak.",
    "embodiment": "mobile_v1",
    "scenario": "person_walks_by",
    "modality_constraints": ["speech"],
}


@pytest.fixture()
def client(tmp_path):
    app = create_app(ServiceConfig(store_root=str(tmp_path / "store"), backend="replay"))
    with TestClient(app) as c:
        yield c


def create_nod(client):
    response = client.post("/sessions", json=NOD_BODY)
    assert response.status_code == 201
    return response.json()["id"]


def test_create_session_validations(client):
    assert client.post("/sessions", json=NOD_BODY).status_code == 201
    bad_scenario = client.post(
        "/sessions", json={**NOD_BODY, "scenario": "parade"}
    )
    assert bad_scenario.status_code == 404
    assert bad_scenario.json()["code"] == "UnknownScenario"
    bad_embodiment = client.post(
        "/sessions", json={**NOD_BODY, "embodiment": "walker_v9"}
    )
    assert bad_embodiment.status_code == 404
    bad_modality = client.post(
        "/sessions", json={**NOD_BODY, "modality_constraints": ["smell"]}
    )
    assert bad_modality.status_code == 422
    empty = client.post("/sessions", json={**NOD_BODY, "instruction": "  "})
    assert empty.status_code == 422


def test_distinct_ids_and_pagination(client):
    ids = [create_nod(client) for _ in range(3)]
    assert len(set(ids)) == 3
    listed = client.get("/sessions").json()["sessions"]
    assert [s["id"] for s in listed] == ids  # creation order
    page = client.get("/sessions", params={"offset": 1, "limit": 1}).json()["sessions"]
    assert [s["id"] for s in page] == [ids[1]]


def test_generate_and_conflict(client):
    sid = create_nod(client)
    first = client.post(f"/sessions/{sid}/generate")
    assert first.status_code == 200
    payload = first.json()
    assert payload["round"] == 0
    assert payload["human_plan"]["expressive_motion"]
    assert payload["robot_plan"]["steps"]
    assert payload["program"]["entry_skill"] == "nod"
    assert payload["trajectory"]["frames"]
    assert payload["diff"] == []
    second = client.post(f"/sessions/{sid}/generate")
    assert second.status_code == 409
    assert second.json()["code"] == "AlreadyGenerated"


def test_generate_replay_miss_maps_to_502(client):
    body = {**NOD_BODY, "instruction": "Do a cartwheel."}
    sid = client.post("/sessions", json=body).json()["id"]
    response = client.post(f"/sessions/{sid}/generate")
    assert response.status_code == 502
    envelope = response.json()
    assert envelope["code"] == "ReplayMiss"
    assert envelope["stage"] == "InstructionFollowing"


def test_feedback_round_with_route_and_diff(client):
    sid = create_nod(client)
    client.post(f"/sessions/{sid}/generate")
    response = client.post(
        f"/sessions/{sid}/feedback", json={"text": NOD_SESSION_ROUNDS[0].utterance}
    )
    assert response.status_code == 200
    payload = response.json()
    assert payload["round"] == 1
    assert payload["route"] == "CodeOnly"
    assert payload["feedback"]["change_summary"]
    # round 1 only tunes a parameter default, so the statement diff is empty
    assert payload["diff"] == []
    assert payload["rounds_remaining"] == 9

    second = client.post(
        f"/sessions/{sid}/feedback", json={"text": NOD_SESSION_ROUNDS[1].utterance}
    ).json()
    assert second["round"] == 2
    assert second["diff"]  # repeat-count change shows up as an edit script
    kinds = {op["kind"] for op in second["diff"]}
    assert kinds <= {"InsertedCall", "RemovedCall"}


def test_eleventh_feedback_hits_round_cap(client):
    sid = create_nod(client)
    client.post(f"/sessions/{sid}/generate")
    for rnd in NOD_SESSION_ROUNDS:
        response = client.post(f"/sessions/{sid}/feedback", json={"text": rnd.utterance})
        assert response.status_code == 200, response.text
    blocked = client.post(f"/sessions/{sid}/feedback", json={"text": "again"})
    assert blocked.status_code == 429
    assert blocked.json()["code"] == "MaxRoundsExceeded"


def test_session_state_and_round_endpoints(client):
    sid = create_nod(client)
    client.post(f"/sessions/{sid}/generate")
    state = client.get(f"/sessions/{sid}").json()
    assert state["round_index"] == 0
    assert state["trajectory_rounds"] == [0]
    round0 = client.get(f"/sessions/{sid}/rounds/0").json()
    assert round0["program"]["source"].startswith("skill nod")
    missing = client.get(f"/sessions/{sid}/rounds/7")
    assert missing.status_code == 404


def test_sse_stream_counts_and_burst(client):
    sid = create_nod(client)
    generated = client.post(f"/sessions/{sid}/generate").json()
    expected = len(generated["trajectory"]["frames"])
    with client.stream(
        "GET", f"/sessions/{sid}/rounds/0/trajectory", params={"rate": 0}
    ) as response:
        assert response.status_code == 200
        text = "".join(response.iter_text())
    assert text.count("event: frame") == expected
    assert "event: complete" in text
    tail = text.rsplit("data: ", 1)[1]
    assert json.loads(tail.strip())["frames"] == expected


def test_sse_disconnect_leaves_store_intact(client, tmp_path):
    sid = create_nod(client)
    client.post(f"/sessions/{sid}/generate")
    with client.stream(
        "GET", f"/sessions/{sid}/rounds/0/trajectory", params={"rate": 50}
    ) as response:
        next(response.iter_text())  # read a little, then drop the connection
    state = client.get(f"/sessions/{sid}")
    assert state.status_code == 200
    assert state.json()["trajectory_rounds"] == [0]


def test_unknown_session_404s(client):
    assert client.post("/sessions/nope/generate").status_code == 404
    assert client.get("/sessions/nope").status_code == 404
    assert (
        client.get("/sessions/nope/rounds/0/trajectory").status_code == 404
    )


def test_skill_save_flow_and_reuse(client):
    sid = create_nod(client)
    client.post(f"/sessions/{sid}/generate")
    saved = client.post(
        "/skills", json={"session_id": sid, "round": 0, "name": "nod_head"}
    )
    assert saved.status_code == 201
    assert saved.json()["name"] == "nod_head"
    assert saved.json()["provenance"] == "user_saved"

    duplicate = client.post(
        "/skills", json={"session_id": sid, "round": 0, "name": "nod_head"}
    )
    assert duplicate.status_code == 409

    listed = client.get("/skills").json()
    assert [s["name"] for s in listed["skills"]] == ["nod_head"]

    follow_up = client.post("/sessions", json=ACK_BODY).json()["id"]
    response = client.post(f"/sessions/{follow_up}/generate")
    assert response.status_code == 200
    program = response.json()["program"]["source"]
    assert "nod_head(" in program  # the saved skill is composed into new code


def test_saved_skill_lands_in_subsequent_prompts(client, tmp_path):
    sid = create_nod(client)
    client.post(f"/sessions/{sid}/generate")
    client.post("/skills", json={"session_id": sid, "round": 0, "name": "nod_head"})

    from genem.domain import HumanMotionPlan, Instruction
    from genem.pipeline import Pipeline
    from genem.robots import load_manifest
    from genem.skills import SkillLibrary
    from genem.templates import TemplateSet
    from genem.gateway import Gateway, default_transcript_dir

    store_root = client.app.state.config.store_root
    library = SkillLibrary.load(f"{store_root}/skills.json")
    pipeline = Pipeline(
        Gateway.replay_dir(default_transcript_dir()),
        TemplateSet.load_default(),
        load_manifest("mobile_v1"),
        library.entries,
    )
    instruction = Instruction(ACK_BODY["instruction"], "mobile_v1", ("speech",), "person_walks_by")
    stage2 = pipeline.assemble_robot_motion(instruction, HumanMotionPlan("c", "nod"))
    stage3 = pipeline.assemble_code_gen(
        instruction, HumanMotionPlan("c", "nod"), __import__("genem").domain.RobotMotionPlan("r", ("s",))
    )
    signature = library.entries[0].signature_text()
    assert signature in stage2.system
    assert signature in stage3.system


def test_crash_recovery_rebuilds_index(tmp_path):
    store_root = str(tmp_path / "store")
    app = create_app(ServiceConfig(store_root=store_root, backend="replay"))
    with TestClient(app) as client:
        sid = create_nod(client)
        client.post(f"/sessions/{sid}/generate")
        for rnd in NOD_SESSION_ROUNDS[:5]:
            assert (
                client.post(f"/sessions/{sid}/feedback", json={"text": rnd.utterance}).status_code
                == 200
            )

    # "restart": a brand-new app instance over the same directory
    revived = create_app(ServiceConfig(store_root=store_root, backend="replay"))
    with TestClient(revived) as client:
        state = client.get(f"/sessions/{sid}").json()
        assert state["round_index"] == 5
        assert len(state["rounds"]) == 6
        for rnd in NOD_SESSION_ROUNDS[5:]:
            assert (
                client.post(f"/sessions/{sid}/feedback", json={"text": rnd.utterance}).status_code
                == 200
            )
        assert client.get(f"/sessions/{sid}").json()["round_index"] == 10
        blocked = client.post(f"/sessions/{sid}/feedback", json={"text": "again"})
        assert blocked.status_code == 429


def test_torn_tail_line_ignored(tmp_path):
    store_root = tmp_path / "store"
    app = create_app(ServiceConfig(store_root=str(store_root), backend="replay"))
    with TestClient(app) as client:
        sid = create_nod(client)
        client.post(f"/sessions/{sid}/generate")
    log_path = store_root / "sessions" / f"{sid}.jsonl"
    with open(log_path, "a") as fh:
        fh.write('{"type": "stage_output", "round": 1, "truncat')  # crash mid-write
    store = SessionStore(store_root)
    session, trajectories = store.load_session(sid)
    assert session.round_index == 0
    assert 0 in trajectories


def test_embodiments_and_scenarios_endpoints(client):
    embodiments = client.get("/embodiments").json()["embodiments"]
    assert {e["id"] for e in embodiments} == {"mobile_v1", "quadruped_v1"}
    quadruped = next(e for e in embodiments if e["id"] == "quadruped_v1")
    assert "say" not in quadruped["primitives"]
    scenarios = client.get("/scenarios").json()["scenarios"]
    assert {s["id"] for s in scenarios} >= {"empty", "person_walks_by"}


def test_responses_never_leak_credentials(client, monkeypatch):
    monkeypatch.setenv("GENEM_LLM_KEY", "super-secret-key")
    sid = create_nod(client)
    payload = client.post(f"/sessions/{sid}/generate").text
    assert "super-secret-key" not in payload
    assert "GENEM_LLM_ENDPOINT" not in payload
