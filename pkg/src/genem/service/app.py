"""HTTP service: sessions, generation, feedback, playback, and skills.

Per-session operations run behind a per-session lock (single writer);
trajectory streaming reads persisted artifacts only. Error responses use the
envelope {code, message, stage?}.
"""

from __future__ import annotations

import asyncio
import json
import os

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, StreamingResponse
from pydantic import BaseModel, Field

from .. import ebl
from ..domain import DEFAULT_MAX_ROUNDS, Instruction, Session
from ..errors import (
    DuplicateSkillName,
    GenemError,
    InvalidProgram,
    MalformedStageOutput,
    MaxRoundsExceeded,
    ReplayMiss,
    UnknownEmbodiment,
    UnknownScenario,
)
from ..errors import CodeRejected
from ..gateway import (
    MODE_PASSTHROUGH,
    Gateway,
    HttpChatBackend,
    default_transcript_dir,
)
from ..pipeline import Pipeline
from ..robots.manifests import MANIFEST_IDS, load_manifest
from ..robots.scenarios import SCENARIO_IDS, load_scenario
from ..robots.simulator import simulate
from ..skills import entry_from_program
from ..templates import TemplateSet
from .config import ServiceConfig
from .store import SessionStore


class CreateSessionBody(BaseModel):
    instruction: str
    embodiment: str
    scenario: str = "empty"
    modality_constraints: list[str] = Field(default_factory=list)
    max_rounds: int = DEFAULT_MAX_ROUNDS


class FeedbackBody(BaseModel):
    text: str


class SaveSkillBody(BaseModel):
    session_id: str
    round: int
    name: str


def _error(status: int, code: str, message: str, stage: str | None = None) -> JSONResponse:
    body: dict = {"code": code, "message": message}
    if stage:
        body["stage"] = stage
    return JSONResponse(body, status_code=status)


def build_gateway(config: ServiceConfig) -> Gateway:
    if config.backend == "live":
        return Gateway(MODE_PASSTHROUGH, HttpChatBackend.from_env(os.environ))
    if config.backend.startswith("replay:"):
        return Gateway.replay_dir(config.backend.split(":", 1)[1])
    if config.backend == "replay":
        return Gateway.replay_dir(default_transcript_dir())
    raise ValueError(f"unknown backend {config.backend!r}")


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig.load(environ=os.environ)
    store = SessionStore(config.store_root)
    gateway = build_gateway(config)
    templates = (
        TemplateSet.load_dir(config.template_dir)
        if config.template_dir
        else TemplateSet.load_default()
    )
    app = FastAPI(title="genem", version="0.1.0")
    app.state.store = store
    app.state.config = config

    def pipeline_for(instruction: Instruction, sink) -> Pipeline:
        manifest = load_manifest(instruction.embodiment_id)
        library = store.load_library()
        return Pipeline(gateway, templates, manifest, library.entries, sink=sink)

    def round_payload(session_id: str, session: Session, trajectories, k: int) -> dict:
        rnd = session.rounds[k]
        payload = {
            "session_id": session_id,
            "round": k,
            "human_plan": rnd.human_plan.to_dict() if rnd.human_plan else None,
            "robot_plan": rnd.robot_plan.to_dict(),
            "program": rnd.program.to_dict(),
            "feedback": rnd.feedback.to_dict() if rnd.feedback else None,
            "route": rnd.feedback.route if rnd.feedback else None,
            "rounds_remaining": session.max_rounds - session.round_index,
            "trajectory": trajectories[k].to_dict() if k in trajectories else None,
        }
        if k > 0:
            before = session.rounds[k - 1].program
            ops = ebl.ast_diff(before.ast, rnd.program.ast)
            entry_before = before.ast.skill(ebl.entry_skill_name(before.ast)).body
            entry_after = rnd.program.ast.skill(
                ebl.entry_skill_name(rnd.program.ast)
            ).body
            if ebl.apply_diff(entry_before, ops) != entry_after:
                raise GenemError("edit script failed to reproduce the new program")
            payload["diff"] = [op.to_dict() for op in ops]
        else:
            payload["diff"] = []
        return payload

    @app.exception_handler(GenemError)
    async def genem_error_handler(_request: Request, exc: GenemError):
        return _error(500, type(exc).__name__, str(exc))

    @app.get("/embodiments")
    def embodiments():
        out = []
        for manifest_id in MANIFEST_IDS:
            manifest = load_manifest(manifest_id)
            out.append(
                {
                    "id": manifest.id,
                    "channels": list(manifest.channels),
                    "primitives": list(manifest.primitive_names()),
                    "capabilities": manifest.capability_prose(),
                }
            )
        return {"embodiments": out}

    @app.get("/scenarios")
    def scenarios():
        return {"scenarios": [load_scenario(s).to_dict() for s in SCENARIO_IDS]}

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        try:
            manifest = load_manifest(body.embodiment)
            load_scenario(body.scenario)
        except (UnknownEmbodiment, UnknownScenario) as exc:
            return _error(404, type(exc).__name__, str(exc))
        constraints = tuple(c.lower() for c in body.modality_constraints)
        unknown = [c for c in constraints if c not in manifest.modalities]
        if unknown:
            return _error(422, "UnknownModality", f"not in manifest: {unknown}")
        try:
            instruction = Instruction(
                body.instruction, body.embodiment, constraints, body.scenario
            )
        except ValueError as exc:
            return _error(422, "InvalidInstruction", str(exc))
        session_id = store.create_session(instruction, body.max_rounds)
        return {"id": session_id}

    @app.get("/sessions")
    def list_sessions(offset: int = 0, limit: int = 50):
        records = store.list_sessions(offset, limit)
        return {
            "sessions": [
                {
                    "id": r.id,
                    "instruction": r.instruction.to_dict(),
                    "created_at": r.created_at,
                    "max_rounds": r.max_rounds,
                }
                for r in records
            ]
        }

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        if not store.exists(session_id):
            return _error(404, "UnknownSession", f"no session {session_id}")
        session, trajectories = store.load_session(session_id)
        body = session.to_dict()
        body["trajectory_rounds"] = sorted(trajectories.keys())
        return body

    @app.get("/sessions/{session_id}/rounds/{k}")
    def get_round(session_id: str, k: int):
        if not store.exists(session_id):
            return _error(404, "UnknownSession", f"no session {session_id}")
        session, trajectories = store.load_session(session_id)
        if k < 0 or k >= len(session.rounds):
            return _error(404, "UnknownRound", f"session has {len(session.rounds)} rounds")
        return round_payload(session_id, session, trajectories, k)

    @app.post("/sessions/{session_id}/generate")
    def generate(session_id: str):
        if not store.exists(session_id):
            return _error(404, "UnknownSession", f"no session {session_id}")
        with store.lock(session_id):
            session, trajectories = store.load_session(session_id)
            if session.rounds:
                return _error(409, "AlreadyGenerated", "round 0 already generated")
            log = store.event_log(session_id)
            pipeline = pipeline_for(session.instruction, log.append)
            try:
                pipeline.run_generation(session)
            except (MalformedStageOutput, ReplayMiss, CodeRejected) as exc:
                stage = getattr(exc, "stage_tag", "CodeGen")
                log.append(
                    {"type": "stage_error", "round": 0, "stage": stage, "error": type(exc).__name__, "detail": str(exc)}
                )
                return _error(502, type(exc).__name__, str(exc), stage)
            trajectory = _simulate_round(session, store)
            log.append({"type": "trajectory", "round": 0, "trajectory": trajectory.to_dict()})
            trajectories[0] = trajectory
            return round_payload(session_id, session, trajectories, 0)

    @app.post("/sessions/{session_id}/feedback")
    def feedback(session_id: str, body: FeedbackBody):
        if not store.exists(session_id):
            return _error(404, "UnknownSession", f"no session {session_id}")
        with store.lock(session_id):
            session, trajectories = store.load_session(session_id)
            if not session.rounds:
                return _error(409, "NotGenerated", "generate round 0 first")
            log = store.event_log(session_id)
            pipeline = pipeline_for(session.instruction, log.append)
            try:
                pipeline.run_feedback_round(session, body.text)
            except MaxRoundsExceeded as exc:
                return _error(429, "MaxRoundsExceeded", str(exc))
            except ValueError as exc:
                return _error(422, "InvalidFeedback", str(exc))
            except (MalformedStageOutput, ReplayMiss, CodeRejected) as exc:
                stage = getattr(exc, "stage_tag", "CodeGen")
                log.append(
                    {
                        "type": "stage_error",
                        "round": session.round_index + 1,
                        "stage": stage,
                        "error": type(exc).__name__,
                        "detail": str(exc),
                    }
                )
                return _error(502, type(exc).__name__, str(exc), stage)
            k = session.round_index
            trajectory = _simulate_round(session, store)
            log.append({"type": "trajectory", "round": k, "trajectory": trajectory.to_dict()})
            trajectories[k] = trajectory
            return round_payload(session_id, session, trajectories, k)

    @app.get("/sessions/{session_id}/rounds/{k}/trajectory")
    async def stream_trajectory(session_id: str, k: int, rate: float = 10.0):
        if not store.exists(session_id):
            return _error(404, "UnknownSession", f"no session {session_id}")
        session, trajectories = store.load_session(session_id)
        if k not in trajectories:
            return _error(404, "UnknownRound", f"no trajectory for round {k}")
        trajectory = trajectories[k]
        delay = 0.0 if rate <= 0 else 1.0 / rate

        async def frames():
            for frame in trajectory.frames:
                yield f"event: frame\ndata: {json.dumps(frame.to_dict())}\n\n"
                if delay:
                    await asyncio.sleep(delay)
            done = {
                "frames": len(trajectory.frames),
                "events": [e.to_dict() for e in trajectory.events],
            }
            yield f"event: complete\ndata: {json.dumps(done)}\n\n"

        return StreamingResponse(frames(), media_type="text/event-stream")

    @app.get("/skills")
    def list_skills():
        return store.load_library().to_dict()

    @app.post("/skills", status_code=201)
    def save_skill(body: SaveSkillBody):
        if not store.exists(body.session_id):
            return _error(404, "UnknownSession", f"no session {body.session_id}")
        with store.lock(body.session_id):
            session, _ = store.load_session(body.session_id)
            if body.round < 0 or body.round >= len(session.rounds):
                return _error(404, "UnknownRound", f"session has {len(session.rounds)} rounds")
            program = session.rounds[body.round].program
            manifest = load_manifest(session.instruction.embodiment_id)
            library = store.load_library()
            report = ebl.validate(program.ast, manifest, library.entries)
            if not report.valid:
                return _error(
                    422, "InvalidProgram", f"program invalid: {report.error_codes()}"
                )
            try:
                entry = entry_from_program(program, body.name, provenance="user_saved")
                library.add(entry)
            except InvalidProgram as exc:
                return _error(422, "InvalidProgram", str(exc))
            except DuplicateSkillName as exc:
                return _error(409, "DuplicateSkillName", str(exc))
            store.save_library(library)
            store.event_log(body.session_id).append(
                {"type": "skill_saved", "round": body.round, "name": body.name}
            )
            return entry.to_dict()

    return app


def _simulate_round(session: Session, store: SessionStore):
    manifest = load_manifest(session.instruction.embodiment_id)
    scenario = load_scenario(session.instruction.scenario_id)
    library = store.load_library()
    return simulate(
        session.rounds[-1].program, manifest, scenario, library=library.entries
    )


def main() -> None:
    """Entry point for `python -m genem.service`."""
    import uvicorn

    config = ServiceConfig.load(os.environ.get("GENEM_CONFIG"), os.environ)
    uvicorn.run(create_app(config), host=config.host, port=config.port, log_level="warning")
