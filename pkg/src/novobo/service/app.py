"""HTTP API over the mentoring engine.

Routes delegate to the session and knowledge operations; every error body
carries the engine's machine-readable code. Mutations to one session are
serialized behind a per-session lock; distinct sessions proceed in parallel.
Mentee replies can be streamed as server-sent chunks.
"""

from __future__ import annotations

import json
import logging
import socket
import threading
from contextlib import asynccontextmanager
from typing import Iterator

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, StreamingResponse
from pydantic import BaseModel

from .. import session as sessions
from ..agents.pipeline import AgentRuntime
from ..agents.providers import HttpLlmClient, StubLlmClient
from ..agents.types import MenteeMessage, TeachingScenario
from ..errors import (
    AddressInUse,
    EngineError,
    InvalidScenario,
    MalformedOutput,
    NotFound,
    ProviderError,
    WrongStage,
)
from ..knowledge import load_knowledge_base, lookup_definition
from ..retrieval import HttpEmbedder, StubEmbedder, build_index
from .catalog import ScenarioCatalog, load_catalog
from .config import API_KEY_ENV, EngineConfig

logger = logging.getLogger(__name__)

_ERROR_STATUS: dict[type, int] = {
    NotFound: 404,
    WrongStage: 409,
    ProviderError: 502,
    MalformedOutput: 502,
}
_DEFAULT_ERROR_STATUS = 422


def _status_for(error: EngineError) -> int:
    for kind, status in _ERROR_STATUS.items():
        if isinstance(error, kind):
            return status
    return _DEFAULT_ERROR_STATUS


class EngineState:
    """Loaded knowledge, providers, the exemplar index, and live sessions."""

    def __init__(self, config: EngineConfig) -> None:
        config.validate()
        self.config = config
        self.kb = load_knowledge_base(config.kb_path)
        self.catalog: ScenarioCatalog = load_catalog(config.catalog_path)
        if config.stub_mode:
            embedder = StubEmbedder(dim=config.embed_dim, seed=config.stub_seed)
            llm = StubLlmClient(seed=config.stub_seed)
        else:
            embedder = HttpEmbedder(
                config.embed_endpoint,
                config.model_embed,
                api_key_env=API_KEY_ENV,
                timeout_ms=config.request_timeout_ms,
                max_inflight=config.max_inflight_llm,
            )
            llm = HttpLlmClient(
                config.llm_endpoint,
                {"reasoning": config.model_reasoning, "chat": config.model_chat},
                api_key_env=API_KEY_ENV,
                timeout_ms=config.request_timeout_ms,
                max_inflight=config.max_inflight_llm,
            )
        self.runtime = AgentRuntime(
            kb=self.kb, llm=llm, embedder=embedder, index=build_index(self.kb, embedder)
        )
        self.store = sessions.SessionStore(config.data_dir)
        self._sessions: dict[str, sessions.Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    @property
    def mode(self) -> str:
        return "stub" if self.config.stub_mode else "live"

    def create_session(self, group_label: str | None) -> sessions.Session:
        session = sessions.create_session(group_label)
        with self._registry_lock:
            self._sessions[session.id] = session
            self._locks[session.id] = threading.Lock()
        self.store.save(session)
        self.store.append_event(session.id, "session_created", {"group_label": group_label})
        return session

    def get_session(self, session_id: str) -> sessions.Session:
        with self._registry_lock:
            session = self._sessions.get(session_id)
        if session is not None:
            return session
        # not in memory: recover the snapshot from disk
        session = self.store.load(session_id)
        with self._registry_lock:
            session = self._sessions.setdefault(session_id, session)
            self._locks.setdefault(session_id, threading.Lock())
        return session

    def lock_for(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def session_count(self) -> int:
        with self._registry_lock:
            return len(self._sessions)

    def flush(self) -> None:
        with self._registry_lock:
            live = list(self._sessions.values())
        for session in live:
            self.store.save(session)


class CreateSessionBody(BaseModel):
    group_label: str | None = None


class ScenarioBody(BaseModel):
    catalog_id: str | None = None
    scenario: dict | None = None


class RatingBody(BaseModel):
    proposal_ordinal: int
    stars: int
    comment: str


class RatingsBody(BaseModel):
    ratings: list[RatingBody]


class DemonstrationBody(BaseModel):
    recording: dict


class ExplanationBody(BaseModel):
    text: str


def _message_doc(message: MenteeMessage) -> dict:
    return {"role": message.role, "text": message.text, "stage_hint": message.stage_hint.value}


def _sse(payload: dict, message_text: str) -> StreamingResponse:
    """Stream the mentee text as incremental chunks; the final event carries
    the complete payload so clients can treat it idempotently."""

    def events() -> Iterator[str]:
        words = message_text.split(" ")
        for i, word in enumerate(words):
            chunk = word if i == len(words) - 1 else word + " "
            yield f"data: {json.dumps({'type': 'chunk', 'text': chunk})}\n\n"
        yield f"data: {json.dumps({'type': 'final', **payload})}\n\n"

    return StreamingResponse(events(), media_type="text/event-stream")


def _respond(payload: dict, message_text: str, stream: bool, status_code: int = 200):
    if stream:
        return _sse(payload, message_text)
    return JSONResponse(payload, status_code=status_code)


def create_app(config: EngineConfig, state: EngineState | None = None) -> FastAPI:
    """Build the API application (loads knowledge and builds the index)."""
    engine = state or EngineState(config)

    @asynccontextmanager
    async def lifespan(_: FastAPI):
        yield
        engine.flush()

    app = FastAPI(title="novobo", lifespan=lifespan)
    app.state.engine = engine

    @app.exception_handler(EngineError)
    async def on_engine_error(_: Request, error: EngineError):
        return JSONResponse(
            {"code": error.code, "message": str(error)}, status_code=_status_for(error)
        )

    @app.get("/healthz")
    def healthz() -> dict:
        return {
            "status": "ok",
            "mode": engine.mode,
            "gesture_types": len(engine.kb.gesture_types),
            "intentions": len(engine.kb.intentions),
            "exemplars": len(engine.kb.exemplars),
            "scenarios": len(engine.catalog),
            "sessions": engine.session_count(),
        }

    @app.get("/scenarios")
    def list_scenarios() -> dict:
        return {
            "scenarios": [
                {
                    "id": entry.id,
                    "subject": entry.scenario.subject,
                    "grade_level": entry.scenario.grade_level,
                    "lesson_topic": entry.scenario.lesson_topic,
                    "scenario_text": entry.scenario.scenario_text,
                }
                for entry in engine.catalog.entries
            ]
        }

    @app.get("/knowledge/{kind}/{key}")
    def knowledge(kind: str, key: str) -> dict:
        # wire uses the plural collection names
        kind_map = {"gesture_types": "gesture_type", "intentions": "intention"}
        entry = lookup_definition(engine.kb, kind_map.get(kind, kind), key)
        doc = {
            "kind": entry.kind,
            "key": entry.key,
            "definition": entry.definition,
            "citations": [{"key": c.key, "display": c.display} for c in entry.citations],
        }
        if entry.origin is not None:
            doc["origin"] = entry.origin
        return doc

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody) -> dict:
        session = engine.create_session(body.group_label)
        return {
            "id": session.id,
            "created_at": session.created_at,
            "stage": session.stage.value,
            "group_label": session.group_label,
        }

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        return sessions.export_session(engine.get_session(session_id))

    @app.post("/sessions/{session_id}/scenario")
    def post_scenario(session_id: str, body: ScenarioBody, stream: bool = False):
        session = engine.get_session(session_id)
        if body.catalog_id is not None:
            scenario = engine.catalog.get(body.catalog_id)
        elif body.scenario is not None:
            raw = body.scenario
            if not isinstance(raw, dict):
                raise InvalidScenario("scenario must be an object")
            scenario = TeachingScenario(
                subject=str(raw.get("subject", "")),
                grade_level=str(raw.get("grade_level", "")),
                lesson_topic=str(raw.get("lesson_topic", "")),
                scenario_text=str(raw.get("scenario_text", "")),
                source=str(raw.get("source", "custom")),
            )
        else:
            raise InvalidScenario("provide either catalog_id or scenario")
        with engine.lock_for(session_id):
            proposals, message = sessions.submit_scenario(session, scenario, engine.runtime)
            if proposals is not None:
                engine.store.save(session)
                engine.store.append_event(
                    session_id, "scenario_submitted", {"round_index": len(session.rounds) - 1}
                )
        payload = {
            "stage": session.stage.value,
            "no_gesture_needed": proposals is None,
            "proposals": [] if proposals is None else [
                {
                    "ordinal": p.ordinal,
                    "description": p.description,
                    "intention": p.intention,
                    "gesture_type": p.gesture_type,
                    "references": list(p.references),
                    "few_shot_exemplar_id": p.few_shot_exemplar_id,
                }
                for p in proposals
            ],
            "mentee_message": _message_doc(message),
        }
        return _respond(payload, message.text, stream)

    @app.post("/sessions/{session_id}/ratings")
    def post_ratings(session_id: str, body: RatingsBody, stream: bool = False):
        session = engine.get_session(session_id)
        ratings = [
            sessions.Rating(proposal_ordinal=r.proposal_ordinal, stars=r.stars, comment=r.comment)
            for r in body.ratings
        ]
        with engine.lock_for(session_id):
            message = sessions.submit_commentary(session, ratings, engine.runtime)
            engine.store.save(session)
            engine.store.append_event(session_id, "ratings_submitted", {"count": len(ratings)})
        payload = {"stage": session.stage.value, "mentee_message": _message_doc(message)}
        return _respond(payload, message.text, stream)

    @app.post("/sessions/{session_id}/demonstration")
    def post_demonstration(session_id: str, body: DemonstrationBody, stream: bool = False):
        session = engine.get_session(session_id)
        recording = sessions.recording_from_document(body.recording)
        with engine.lock_for(session_id):
            message = sessions.attach_demonstration(session, recording, engine.runtime)
            engine.store.save(session)
            engine.store.append_event(
                session_id, "demonstration_attached", {"frames": len(recording.frames)}
            )
        payload = {"stage": session.stage.value, "mentee_message": _message_doc(message)}
        return _respond(payload, message.text, stream)

    @app.post("/sessions/{session_id}/explanation")
    def post_explanation(session_id: str, body: ExplanationBody, stream: bool = False):
        session = engine.get_session(session_id)
        with engine.lock_for(session_id):
            summary, message = sessions.submit_explanation(session, body.text, engine.runtime)
            engine.store.save(session)
            engine.store.append_event(session_id, "explanation_submitted", {})
        payload = {
            "stage": session.stage.value,
            "summary": summary,
            "mentee_message": _message_doc(message),
        }
        return _respond(payload, message.text, stream)

    return app


def bind_port(port: int, host: str = "0.0.0.0") -> socket.socket:
    """Reserve the listen socket up front so port clashes fail cleanly."""
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        sock.bind((host, port))
    except OSError as exc:
        sock.close()
        raise AddressInUse(f"port {port} is already in use: {exc}") from exc
    sock.listen(128)
    return sock


def serve(config: EngineConfig) -> None:
    """Validate config, load fixtures, bind the port, and run the server."""
    import uvicorn

    state = EngineState(config)
    app = create_app(config, state)
    sock = bind_port(config.listen_port)
    logger.info(
        "serving on port %d (%s mode, %d exemplars)",
        config.listen_port,
        state.mode,
        len(state.kb.exemplars),
    )
    server = uvicorn.Server(uvicorn.Config(app=app, log_level="info"))
    try:
        server.run(sockets=[sock])
    finally:
        sock.close()
