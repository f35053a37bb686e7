"""FastAPI service wrapping the core package.

All mutable state lives in the in-memory session store; model, theory,
templates, and media are loaded once and shared read-only. Requests within
one session are serialized by a per-session lock, sessions idle longer than
the configured TTL are evicted, and every error body carries an ApiError.
"""
from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import FileResponse, JSONResponse
from fastapi.staticfiles import StaticFiles

from .. import dialogue as dlg
from ..config import ServiceConfig, load_config
from ..engine import _atom_json
from ..explain import ExplanationError, NotGroundError, tree_to_json
from ..learner import InducedModel, LearnLimits, learn, load_modes
from ..media import MediaRef, MediaRegistry, load_manifest
from ..parser import ParseError, parse_examples, parse_program
from ..terms import KbError, KnowledgeBase, render
from ..verbalize import TemplateSet, load_templates
from .schemas import (
    ApiError,
    DialogueRequest,
    DialogueResponse,
    HealthResponse,
    ModelResponse,
    SessionCreated,
    TreeResponse,
)

_ERROR_STATUS = {
    "fact_leaf": 400,
    "no_such_child": 400,
    "at_root": 400,
    "no_active_explanation": 400,
    "session_ended": 409,
}


@dataclass
class _Entry:
    session: dlg.DialogueSession
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_access: float = field(default_factory=time.monotonic)


class SessionStore:
    """Thread-safe in-memory store with idle eviction."""

    def __init__(self, ttl_seconds: int, clock=time.monotonic):
        self._ttl = ttl_seconds
        self._clock = clock
        self._entries: dict[str, _Entry] = {}
        self._lock = threading.Lock()

    def add(self, session: dlg.DialogueSession) -> None:
        with self._lock:
            self._evict()
            self._entries[session.session_id] = _Entry(session)

    def get(self, session_id: str) -> _Entry | None:
        with self._lock:
            self._evict()
            entry = self._entries.get(session_id)
            if entry is not None:
                entry.last_access = self._clock()
            return entry

    def _evict(self) -> None:
        now = self._clock()
        stale = [k for k, e in self._entries.items() if now - e.last_access > self._ttl]
        for k in stale:
            del self._entries[k]

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)


@dataclass
class AppState:
    config: ServiceConfig
    kb: KnowledgeBase
    model: InducedModel
    registry: MediaRegistry
    templates: TemplateSet
    strings: dict[str, str]
    limits: LearnLimits
    store: SessionStore


def load_state(config: ServiceConfig) -> AppState:
    """Parse every configured artifact; learn the model when no file is given."""
    config.validate_paths()
    kb = parse_program(config.kb_path.read_text(encoding="utf-8"))
    examples = parse_examples(config.examples_path.read_text(encoding="utf-8"))
    modes, learn_limits = load_modes(config.modes_path.read_text(encoding="utf-8"))
    templates = load_templates(config.templates_path.read_text(encoding="utf-8"))
    strings = json.loads(config.strings_path.read_text(encoding="utf-8"))
    registry = load_manifest(config.media_manifest_path, config.media_root)
    if config.model_path is not None and config.model_path.exists():
        model_kb = parse_program(config.model_path.read_text(encoding="utf-8"))
        model = InducedModel.from_kb(model_kb, modes.target)
    else:
        model = learn(kb, examples, modes, learn_limits).model
    # The modes file owns learning bounds; serve-time reasoning depth is config's.
    limits = LearnLimits(
        max_body_literals=learn_limits.max_body_literals, depth=config.depth_limit
    )
    return AppState(
        config=config,
        kb=kb,
        model=model,
        registry=registry,
        templates=templates,
        strings=strings,
        limits=limits,
        store=SessionStore(config.session_ttl_seconds),
    )


def _error(status: int, code: str, message: str, details: dict | None = None) -> JSONResponse:
    body = ApiError(code=code, message=message, details=details)
    return JSONResponse(status_code=status, content=body.model_dump(exclude_none=True))


def _media_url(state: AppState, ref: MediaRef) -> str:
    refs = state.registry.lookup(ref.constant)
    n = refs.index(ref) + 1 if ref in refs else 1
    return f"/media/{ref.constant}/{n}"


def _image_refs(state: AppState, refs) -> list[dict]:
    return [
        {
            "constant": r.constant,
            "url": _media_url(state, r),
            "mime": r.mime,
            "caption": r.caption,
        }
        for r in refs
    ]


def _response_body(state: AppState, response: dlg.Response) -> DialogueResponse:
    return DialogueResponse(
        text=response.text,
        images=_image_refs(state, response.images),
        choices=[{"index": c.index, "text": c.text} for c in response.choices],
        state_after=response.state_after,
        classification=response.classification,
    )


def create_app(config: ServiceConfig | None = None, state: AppState | None = None) -> FastAPI:
    if state is None:
        state = load_state(config or load_config())
    app = FastAPI(title="explikit", version="0.1.0")
    if state.config.cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=state.config.cors_origins,
            allow_methods=["*"],
            allow_headers=["*"],
        )
    app.state.explikit = state

    @app.exception_handler(RequestValidationError)
    async def malformed(_: Request, exc: RequestValidationError) -> JSONResponse:
        return _error(400, "malformed_request", str(exc))

    @app.get("/api/health", response_model=HealthResponse)
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/api/sessions", response_model=SessionCreated, status_code=200)
    def create_session() -> dict:
        session = dlg.open_session(
            state.model,
            state.kb,
            state.registry,
            state.templates,
            state.strings,
            state.limits,
        )
        state.store.add(session)
        return {"session_id": session.session_id}

    @app.post("/api/sessions/{session_id}/requests")
    def session_request(session_id: str, body: DialogueRequest):
        entry = state.store.get(session_id)
        if entry is None:
            return _error(404, "unknown_session", f"no session {session_id}")
        try:
            request = dlg.request_from_json(body.model_dump(exclude_none=True))
        except (ParseError, KbError) as exc:
            return _error(400, "syntax_error", str(exc))
        except (ValueError, KeyError) as exc:
            return _error(400, "malformed_request", str(exc))
        with entry.lock:
            try:
                response = entry.session.handle(request)
            except dlg.DialogueError as exc:
                return _error(_ERROR_STATUS.get(exc.code, 400), exc.code, str(exc))
            except NotGroundError as exc:
                return _error(400, "not_ground", str(exc))
            except ExplanationError as exc:
                return _error(400, "explanation_error", str(exc))
        if response.classification == "negative":
            return _error(422, "not_entailed", response.text)
        return _response_body(state, response)

    @app.get("/api/model", response_model=ModelResponse)
    def model_view() -> dict:
        target = state.model.target
        return {
            "target": f"{target[0]}/{target[1]}",
            "clauses": [
                {
                    "text": render(c),
                    "head": _atom_json(c.head),
                    "body": [_atom_json(b) for b in c.body],
                }
                for c in state.model.clauses
            ],
        }

    @app.get("/api/tree/{session_id}", response_model=TreeResponse)
    def tree_view(session_id: str):
        entry = state.store.get(session_id)
        if entry is None:
            return _error(404, "unknown_session", f"no session {session_id}")
        session = entry.session
        if session.tree is None:
            return _error(404, "no_tree", "no example has been classified yet")
        payload = tree_to_json(session.tree)
        for node_payload, node_id in zip(payload["nodes"], sorted(session.tree.nodes)):
            node = session.tree.nodes[node_id]
            node_payload["images"] = _image_refs(state, node.images)
        payload["cursor"] = session.cursor
        payload["path"] = session.cursor_path()
        return payload

    @app.get("/media/{constant}/{n}")
    def media(constant: str, n: int):
        refs = state.registry.lookup(constant)
        if not refs or not 1 <= n <= len(refs):
            return _error(404, "unknown_media", f"no image {n} for {constant!r}")
        ref = refs[n - 1]
        return FileResponse(ref.path, media_type=ref.mime)

    if state.config.ui_dist is not None and state.config.ui_dist.is_dir():
        app.mount("/ui", StaticFiles(directory=state.config.ui_dist, html=True), name="ui")

    return app
