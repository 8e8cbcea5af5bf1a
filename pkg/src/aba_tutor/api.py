"""REST service exposing the teacher and student workflows.

State is in-memory and single-process: one content pack, live sessions, gate
challenges, and gate tokens. Default bind is loopback-only, matching the
offline, anonymous posture of the engine. In test-clock mode clients supply
timestamps via the X-Test-Clock header, which makes whole request transcripts
replayable.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import secrets
import threading
import time
from pathlib import Path
from typing import Any, Optional

from fastapi import FastAPI, Header, Request
from fastapi.responses import FileResponse, JSONResponse

from . import content as store
from . import engine
from .content import ContentItem, ContentPack, Classification, PackError
from .engine import Session, SessionConfig

GATE_TOKEN_TTL_S = 30 * 60.0

ERROR_CODES = {
    "gate-required": 401,
    "gate-invalid": 403,
    "gate-failed": 403,
    "invalid-item": 400,
    "duplicate-item": 400,
    "invalid-classification": 400,
    "classification-in-use": 400,
    "item-not-found": 404,
    "classification-not-found": 404,
    "session-not-found": 404,
    "invalid-pack": 422,
    "prompt-outstanding": 409,
    "no-outstanding-prompt": 409,
    "answer-out-of-range": 400,
    "non-monotonic-timestamp": 400,
    "bad-request": 400,
    "media-not-found": 404,
    "invalid-media-ref": 400,
}


class ApiError(Exception):
    def __init__(self, code: str, message: str, extra: Optional[dict] = None):
        super().__init__(message)
        self.code = code
        self.http_status = ERROR_CODES[code]
        self.message = message
        self.extra = extra or {}


class ServerState:
    def __init__(self, pack: ContentPack, media_root: Optional[Path],
                 test_clock: bool):
        self.pack = pack
        self.pack_lock = threading.Lock()
        self.media_root = media_root.resolve() if media_root else None
        self.test_clock = test_clock
        self.sessions: dict[str, Session] = {}
        self.session_locks: dict[str, threading.Lock] = {}
        self.challenges: dict[str, store.GateChallenge] = {}
        self.tokens: dict[str, float] = {}  # token -> expires_at
        self._lock = threading.Lock()

    def now(self, request: Request) -> float:
        if self.test_clock:
            header = request.headers.get("x-test-clock")
            if header is not None:
                try:
                    return float(header)
                except ValueError:
                    raise ApiError("bad-request", "X-Test-Clock must be a number")
        return time.time()

    def session_for(self, session_id: str) -> tuple[Session, threading.Lock]:
        with self._lock:
            session = self.sessions.get(session_id)
            if session is None:
                raise ApiError("session-not-found", f"unknown session {session_id!r}")
            return session, self.session_locks[session_id]

    def require_gate(self, token: Optional[str], now: float) -> None:
        if not token:
            raise ApiError("gate-required", "content mutations require a gate token")
        expires_at = self.tokens.get(token)
        if expires_at is None or now >= expires_at:
            raise ApiError("gate-invalid", "gate token is invalid or expired")


def _violation_dicts(violations) -> list[dict]:
    return [dataclasses.asdict(v) for v in violations]


def _item_public(item: ContentItem) -> dict:
    return dataclasses.asdict(item)


def _prompt_public(prompt: engine.Prompt) -> dict:
    # The student payload never exposes correct_index.
    return {
        "item": {
            "item_id": prompt.item.item_id,
            "prompt_text": prompt.item.prompt_text,
            "media_ref": prompt.item.media_ref,
            "choices": prompt.item.choices,
            "classification_id": prompt.item.classification_id,
            "subject": prompt.item.subject,
        },
        "token_display": prompt.token_display,
        "is_followup": prompt.is_followup,
    }


def _outcome_public(outcome: engine.Outcome) -> dict:
    if isinstance(outcome, engine.RewardGranted):
        return {
            "outcome": "reward",
            "tokens": outcome.tokens_now,
            "praise_cue": outcome.praise_cue,
            "reward": dataclasses.asdict(outcome.reward),
        }
    if isinstance(outcome, engine.Correct):
        return {
            "outcome": "correct",
            "tokens": outcome.tokens_now,
            "praise_cue": outcome.praise_cue,
        }
    return {
        "outcome": "incorrect",
        "correct_answer_text": outcome.correct_answer_text,
        "somber_cue": outcome.somber_cue,
        "followup_scheduled": outcome.followup_scheduled,
    }


def _require_fields(body: Any, fields: list[str]) -> dict:
    if not isinstance(body, dict):
        raise ApiError("bad-request", "request body must be a JSON object")
    for f in fields:
        if f not in body:
            raise ApiError("bad-request", f"missing field {f!r}")
    return body


def create_app(pack: Optional[ContentPack] = None,
               media_root: Optional[str | Path] = None,
               test_clock: bool = False) -> FastAPI:
    if pack is None:
        pack = ContentPack(pack_id="empty")
    state = ServerState(pack, Path(media_root) if media_root else None, test_clock)
    app = FastAPI(title="ABA Tutor", docs_url=None, redoc_url=None)
    app.state.server = state

    @app.exception_handler(ApiError)
    async def handle_api_error(_request: Request, exc: ApiError):
        body = {"code": exc.code, "message": exc.message}
        body.update(exc.extra)
        return JSONResponse(status_code=exc.http_status, content=body)

    # -- teacher gate

    @app.post("/gate")
    async def new_challenge(request: Request):
        now = state.now(request)
        challenge = store.new_gate_challenge(now)
        state.challenges[challenge.challenge_id] = challenge
        return {
            "challenge_id": challenge.challenge_id,
            "operand_a": challenge.operand_a,
            "operand_b": challenge.operand_b,
            "operation": challenge.operation,
            "expires_at": challenge.expires_at,
        }

    @app.post("/gate/verify")
    async def verify_challenge(request: Request):
        now = state.now(request)
        body = _require_fields(await request.json(), ["challenge_id", "answer"])
        challenge = state.challenges.get(body["challenge_id"])
        if challenge is None:
            raise ApiError("gate-failed", "unknown challenge", {"reason": "unknown-challenge"})
        result = store.verify_gate(challenge, body["answer"], now)
        if not result.passed:
            raise ApiError("gate-failed", "gate verification failed", {"reason": result.reason})
        token = secrets.token_hex(16)
        state.tokens[token] = now + GATE_TOKEN_TTL_S
        return {"token": token, "issued_at": now, "expires_at": now + GATE_TOKEN_TTL_S}

    # -- content authoring

    @app.get("/content")
    async def get_content():
        with state.pack_lock:
            return store.pack_to_dict(state.pack)

    @app.get("/content/validation")
    async def get_validation():
        with state.pack_lock:
            return {"violations": _violation_dicts(store.validate_pack(state.pack))}

    def _mutate(request: Request, gate_token: Optional[str], fn):
        state.require_gate(gate_token, state.now(request))
        with state.pack_lock:
            try:
                return fn()
            except PackError as e:
                raise ApiError(e.code if e.code in ERROR_CODES else "invalid-item", str(e))

    @app.post("/content/classifications", status_code=201)
    async def post_classification(request: Request,
                                  x_gate_token: Optional[str] = Header(default=None)):
        body = _require_fields(await request.json(),
                               ["classification_id", "name", "subject"])
        cls = Classification(**{k: body[k] for k in ("classification_id", "name", "subject")})
        _mutate(request, x_gate_token,
                lambda: store.add_classification(state.pack, cls))
        return dataclasses.asdict(cls)

    @app.delete("/content/classifications/{classification_id}")
    async def delete_classification(classification_id: str, request: Request,
                                    x_gate_token: Optional[str] = Header(default=None)):
        _mutate(request, x_gate_token,
                lambda: store.remove_classification(state.pack, classification_id))
        return {"removed": classification_id}

    @app.post("/content/items", status_code=201)
    async def post_item(request: Request,
                        x_gate_token: Optional[str] = Header(default=None)):
        body = _require_fields(await request.json(),
                               ["item_id", "prompt_text", "choices", "correct_index",
                                "classification_id", "subject"])
        try:
            item = ContentItem(
                item_id=body["item_id"], prompt_text=body["prompt_text"],
                choices=list(body["choices"]), correct_index=body["correct_index"],
                classification_id=body["classification_id"], subject=body["subject"],
                media_ref=body.get("media_ref"))
        except TypeError as e:
            raise ApiError("invalid-item", str(e))
        _mutate(request, x_gate_token, lambda: store.add_item(state.pack, item))
        return _item_public(item)

    @app.put("/content/items/{item_id}")
    async def put_item(item_id: str, request: Request,
                       x_gate_token: Optional[str] = Header(default=None)):
        body = await request.json()
        if not isinstance(body, dict):
            raise ApiError("bad-request", "request body must be a JSON object")
        _mutate(request, x_gate_token,
                lambda: store.edit_item(state.pack, item_id, **body))
        return _item_public(state.pack.find_item(item_id))

    @app.delete("/content/items/{item_id}")
    async def delete_item(item_id: str, request: Request,
                          x_gate_token: Optional[str] = Header(default=None)):
        _mutate(request, x_gate_token,
                lambda: store.remove_item(state.pack, item_id))
        return {"removed": item_id}

    # -- student sessions

    @app.post("/sessions", status_code=201)
    async def post_session(request: Request):
        body = await request.json() if await request.body() else {}
        if not isinstance(body, dict):
            raise ApiError("bad-request", "request body must be a JSON object")
        seed = body.get("seed", 0)
        if not isinstance(seed, int):
            raise ApiError("bad-request", "seed must be an integer")
        with state.pack_lock:
            try:
                session = Session(SessionConfig(rng_seed=seed), state.pack)
            except engine.InvalidPackError as e:
                raise ApiError("invalid-pack", str(e),
                               {"violations": _violation_dicts(e.violations)})
        with state._lock:
            state.sessions[session.session_id] = session
            state.session_locks[session.session_id] = threading.Lock()
        return {"session_id": session.session_id}

    def _engine_call(session_id: str, fn):
        session, lock = state.session_for(session_id)
        with lock:
            try:
                return fn(session)
            except engine.EngineError as e:
                raise ApiError(e.code, str(e))

    @app.get("/sessions/{session_id}/prompt")
    async def get_prompt(session_id: str, request: Request):
        now = state.now(request)
        prompt = _engine_call(session_id, lambda s: s.next_prompt(now))
        return _prompt_public(prompt)

    @app.post("/sessions/{session_id}/answer")
    async def post_answer(session_id: str, request: Request):
        now = state.now(request)
        body = _require_fields(await request.json(), ["selected_index"])
        if not isinstance(body["selected_index"], int):
            raise ApiError("bad-request", "selected_index must be an integer")
        outcome = _engine_call(
            session_id, lambda s: s.submit_answer(body["selected_index"], now))
        return _outcome_public(outcome)

    @app.post("/sessions/{session_id}/heartbeat")
    async def post_heartbeat(session_id: str, request: Request):
        now = state.now(request)
        _engine_call(session_id, lambda s: s.record_heartbeat(now))
        return {"recorded_at": now}

    @app.get("/sessions/{session_id}/metrics")
    async def get_metrics(session_id: str):
        metrics = _engine_call(session_id, lambda s: s.compute_metrics())
        return engine.metrics_to_dict(metrics)

    # -- media

    @app.get("/media/{ref:path}")
    async def get_media(ref: str):
        if state.media_root is None:
            raise ApiError("media-not-found", "no media root configured")
        candidate = (state.media_root / ref).resolve()
        if not candidate.is_relative_to(state.media_root):
            raise ApiError("invalid-media-ref", "path escapes the media root")
        if not candidate.is_file():
            raise ApiError("media-not-found", f"no media at {ref!r}")
        return FileResponse(candidate)

    return app


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(prog="aba-tutor-serve",
                                     description="ABA tutoring service")
    parser.add_argument("--bind", default="127.0.0.1:8080", help="host:port to listen on")
    parser.add_argument("--pack", default=None,
                        help="content pack JSON (env ABA_TUTOR_PACK overrides)")
    parser.add_argument("--media-root", default=None)
    parser.add_argument("--test-clock", action="store_true",
                        help="accept injected timestamps via X-Test-Clock")
    args = parser.parse_args(argv)

    pack_path = os.environ.get("ABA_TUTOR_PACK", args.pack)
    pack = store.load_pack(pack_path) if pack_path else None
    app = create_app(pack=pack, media_root=args.media_root, test_clock=args.test_clock)

    host, _, port = args.bind.rpartition(":")
    import uvicorn
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port), log_level="warning")
    return 0


if __name__ == "__main__":
    import sys
    sys.exit(main())
