"""Live session service: a WebSocket endpoint speaking the frame protocol.

Client -> server messages:
    {"type": "start", "user": str, "config": {...}}    (config optional)
    {"type": "frame", "token": str, "packet": {...}}
    {"type": "end", "token": str}

Server -> client:
    {"type": "started", "token": str}
    {"type": "frame_result", "t_ms": int, "result": {...},
     "instructions": [{"category": str, "text": str}], "colors": {...}}
    {"type": "summary", ...}
    {"type": "error", "code": str, "detail": str}

Frame timestamps are client capture times; a non-monotonic frame is dropped
with an error message and the session continues. Sessions do not survive a
service restart; only the history store is durable.
"""

from __future__ import annotations

import datetime as dt
import time
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from . import mlp
from .classify import result_to_dict
from .config import EngineConfig, config_from_dict
from .errors import BadConfig, CelloEvalError, EmptySession, MalformedRecord, NonMonotonicTime
from .runner import SessionRunner, model_digest
from .session import SessionRecord, SessionStore
from .streams import canonical_json, parse_frame_line


@dataclass
class _LiveSession:
    user_id: str
    runner: SessionRunner
    started_at: str
    latencies_ms: list[float] = field(default_factory=list)


def _percentile(values: list[float], q: float) -> float:
    ordered = sorted(values)
    idx = min(len(ordered) - 1, int(round(q * (len(ordered) - 1))))
    return ordered[idx]


class EvaluatorService:
    def __init__(
        self,
        wrist_model: mlp.MlpModel,
        elbow_model: mlp.MlpModel,
        store: SessionStore,
        defaults: EngineConfig | None = None,
    ):
        self.wrist_model = wrist_model
        self.elbow_model = elbow_model
        self.store = store
        self.defaults = defaults or EngineConfig()
        self.sessions: dict[str, _LiveSession] = {}
        self._wrist_digest = model_digest(wrist_model)
        self._elbow_digest = model_digest(elbow_model)

    def start_session(self, user_id: str, overrides: dict | None) -> str:
        config = self.defaults
        if overrides:
            config = config_from_dict(overrides, base=self.defaults)
        token = uuid.uuid4().hex
        self.sessions[token] = _LiveSession(
            user_id=user_id,
            runner=SessionRunner(self.wrist_model, self.elbow_model, config),
            started_at=dt.datetime.now(dt.timezone.utc).isoformat(),
        )
        return token

    def submit_frame(self, token: str, packet_raw: dict) -> dict:
        live = self.sessions.get(token)
        if live is None:
            return _error("unknown_session", f"no session for token {token!r}")
        try:
            packet = parse_frame_line(canonical_json(packet_raw))
        except MalformedRecord as exc:
            return _error("malformed_packet", str(exc))
        t0 = time.perf_counter()
        try:
            out = live.runner.process(packet)
        except NonMonotonicTime as exc:
            return _error("non_monotonic_time", str(exc))
        live.latencies_ms.append((time.perf_counter() - t0) * 1000.0)
        return {
            "type": "frame_result",
            "t_ms": packet.t_ms,
            "result": result_to_dict(out.result),
            "instructions": [
                {"category": i.category.value, "text": i.text} for i in out.instructions
            ],
            "colors": out.colors,
        }

    def end_session(self, token: str) -> dict:
        live = self.sessions.get(token)
        if live is None:
            return _error("unknown_session", f"no session for token {token!r}")
        try:
            summary = live.runner.summarize()
        except EmptySession as exc:
            del self.sessions[token]
            return _error("empty_session", str(exc))
        p95 = _percentile(live.latencies_ms, 0.95) if live.latencies_ms else None
        record = SessionRecord(
            session_id=token,
            user_id=live.user_id,
            started_at=live.started_at,
            summary=summary,
            config_snapshot=live.runner.config.snapshot(),
            wrist_model_digest=self._wrist_digest,
            elbow_model_digest=self._elbow_digest,
            stream_digest=live.runner.stream_digest(),
            latency_ms_p95=p95,
        )
        self.store.persist(record)
        del self.sessions[token]
        return {
            "type": "summary",
            "session_id": token,
            "summary": summary.to_dict(),
            "latency_ms_p95": p95,
        }

    def handle(self, msg: dict) -> dict:
        """Dispatch one protocol message to a response message."""
        if not isinstance(msg, dict) or "type" not in msg:
            return _error("bad_message", "message must be an object with a type")
        kind = msg["type"]
        if kind == "start":
            user = msg.get("user")
            if not isinstance(user, str) or not user:
                return _error("bad_message", "start requires a non-empty user")
            try:
                token = self.start_session(user, msg.get("config"))
            except BadConfig as exc:
                return _error("bad_config", str(exc))
            return {"type": "started", "token": token}
        if kind == "frame":
            packet = msg.get("packet")
            if not isinstance(packet, dict):
                return _error("bad_message", "frame requires a packet object")
            return self.submit_frame(msg.get("token", ""), packet)
        if kind == "end":
            return self.end_session(msg.get("token", ""))
        return _error("bad_message", f"unknown message type {kind!r}")


def _error(code: str, detail: str) -> dict:
    return {"type": "error", "code": code, "detail": detail}


def create_app(
    wrist_model: mlp.MlpModel,
    elbow_model: mlp.MlpModel,
    store: SessionStore,
    defaults: EngineConfig | None = None,
) -> FastAPI:
    app = FastAPI(title="cello-eval")
    service = EvaluatorService(wrist_model, elbow_model, store, defaults)
    app.state.service = service

    @app.get("/healthz")
    def healthz() -> dict:
        return {"ok": True, "sessions": len(service.sessions)}

    @app.get("/history/{user_id}")
    def history(user_id: str) -> list[dict]:
        return [r.to_dict() for r in service.store.list_history(user_id)]

    @app.websocket("/ws")
    async def ws(websocket: WebSocket) -> None:
        await websocket.accept()
        try:
            while True:
                try:
                    msg = await websocket.receive_json()
                except ValueError:
                    await websocket.send_json(_error("bad_message", "invalid JSON"))
                    continue
                try:
                    reply = service.handle(msg)
                except CelloEvalError as exc:
                    reply = _error("engine_error", str(exc))
                await websocket.send_json(reply)
        except WebSocketDisconnect:
            pass

    return app
