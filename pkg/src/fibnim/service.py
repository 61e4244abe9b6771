"""HTTP play service.

Wraps the solver in a small JSON API: create a game session, submit human
moves, and let the engine answer synchronously.  Sessions live in memory,
expire after an idle timeout, and can optionally be snapshotted to disk
across restarts.

Every error body has the same shape: {"code", "message", "detail"}.
"""

from __future__ import annotations

import json
import secrets
import threading
import time
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from typing import Literal

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .fibcore import INF, is_finite
from .solver import (
    DEFAULT_MEMO_BUDGET,
    MemoBudgetExceeded,
    Position,
    Solver,
    engine_move,
)

MAX_PILES = 8
MAX_PILE = 16_383


class ApiError(Exception):
    def __init__(self, status_code: int, code: str, message: str, detail=None):
        super().__init__(message)
        self.status_code = status_code
        self.code = code
        self.message = message
        self.detail = detail


def _bound_json(bound):
    return "inf" if not is_finite(bound) else int(bound)


def _bound_from_json(value):
    if value is None or value == "inf":
        return INF
    return int(value)


@dataclass
class Session:
    id: str
    piles: list[int]
    bound: object
    dynamic: int
    human_first: bool
    hints_enabled: bool
    status: str = "in-progress"
    history: list[dict] = field(default_factory=list)
    touched: float = field(default_factory=time.time)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def view(self) -> dict:
        winner = {
            "human-won": "human", "engine-won": "engine",
        }.get(self.status)
        return {
            "id": self.id,
            "piles": list(self.piles),
            "bound": _bound_json(self.bound),
            "dynamic": self.dynamic,
            "human_first": self.human_first,
            "hints_enabled": self.hints_enabled,
            "status": self.status,
            "winner": winner,
            "turn": "human" if self.status == "in-progress" else None,
            "history": list(self.history),
        }

    def snapshot(self) -> dict:
        return {
            "id": self.id,
            "piles": list(self.piles),
            "bound": _bound_json(self.bound),
            "dynamic": self.dynamic,
            "human_first": self.human_first,
            "hints_enabled": self.hints_enabled,
            "status": self.status,
            "history": list(self.history),
            "touched": self.touched,
        }

    @classmethod
    def from_snapshot(cls, data: dict) -> "Session":
        return cls(
            id=data["id"],
            piles=[int(v) for v in data["piles"]],
            bound=_bound_from_json(data["bound"]),
            dynamic=int(data["dynamic"]),
            human_first=bool(data["human_first"]),
            hints_enabled=bool(data["hints_enabled"]),
            status=data["status"],
            history=list(data["history"]),
            touched=float(data.get("touched", time.time())),
        )


class _Store:
    """Session registry with lazy idle-timeout eviction."""

    def __init__(self, ttl: float):
        self.ttl = ttl
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def _evict(self) -> None:
        now = time.time()
        dead = [
            sid for sid, s in self._sessions.items()
            if now - s.touched > self.ttl
        ]
        for sid in dead:
            del self._sessions[sid]

    def add(self, session: Session) -> None:
        with self._lock:
            self._evict()
            self._sessions[session.id] = session

    def get(self, session_id: str) -> Session:
        with self._lock:
            self._evict()
            session = self._sessions.get(session_id)
            if session is None:
                raise ApiError(
                    404, "not_found", f"no session {session_id!r}",
                )
            session.touched = time.time()
            return session

    def count(self) -> int:
        with self._lock:
            self._evict()
            return len(self._sessions)

    def dump(self) -> list[dict]:
        with self._lock:
            return [s.snapshot() for s in self._sessions.values()]

    def load(self, snapshots: list[dict]) -> None:
        with self._lock:
            for data in snapshots:
                session = Session.from_snapshot(data)
                self._sessions[session.id] = session


class CreateSessionRequest(BaseModel):
    piles: list[int]
    bound: int | Literal["inf"] | None = None
    dynamic: Literal[1, 2] = 2
    human_first: bool = True
    hints_enabled: bool = True


class MoveRequest(BaseModel):
    pile_index: int
    take: int


def _max_take(session: Session, pile: int) -> int:
    return pile if not is_finite(session.bound) else min(pile, session.bound)


def _engine_reply(session: Session, solver: Solver, verify: bool) -> None:
    """Apply one engine move to the session.  Caller holds the session lock."""
    pos = Position(session.piles, session.bound, session.dynamic)
    move = engine_move(pos, solver)
    if verify and solver.outcome(pos) == "N":
        if solver.outcome(pos.take(move)) != "P":
            raise RuntimeError("engine gave up a won position")
    index = session.piles.index(move.pile_value)
    session.piles[index] -= move.take
    session.bound = session.dynamic * move.take
    session.history.append({
        "actor": "engine",
        "pile_index": index,
        "pile_before": move.pile_value,
        "take": move.take,
        "piles_after": list(session.piles),
        "bound_after": _bound_json(session.bound),
    })
    if not any(session.piles):
        session.status = "engine-won"


def create_app(
    static_dir: str | None = None,
    solver: Solver | None = None,
    session_ttl: float = 3600.0,
    snapshot_path: str | None = None,
    verify_engine: bool = True,
    budget: int | None = None,
) -> FastAPI:
    solver = solver or Solver(budget or DEFAULT_MEMO_BUDGET)
    store = _Store(session_ttl)

    @asynccontextmanager
    async def lifespan(_app: FastAPI):
        if snapshot_path is not None:
            try:
                with open(snapshot_path) as fh:
                    store.load(json.load(fh))
            except FileNotFoundError:
                pass
            except (json.JSONDecodeError, KeyError, ValueError):
                pass  # unreadable snapshot: start empty rather than crash
        yield
        if snapshot_path is not None:
            with open(snapshot_path, "w") as fh:
                json.dump(store.dump(), fh)

    app = FastAPI(title="fibnim play service", lifespan=lifespan)
    app.state.store = store
    app.state.solver = solver

    @app.exception_handler(ApiError)
    async def _on_api_error(_request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status_code,
            content={
                "code": exc.code, "message": exc.message, "detail": exc.detail,
            },
        )

    @app.exception_handler(RequestValidationError)
    async def _on_validation(_request: Request, exc: RequestValidationError):
        detail = [
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}"
            for err in exc.errors()
        ]
        return JSONResponse(
            status_code=400,
            content={
                "code": "invalid_request",
                "message": "request body failed validation",
                "detail": detail,
            },
        )

    @app.exception_handler(MemoBudgetExceeded)
    async def _on_budget(_request: Request, exc: MemoBudgetExceeded):
        return JSONResponse(
            status_code=500,
            content={
                "code": "memo_budget_exceeded", "message": str(exc),
                "detail": None,
            },
        )

    @app.post("/api/session")
    def create_session(req: CreateSessionRequest) -> dict:
        if not 1 <= len(req.piles) <= MAX_PILES:
            raise ApiError(
                400, "invalid_position",
                f"between 1 and {MAX_PILES} piles", detail=req.piles,
            )
        if any(v < 0 or v > MAX_PILE for v in req.piles):
            raise ApiError(
                400, "invalid_position",
                f"pile sizes must be within 0..{MAX_PILE}", detail=req.piles,
            )
        if not any(req.piles):
            raise ApiError(
                400, "invalid_position", "at least one pile must be nonempty",
            )
        bound = _bound_from_json(req.bound)
        if is_finite(bound) and bound < 1:
            raise ApiError(
                400, "invalid_position", "bound must be at least 1 or 'inf'",
            )
        session = Session(
            id=secrets.token_hex(8),
            piles=list(req.piles),
            bound=bound,
            dynamic=req.dynamic,
            human_first=req.human_first,
            hints_enabled=req.hints_enabled,
        )
        if not req.human_first:
            _engine_reply(session, solver, verify_engine)
        store.add(session)
        return session.view()

    @app.get("/api/session/{session_id}")
    def get_session(session_id: str) -> dict:
        return store.get(session_id).view()

    @app.post("/api/session/{session_id}/move")
    def post_move(session_id: str, req: MoveRequest) -> dict:
        session = store.get(session_id)
        with session.lock:
            if session.status != "in-progress":
                raise ApiError(
                    409, "game_over",
                    f"session already finished: {session.status}",
                )
            if not 0 <= req.pile_index < len(session.piles):
                raise ApiError(
                    400, "illegal_move",
                    f"pile_index must be within 0..{len(session.piles) - 1}",
                    detail={"pile_index": req.pile_index},
                )
            pile = session.piles[req.pile_index]
            limit = _max_take(session, pile)
            if req.take < 1 or req.take > limit:
                raise ApiError(
                    400, "illegal_move",
                    f"take must be between 1 and {limit}",
                    detail={
                        "pile_index": req.pile_index,
                        "pile": pile,
                        "bound": _bound_json(session.bound),
                        "max_take": limit,
                    },
                )
            session.piles[req.pile_index] = pile - req.take
            session.bound = session.dynamic * req.take
            session.history.append({
                "actor": "human",
                "pile_index": req.pile_index,
                "pile_before": pile,
                "take": req.take,
                "piles_after": list(session.piles),
                "bound_after": _bound_json(session.bound),
            })
            if not any(session.piles):
                session.status = "human-won"
            else:
                _engine_reply(session, solver, verify_engine)
            return session.view()

    @app.get("/api/session/{session_id}/hint")
    def get_hint(session_id: str) -> dict:
        session = store.get(session_id)
        with session.lock:
            if not session.hints_enabled:
                raise ApiError(
                    403, "hints_disabled", "session was created without hints",
                )
            if session.status != "in-progress":
                raise ApiError(
                    409, "game_over",
                    f"session already finished: {session.status}",
                )
            pos = Position(session.piles, session.bound, session.dynamic)
            wins = solver.winning_moves(pos)
            if not wins:
                return {"hint": None, "outcome": "P"}
            move = wins[0]
            return {
                "hint": {
                    "pile_index": session.piles.index(move.pile_value),
                    "take": move.take,
                },
                "outcome": "N",
            }

    @app.get("/api/health")
    def health() -> dict:
        return {
            "status": "ok",
            "sessions": store.count(),
            "memo": solver.memo_size,
        }

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
