"""HTTP facade over generation, play, feedback and audits.

Every error body is {code, stage, message}; stage is null outside game
assembly. Persisted state only changes after a successful transition, so
rejected actions can never corrupt a session. Tokens are the single
non-deterministic element of the API.
"""

import hashlib
import json
from pathlib import Path

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .assemble import assemble_game
from .config import ForgeConfig, load_config
from .errors import (
    ForgeError,
    GenerationError,
    NotFoundError,
    UnknownSuspectError,
)
from .feedback import load_exclusions, record_feedback
from .ingest import FixtureSource
from .metrics import bias_audit, score_game
from .runtime import Action, apply_action, evaluate_accusation, new_session, session_view
from .store import GameStore, new_token

STATUS_BY_CODE = {
    "not-found": 404,
    "unknown-game": 404,
    "unknown-session": 404,
    "unknown-suspect": 404,
    "duplicate-request": 409,
    "illegal-action": 409,
    "generation-failure": 422,
    "invalid-spec": 422,
    "pool-too-small": 422,
    "no-path": 422,
    "no-geo": 422,
    "insufficient-facts": 422,
    "no-liable-fact": 422,
    "malformed-source": 400,
    "parse-error": 400,
    "missing-manifest": 400,
    "checksum-mismatch": 400,
    "storage-unavailable": 503,
    "network-unreachable": 502,
}


class CreateGameRequest(BaseModel):
    victim: str
    mode: str = "wikimystery"
    seed: int = 0
    k: int | None = None
    idempotency_key: str | None = None


class ActionRequest(BaseModel):
    kind: str
    target: str
    payload: list | None = None


class FeedbackRequest(BaseModel):
    suspect: str
    kind: str = "report"


def make_source(config: ForgeConfig):
    if config.mode == "fixture":
        return FixtureSource.from_path(config.fixtures_dir)
    from .livesource import LiveSource

    return LiveSource(config)


def _request_fingerprint(request: CreateGameRequest) -> str:
    body = {"victim": request.victim, "mode": request.mode, "seed": request.seed, "k": request.k}
    return hashlib.sha256(json.dumps(body, sort_keys=True).encode("utf-8")).hexdigest()


def create_app(config: ForgeConfig | None = None, source=None) -> FastAPI:
    config = config or load_config()
    store = GameStore(config.store_dir)
    source = source if source is not None else make_source(config)
    spec_cache: dict = {}

    app = FastAPI(title="mysteryforge", version="0.1.0")
    app.state.config = config
    app.state.store = store

    def load_spec(game_id: str):
        if game_id not in spec_cache:
            spec, meta = store.load_game(game_id)
            spec_cache[game_id] = (spec, meta)
        return spec_cache[game_id]

    @app.exception_handler(ForgeError)
    def forge_error(request, exc: ForgeError):  # noqa: ARG001 (FastAPI signature)
        code, status = exc.code, STATUS_BY_CODE.get(exc.code, 400)
        if isinstance(exc, GenerationError) and isinstance(exc.__cause__, NotFoundError):
            code, status = "not-found", 404
        return JSONResponse(
            status_code=status,
            content={"code": code, "stage": exc.stage, "message": exc.message},
        )

    @app.post("/games", status_code=201)
    def create_game(request: CreateGameRequest):
        fingerprint = _request_fingerprint(request)
        if request.idempotency_key is not None:
            existing = store.idempotency_lookup(request.idempotency_key)
            if existing is not None and existing["fingerprint"] == fingerprint:
                _, meta = load_spec(existing["game_id"])
                return _game_summary(meta)
        cfg = config
        if request.k is not None:
            from dataclasses import replace

            cfg = replace(config, k=request.k)
        exclusions = load_exclusions(store.exclusion_ledger)
        spec = assemble_game(source, request.victim, request.mode, request.seed, cfg, exclusions)
        score = score_game(spec)
        game_id, _ = store.save_game(
            spec, score.to_canonical(), request.idempotency_key, fingerprint
        )
        _, meta = load_spec(game_id)
        return _game_summary(meta)

    def _game_summary(meta: dict) -> dict:
        return {
            "game_id": meta["game_id"],
            "mode": meta["mode"],
            "victim": meta["victim"],
            "seed": meta["seed"],
            "k": meta["k"],
            "score": meta["score"],
        }

    @app.get("/games/{game_id}")
    def get_game(game_id: str):
        spec, meta = load_spec(game_id)
        return {"meta": meta, "spec": spec.to_canonical()}

    @app.get("/games/{game_id}/score")
    def get_score(game_id: str):
        _, meta = load_spec(game_id)
        return meta["score"]

    @app.post("/games/{game_id}/sessions", status_code=201)
    def create_session(game_id: str):
        spec, _ = load_spec(game_id)
        state = new_session(spec, spec_ref=game_id)
        session_id = new_token()
        store.save_session(session_id, game_id, state)
        return {
            "session_id": session_id,
            "view": session_view(spec, state, config.flag_threshold),
        }

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        game_id, state = store.load_session(session_id)
        spec, _ = load_spec(game_id)
        return {
            "session_id": session_id,
            "view": session_view(spec, state, config.flag_threshold),
        }

    @app.post("/sessions/{session_id}/actions")
    def post_action(session_id: str, request: ActionRequest):
        game_id, state = store.load_session(session_id)
        spec, _ = load_spec(game_id)
        action = Action(request.kind, request.target, tuple(request.payload or ()))
        verdict = None
        if action.kind == "accuse":
            state, verdict, observation = evaluate_accusation(
                spec, state, action.target, action.payload
            )
        else:
            state, observation = apply_action(spec, state, action)
        store.save_session(session_id, game_id, state)
        if state.status == "lost":
            record_feedback(store.exclusion_ledger, spec.suspects.culprit, "unsolved", game_id)
        return {
            "observation": observation,
            "verdict": verdict,
            "status": state.status,
            "view": session_view(spec, state, config.flag_threshold),
        }

    @app.post("/games/{game_id}/feedback")
    def post_feedback(game_id: str, request: FeedbackRequest):
        spec, _ = load_spec(game_id)
        if request.suspect not in spec.suspects.members:
            raise UnknownSuspectError(f"{request.suspect} is not a suspect in {game_id}")
        excluded = record_feedback(
            store.exclusion_ledger, request.suspect, request.kind, game_id
        )
        return {"acknowledged": True, "excluded": sorted(excluded)}

    @app.get("/audits/bias")
    def get_bias_audit(limit: int = config.bias_top_n):
        specs = [load_spec(game_id)[0] for game_id in store.list_games()]
        report = bias_audit(specs, top_n=limit)
        return report.to_canonical()

    static_dir = Path(config.static_dir)
    if static_dir.is_dir():
        app.mount("/app", StaticFiles(directory=str(static_dir), html=True), name="app")

    return app
