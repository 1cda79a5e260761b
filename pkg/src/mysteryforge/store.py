"""File-backed persistence for generated games and play sessions.

Layout under one root:
  games/<game-id>/spec.json + meta.json   (directory per game)
  sessions/<session-id>.json
  idempotency/<key-hash>.json
  exclusions.jsonl                        (feedback ledger)

Every write lands in a temporary sibling first and is renamed into place,
so a crash mid-write never leaves a readable partial record. Tokens are
random 128-bit hex strings — the one non-deterministic element.
"""

import hashlib
import json
import os
import secrets
from datetime import datetime, timezone
from pathlib import Path

from .canonical import canonical_bytes, canonical_loads
from .errors import DuplicateRequestError, StorageUnavailableError, UnknownGameError, UnknownSessionError
from .gamespec import GameSpec
from .runtime import GameState

_TMP_PREFIX = ".tmp-"


def new_token() -> str:
    return secrets.token_hex(16)


def _utc_now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


class GameStore:
    def __init__(self, root):
        self.root = Path(root)
        self.games_dir = self.root / "games"
        self.sessions_dir = self.root / "sessions"
        self.idempotency_dir = self.root / "idempotency"
        for directory in (self.games_dir, self.sessions_dir, self.idempotency_dir):
            directory.mkdir(parents=True, exist_ok=True)

    # -- atomic primitives -------------------------------------------------

    def _write_file_atomic(self, path: Path, payload: bytes) -> None:
        tmp = path.parent / f"{_TMP_PREFIX}{path.name}-{secrets.token_hex(4)}"
        tmp.write_bytes(payload)
        os.replace(tmp, path)

    def _write_game_dir(self, game_id: str, files: dict) -> None:
        """Materialize a game directory in one atomic rename."""
        final = self.games_dir / game_id
        tmp = self.games_dir / f"{_TMP_PREFIX}{game_id}"
        tmp.mkdir()
        try:
            for name, payload in files.items():
                (tmp / name).write_bytes(payload)
            os.replace(tmp, final)
        except OSError:
            for leftover in tmp.glob("*"):
                leftover.unlink()
            if tmp.exists():
                tmp.rmdir()
            raise

    # -- games ---------------------------------------------------------------

    def save_game(
        self,
        spec: GameSpec,
        score: dict,
        idempotency_key: str | None = None,
        request_fingerprint: str | None = None,
    ) -> tuple:
        """Persist a validated spec; returns (game_id, created flag)."""
        if idempotency_key is not None:
            existing = self.idempotency_lookup(idempotency_key)
            if existing is not None:
                if existing["fingerprint"] == request_fingerprint:
                    return existing["game_id"], False
                raise DuplicateRequestError("idempotency key reused with a different request")
        game_id = new_token()
        meta = {
            "game_id": game_id,
            "created_at": _utc_now(),
            "mode": spec.mode,
            "victim": spec.victim,
            "seed": spec.seed,
            "k": spec.k,
            "score": score,
            "generator_version": spec.generator_version,
        }
        try:
            self._write_game_dir(
                game_id,
                {
                    "spec.json": spec.canonical_form(),
                    "meta.json": canonical_bytes(meta),
                },
            )
            if idempotency_key is not None:
                record = {"game_id": game_id, "fingerprint": request_fingerprint}
                self._write_file_atomic(
                    self._idempotency_path(idempotency_key),
                    json.dumps(record, sort_keys=True).encode("utf-8"),
                )
        except OSError as exc:
            raise StorageUnavailableError(f"cannot persist game: {exc}") from exc
        return game_id, True

    def load_game(self, game_id: str) -> tuple:
        """Returns (spec, meta)."""
        directory = self.games_dir / game_id
        spec_path = directory / "spec.json"
        meta_path = directory / "meta.json"
        if game_id.startswith(_TMP_PREFIX) or not spec_path.exists() or not meta_path.exists():
            raise UnknownGameError(f"no game {game_id}")
        spec = GameSpec.from_dict(canonical_loads(spec_path.read_text(encoding="utf-8")))
        meta = canonical_loads(meta_path.read_text(encoding="utf-8"))
        return spec, meta

    def list_games(self) -> list:
        return sorted(
            entry.name
            for entry in self.games_dir.iterdir()
            if entry.is_dir()
            and not entry.name.startswith(_TMP_PREFIX)
            and (entry / "spec.json").exists()
            and (entry / "meta.json").exists()
        )

    # -- sessions --------------------------------------------------------------

    def save_session(self, session_id: str, game_id: str, state: GameState) -> None:
        record = {"session_id": session_id, "game_id": game_id, "state": state.to_canonical()}
        try:
            self._write_file_atomic(
                self.sessions_dir / f"{session_id}.json", canonical_bytes(record)
            )
        except OSError as exc:
            raise StorageUnavailableError(f"cannot persist session: {exc}") from exc

    def load_session(self, session_id: str) -> tuple:
        """Returns (game_id, state)."""
        path = self.sessions_dir / f"{session_id}.json"
        if not path.exists():
            raise UnknownSessionError(f"no session {session_id}")
        record = canonical_loads(path.read_text(encoding="utf-8"))
        return record["game_id"], GameState.from_dict(record["state"])

    # -- idempotency -------------------------------------------------------------

    def _idempotency_path(self, key: str) -> Path:
        digest = hashlib.sha256(key.encode("utf-8")).hexdigest()
        return self.idempotency_dir / f"{digest}.json"

    def idempotency_lookup(self, key: str) -> dict | None:
        path = self._idempotency_path(key)
        if not path.exists():
            return None
        return json.loads(path.read_text(encoding="utf-8"))

    @property
    def exclusion_ledger(self) -> Path:
        return self.root / "exclusions.jsonl"
