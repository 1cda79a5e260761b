"""Player feedback ledger driving suspect exclusion.

An append-only JSONL file: one row per feedback event, never rewritten.
The exclusion set handed to pool building is the distinct suspects seen in
the ledger; repeated reports of one suspect add audit rows, not entries.
"""

import json
from datetime import datetime, timezone
from pathlib import Path

from .errors import StorageUnavailableError

FEEDBACK_KINDS = ("report", "unsolved")


def _utc_now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def record_feedback(ledger_path, suspect: str, kind: str, game_id: str | None = None) -> set:
    """Append one feedback row; returns the updated exclusion set."""
    if kind not in FEEDBACK_KINDS:
        raise ValueError(f"unknown feedback kind {kind!r}")
    path = Path(ledger_path)
    row = {"suspect": suspect, "kind": kind, "at": _utc_now(), "game": game_id}
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("a", encoding="utf-8") as handle:
            handle.write(json.dumps(row, ensure_ascii=False, sort_keys=True) + "\n")
            handle.flush()
    except OSError as exc:
        raise StorageUnavailableError(f"cannot append to feedback ledger: {exc}") from exc
    return load_exclusions(path)


def load_exclusions(ledger_path) -> set:
    """Distinct suspects named anywhere in the ledger."""
    path = Path(ledger_path)
    if not path.exists():
        return set()
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise StorageUnavailableError(f"cannot read feedback ledger: {exc}") from exc
    return {json.loads(line)["suspect"] for line in text.splitlines() if line.strip()}


def ledger_rows(ledger_path) -> list:
    """Every audit row, oldest first."""
    path = Path(ledger_path)
    if not path.exists():
        return []
    return [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]
