import json

import pytest

from mysteryforge.errors import StorageUnavailableError
from mysteryforge.feedback import ledger_rows, load_exclusions, record_feedback

from .worlds import T


def test_missing_ledger_means_no_exclusions(tmp_path):
    assert load_exclusions(tmp_path / "absent.jsonl") == set()
    assert ledger_rows(tmp_path / "absent.jsonl") == []


def test_rows_append_and_exclusions_dedupe(tmp_path):
    ledger = tmp_path / "exclusions.jsonl"
    assert record_feedback(ledger, T + "A", "report", game_id="g1") == {T + "A"}
    assert record_feedback(ledger, T + "B", "unsolved") == {T + "A", T + "B"}
    assert record_feedback(ledger, T + "A", "report", game_id="g2") == {T + "A", T + "B"}

    rows = ledger_rows(ledger)
    assert [row["suspect"] for row in rows] == [T + "A", T + "B", T + "A"]
    assert rows[0]["game"] == "g1" and rows[1]["game"] is None
    assert all(set(row) == {"suspect", "kind", "at", "game"} for row in rows)
    assert load_exclusions(ledger) == {T + "A", T + "B"}


def test_ledger_lines_are_valid_json(tmp_path):
    ledger = tmp_path / "exclusions.jsonl"
    record_feedback(ledger, T + "A", "report")
    record_feedback(ledger, T + "B", "report")
    lines = ledger.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 2
    for line in lines:
        json.loads(line)


def test_unknown_kind_rejected(tmp_path):
    with pytest.raises(ValueError):
        record_feedback(tmp_path / "exclusions.jsonl", T + "A", "praise")


def test_parent_directory_created(tmp_path):
    ledger = tmp_path / "deep" / "nested" / "exclusions.jsonl"
    record_feedback(ledger, T + "A", "report")
    assert ledger.exists()


def test_unreadable_ledger_raises(tmp_path, monkeypatch):
    ledger = tmp_path / "exclusions.jsonl"
    record_feedback(ledger, T + "A", "report")
    real_read = type(ledger).read_text

    def failing_read(self, *args, **kwargs):
        if self.name == "exclusions.jsonl":
            raise OSError("io error")
        return real_read(self, *args, **kwargs)

    monkeypatch.setattr(type(ledger), "read_text", failing_read)
    with pytest.raises(StorageUnavailableError):
        load_exclusions(ledger)


def test_unwritable_ledger_raises(tmp_path, monkeypatch):
    ledger = tmp_path / "exclusions.jsonl"
    real_open = type(ledger).open

    def failing_open(self, *args, **kwargs):
        if self.name == "exclusions.jsonl":
            raise OSError("read-only filesystem")
        return real_open(self, *args, **kwargs)

    monkeypatch.setattr(type(ledger), "open", failing_open)
    with pytest.raises(StorageUnavailableError):
        record_feedback(ledger, T + "A", "report")
