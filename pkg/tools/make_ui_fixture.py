"""Record real service exchanges for the browser client's walkthrough test.

Three scenes, each a boot GET plus the POSTs a player would fire:

- golden-win: the reference wikimystery game played to a win, with a
  3-of-4-evidence accusation (rejected) inserted after the third pickup.
- flagged-portrait: a game whose culprit-pool includes a person whose
  portrait caption poorly matches their name; the service flags it when
  the confidence threshold sits above the caption score.
- stale-banner: a collect replayed after another tab already took the
  item, capturing the real 409 the banner must surface.

Tokens are pinned so regenerating the fixture is byte-stable.
"""

import itertools
import json
from pathlib import Path
from tempfile import TemporaryDirectory

from fastapi.testclient import TestClient

import mysteryforge.service as service_mod
import mysteryforge.store as store_mod
from mysteryforge.assemble import assemble_game
from mysteryforge.config import ForgeConfig
from mysteryforge.ingest import FixtureSource
from mysteryforge.runtime import greedy_playthrough
from mysteryforge.service import create_app

ROOT = Path(__file__).resolve().parent.parent
FIXTURES_DIR = str(ROOT / "fixtures" / "standard")
OUT = ROOT / "frontend" / "test" / "fixtures" / "walkthrough.json"

HAILEY = "https://ex.org/wiki/Hailey_Bieber"


def pin_tokens() -> None:
    counter = itertools.count(0)

    def fixed_token() -> str:
        return f"{next(counter):032x}"

    store_mod.new_token = fixed_token
    service_mod.new_token = fixed_token


class Recorder:
    def __init__(self, client: TestClient):
        self.client = client
        self.exchanges: list[dict] = []

    def get(self, path: str) -> dict:
        response = self.client.get(path)
        self.exchanges.append(
            {
                "method": "GET",
                "path": path,
                "body": None,
                "status": response.status_code,
                "response": response.json(),
            }
        )
        return response.json()

    def post(self, path: str, body: dict) -> dict:
        response = self.client.post(path, json=body)
        self.exchanges.append(
            {
                "method": "POST",
                "path": path,
                "body": body,
                "status": response.status_code,
                "response": response.json(),
            }
        )
        return response.json()


def action_body(action) -> dict:
    return {
        "kind": action.kind,
        "target": action.target,
        "payload": list(action.payload) if action.payload else None,
    }


def make_client(tmp: str, **overrides) -> TestClient:
    config = ForgeConfig(
        fixtures_dir=FIXTURES_DIR,
        store_dir=f"{tmp}/store",
        cache_dir=f"{tmp}/cache",
        **overrides,
    )
    source = FixtureSource.from_path(FIXTURES_DIR)
    return TestClient(create_app(config, source=source), raise_server_exceptions=False)


def record_golden_win(tmp: str) -> dict:
    """The reference game to a win, rejection notice included."""
    client = make_client(tmp)
    source = FixtureSource.from_path(FIXTURES_DIR)
    config = ForgeConfig(fixtures_dir=FIXTURES_DIR)
    spec = assemble_game(source, "Albert Einstein", "wikimystery", 7, config, frozenset())
    final, _ = greedy_playthrough(spec)
    log = list(final.action_log)
    assert log[-1].kind == "accuse"

    evidence_ids = sorted(spec.evidence_ids())
    third_pickup = [
        index for index, action in enumerate(log)
        if action.kind == "collect" and action.target in spec.evidence_ids()
    ][2]

    game = client.post(
        "/games", json={"victim": "Albert Einstein", "mode": "wikimystery", "seed": 7}
    ).json()
    session = client.post(f"/games/{game['game_id']}/sessions").json()
    session_id = session["session_id"]

    recorder = Recorder(client)
    recorder.get(f"/sessions/{session_id}")
    actions_path = f"/sessions/{session_id}/actions"

    for action in log[: third_pickup + 1]:
        recorder.post(actions_path, action_body(action))

    collected_so_far = [
        action.target for action in log[: third_pickup + 1]
        if action.kind == "collect" and action.target in spec.evidence_ids()
    ]
    premature = recorder.post(
        actions_path,
        {"kind": "accuse", "target": spec.suspects.culprit, "payload": sorted(collected_so_far)},
    )
    assert premature["verdict"] == "rejected", premature

    for action in log[third_pickup + 1 : -1]:
        recorder.post(actions_path, action_body(action))

    verdict = recorder.post(
        actions_path,
        {"kind": "accuse", "target": spec.suspects.culprit, "payload": evidence_ids},
    )
    assert verdict["verdict"] == "won", verdict

    return {
        "game_id": game["game_id"],
        "session_id": session_id,
        "culprit": spec.suspects.culprit,
        "exchanges": recorder.exchanges,
    }


def record_flagged_portrait(tmp: str) -> dict:
    """Play toward the NPC whose portrait the service flags at 0.6."""
    client = make_client(tmp, flag_threshold=0.6)
    source = FixtureSource.from_path(FIXTURES_DIR)
    config = ForgeConfig(fixtures_dir=FIXTURES_DIR)
    spec = assemble_game(source, "Justin Bieber", "wikimystery", 1, config, frozenset())
    final, _ = greedy_playthrough(spec)
    log = list(final.action_log)

    hailey_home = spec.npc(HAILEY).home
    arrival = next(
        index for index, action in enumerate(log)
        if action.kind == "travel" and action.target == hailey_home
    )

    game = client.post(
        "/games", json={"victim": "Justin Bieber", "mode": "wikimystery", "seed": 1}
    ).json()
    session = client.post(f"/games/{game['game_id']}/sessions").json()
    session_id = session["session_id"]

    recorder = Recorder(client)
    recorder.get(f"/sessions/{session_id}")
    for action in log[: arrival + 1]:
        recorder.post(f"/sessions/{session_id}/actions", action_body(action))

    last_view = recorder.exchanges[-1]["response"]["view"]
    flagged = [
        npc for npc in last_view["location"]["npcs"]
        if npc["portrait"] and npc["portrait"]["flagged"]
    ]
    assert any(npc["entity"] == HAILEY for npc in flagged), last_view["location"]

    return {
        "game_id": game["game_id"],
        "session_id": session_id,
        "flagged_npc": HAILEY,
        "exchanges": recorder.exchanges,
    }


def record_stale_banner(tmp: str) -> dict:
    """A collect that another tab already performed; the retry 409s."""
    client = make_client(tmp)
    source = FixtureSource.from_path(FIXTURES_DIR)
    config = ForgeConfig(fixtures_dir=FIXTURES_DIR)
    spec = assemble_game(source, "Albert Einstein", "wikimystery", 7, config, frozenset())
    final, _ = greedy_playthrough(spec)
    log = list(final.action_log)
    first_collect = next(index for index, action in enumerate(log) if action.kind == "collect")

    game = client.post(
        "/games", json={"victim": "Albert Einstein", "mode": "wikimystery", "seed": 7}
    ).json()
    session = client.post(f"/games/{game['game_id']}/sessions").json()
    session_id = session["session_id"]
    actions_path = f"/sessions/{session_id}/actions"

    # march to the item, stop just short of picking it up
    for action in log[:first_collect]:
        client.post(actions_path, json=action_body(action))

    recorder = Recorder(client)
    recorder.get(f"/sessions/{session_id}")  # tab A's view: item still there

    # tab B takes it (unrecorded)
    taken = client.post(actions_path, json=action_body(log[first_collect]))
    assert taken.status_code == 200

    # tab A's click now bounces
    stale = recorder.post(actions_path, action_body(log[first_collect]))
    assert recorder.exchanges[-1]["status"] == 409, stale

    return {
        "game_id": game["game_id"],
        "session_id": session_id,
        "collect_id": log[first_collect].target,
        "exchanges": recorder.exchanges,
    }


def main() -> None:
    pin_tokens()
    with TemporaryDirectory() as tmp:
        scenes = {
            "golden-win": record_golden_win(tmp),
            "flagged-portrait": record_flagged_portrait(tmp),
            "stale-banner": record_stale_banner(tmp),
        }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps({"scenes": scenes}, indent=1, ensure_ascii=False) + "\n", encoding="utf-8")
    total = sum(len(scene["exchanges"]) for scene in scenes.values())
    print(f"wrote {OUT} ({total} exchanges)")


if __name__ == "__main__":
    main()
