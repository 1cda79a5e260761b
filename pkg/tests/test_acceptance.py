"""Release gate: every shipping requirement, one printed verdict line each.

Each test exercises one requirement end to end and prints exactly one
``[PASS]``/``[FAIL]`` line (to the real stdout, so the verdicts survive
pytest's capture). Supporting detail rides along in parentheses.
"""

import json
import time
from pathlib import Path
from random import Random

import pytest
from fastapi.testclient import TestClient

from mysteryforge.assemble import assemble_game, validate_solvability
from mysteryforge.canonical import canonical_bytes, canonical_dumps
from mysteryforge.errors import NoPathError
from mysteryforge.graph import find_path
from mysteryforge.ingest import FixtureSource
from mysteryforge.metrics import (
    DEFAULT_TOP_N,
    bias_audit,
    functionality_counts,
    score_transformation,
)
from mysteryforge.plot import evolve_subset, greedy_subset
from mysteryforge.runtime import (
    apply_action,
    evaluate_accusation,
    greedy_playthrough,
    new_session,
)
from mysteryforge.service import create_app

from .conftest import STANDARD_FIXTURES
from .oracles import best_subset_fitness, shortest_path_ref
from .test_graph import random_graph
from .test_metrics import all_verbatim, geo_spec
from .test_plot import synthetic_fitness
from .test_runtime import replay
from .worlds import T, adjacency_of, place

GOLDEN = Path(__file__).parent / "golden" / "walkthrough.json"

BATCH_SECONDS_BUDGET = 60.0
BATCH_SEEDS = range(1, 101)


@pytest.fixture
def gate(request):
    """Run one requirement; print its verdict line; fail the test on FAIL."""
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")

    def verdict(name: str, passed: bool, detail: str = "") -> None:
        marker = "PASS" if passed else "FAIL"
        suffix = f"  ({detail})" if detail else ""
        line = f"[{marker}] {name}{suffix}"
        if reporter is not None:
            reporter.write_line(line)
        else:
            print(line)

    def run(name: str, body) -> None:
        try:
            detail = body() or ""
        except BaseException as exc:
            verdict(name, False, f"{type(exc).__name__}: {exc}")
            raise
        verdict(name, True, detail)

    return run


def test_batch_solvability(gate, forge_config):
    def body():
        source = FixtureSource.from_path(STANDARD_FIXTURES)
        started = time.perf_counter()
        for seed in BATCH_SEEDS:
            spec = assemble_game(
                source, "Albert Einstein", "wikimystery", seed, forge_config
            )
            report = validate_solvability(spec)
            assert report.passed, f"seed {seed} fails {report.failed_names()}"
            final, _ = greedy_playthrough(spec)
            assert final.status == "won", f"seed {seed} not winnable"
        elapsed = time.perf_counter() - started
        assert elapsed < BATCH_SECONDS_BUDGET, f"batch took {elapsed:.1f}s"
        return f"{len(BATCH_SEEDS)} games validated and won in {elapsed:.1f}s"

    gate("batch-solvability", body)


def test_deterministic_regeneration(gate, forge_config):
    def body():
        jobs = [
            ("Albert Einstein", "wikimystery", 1),
            ("Albert Einstein", "wikimystery", 7),
            ("Justin Bieber", "data-agent", 7),
            ("Ada Lovelace", "linkpath", 4),
        ]
        for victim, mode, seed in jobs:
            first = assemble_game(
                FixtureSource.from_path(STANDARD_FIXTURES), victim, mode, seed, forge_config
            )
            second = assemble_game(
                FixtureSource.from_path(STANDARD_FIXTURES), victim, mode, seed, forge_config
            )
            assert first.canonical_form() == second.canonical_form(), (victim, mode, seed)

        from tools.make_golden import build_walkthrough

        assert canonical_bytes(build_walkthrough()) == GOLDEN.read_bytes(), (
            "golden walkthrough regeneration drifted"
        )
        return f"{len(jobs)} regenerations byte-identical, golden trace stable"

    gate("deterministic-regeneration", body)


def test_subset_search_oracle(gate):
    def body():
        trials = 25
        hits = 0
        for trial in range(trials):
            rng = Random(9000 + trial)
            pool = [f"p{i:02d}" for i in range(rng.randint(8, 20))]
            fitness = synthetic_fitness(pool, 9100 + trial)
            evolved = evolve_subset(pool, 5, seed=trial, fitness=fitness)
            greedy = greedy_subset(pool, 5, fitness)
            assert fitness(list(evolved)) >= fitness(list(greedy)) - 1e-12, (
                f"trial {trial}: search below greedy baseline"
            )
            if fitness(list(evolved)) >= best_subset_fitness(pool, 5, fitness) - 1e-9:
                hits += 1
        assert hits >= 23, f"only {hits}/{trials} exhaustive optima found"
        return f"{hits}/{trials} exhaustive optima, never below greedy"

    gate("subset-search-oracle", body)


def test_shortest_path_oracle(gate):
    def body():
        graphs = 50
        checked = 0
        for index in range(graphs):
            graph = random_graph(4 + index % 7, 1300 + index)
            adjacency = adjacency_of(graph)
            nodes = sorted(graph.entities)
            for src in nodes:
                assert find_path(graph, src, src).nodes == (src,)
                for dst in nodes:
                    if src == dst:
                        continue
                    expected = shortest_path_ref(adjacency, src, dst)
                    try:
                        got = find_path(graph, src, dst).nodes
                    except NoPathError:
                        got = None
                    assert got == (tuple(expected) if expected else None), (
                        f"graph {index}: {src} -> {dst}"
                    )
                    checked += 1
        return f"{graphs} graphs, {checked} pairs match the exhaustive reference"

    gate("shortest-path-oracle", body)


def test_mode_contracts(gate, assembled):
    def body():
        wiki = assembled(seed=7)
        report = validate_solvability(wiki)
        assert report.passed, report.failed_names()
        members = wiki.suspects.members
        assert wiki.suspects.culprit in members and len(set(members)) == len(members)
        assert len(wiki.evidence) == 4, f"{len(wiki.evidence)} evidence pieces"

        final, _ = greedy_playthrough(wiki)
        evidence_ids = sorted(wiki.evidence_ids())
        partial_log = [
            a
            for a in final.action_log[:-1]
            if not (a.kind == "collect" and a.target == evidence_ids[-1])
        ]
        state = replay(wiki, partial_log)
        assert len(wiki.evidence_ids() & state.collected) == 3
        _, outcome, _ = evaluate_accusation(
            wiki, state, wiki.suspects.culprit, tuple(sorted(state.collected & wiki.evidence_ids()))
        )
        assert outcome == "rejected", "accusation with 3/4 evidence must bounce"

        agent = assembled(mode="data-agent", seed=7)
        altered = [
            (npc.entity, line)
            for npc in agent.npcs
            for line in npc.script.lines
            if line.transformation.kind == "altered"
        ]
        assert len(altered) == 1, f"{len(altered)} altered lines"
        assert altered[0][0] == agent.suspects.culprit
        assert agent.truth_clue_ids(), "no collectible truth behind the lie"
        won, _ = greedy_playthrough(agent)
        assert won.status == "won"
        assert agent.truth_clue_ids() & won.collected
        return "wikimystery holds 1 culprit + 4 evidence; the lie is unique and disprovable"

    gate("mode-contracts", body)


def test_metrics_audit(gate, assembled):
    def body():
        from .test_metrics import (
            _evidence,
            _item,
            bare_spec,
            dialog_line,
            npc_with,
        )

        verbatim = all_verbatim(assembled(seed=7))
        assert score_transformation(verbatim) == 0.0, "all-verbatim must score exactly 0"

        import dataclasses

        from mysteryforge.dialog import TransformationRecord
        from mysteryforge.gamespec import GameSpec

        drifted = GameSpec.from_dict(json.loads(verbatim.canonical_text()))
        line = drifted.npcs[0].script.lines[0]
        drifted.npcs[0].script.lines[0] = dataclasses.replace(
            line,
            transformation=TransformationRecord("altered", line.text, "reworded", 0.4),
        )
        assert score_transformation(drifted) > 0.0, "one altered line must raise the score"

        mixed = bare_spec(
            npcs=[
                npc_with(
                    T + "A",
                    T + "Home",
                    [dialog_line(clue_id="clue:001"), dialog_line(), dialog_line(), dialog_line()],
                )
            ],
            items=[_item(T + "Notes", T + "Home")],
            evidence=[_evidence(T + "B", T + "Home"), _evidence(T + "C", T + "Home")],
        )
        assert functionality_counts(mixed) == (4, 7)
        gating = bare_spec(
            npcs=[npc_with(T + "A", T + "Home", [dialog_line(clue_id="clue:001")])],
        )
        assert functionality_counts(gating) == (1, 1)
        decorative = bare_spec(
            npcs=[npc_with(T + "A", T + "Home", [dialog_line(), dialog_line()])],
        )
        assert functionality_counts(decorative) == (0, 2)

        berlin = geo_spec("Berlin", chains=[("Berlin", "Germany")])
        missing = place("Lyon")
        erewhon = bare_spec(locations=[(missing.id, None)], entities={missing.id: missing})
        report = bias_audit([berlin] * 3 + [erewhon])
        assert report.location_frequency == {"Europe": 3}
        assert report.unmapped == [T + "Lyon"]
        assert report.top_locations == [(T + "Berlin", 3), (T + "Lyon", 1)]
        assert DEFAULT_TOP_N == 8
        assert len(bias_audit([assembled(seed=s) for s in (1, 2, 3)]).top_locations) <= 8
        return "transformation exact, functionality hand counts, bias tally verified"

    gate("metrics-audit", body)


def test_service_equivalence(gate, forge_config, standard_source, monkeypatch):
    def body():
        golden = json.loads(GOLDEN.read_text(encoding="utf-8"))
        app = create_app(forge_config, source=standard_source)
        with TestClient(app) as client:
            created = client.post(
                "/games",
                json={
                    "victim": golden["victim"],
                    "mode": golden["mode"],
                    "seed": golden["seed"],
                },
            )
            assert created.status_code == 201
            game_id = created.json()["game_id"]
            served_spec = client.get(f"/games/{game_id}").json()["spec"]
            assert canonical_dumps(served_spec) == canonical_dumps(golden["spec"]), (
                "served spec differs from the golden spec"
            )

            spec = assemble_game(
                standard_source, golden["victim"], golden["mode"], golden["seed"], forge_config
            )
            state = new_session(spec, spec_ref=game_id)
            session_id = client.post(f"/games/{game_id}/sessions").json()["session_id"]

            for index, step in enumerate(golden["steps"]):
                action_data = step["action"]
                response = client.post(
                    f"/sessions/{session_id}/actions", json=action_data
                )
                assert response.status_code == 200, f"step {index}: {response.text}"
                from mysteryforge.runtime import Action

                action = Action.from_dict(action_data)
                if action.kind == "accuse":
                    state, _, observation = evaluate_accusation(
                        spec, state, action.target, action.payload
                    )
                else:
                    state, observation = apply_action(spec, state, action)

                http_state = dict(response.json()["view"]["state"])
                del http_state["spec_ref"]
                direct_state = state.to_canonical()
                del direct_state["spec_ref"]
                assert response.json()["observation"] == step["observation"], f"step {index}"
                assert canonical_dumps(http_state) == canonical_dumps(step["state"]), (
                    f"step {index}: HTTP state diverged from golden"
                )
                assert canonical_dumps(direct_state) == canonical_dumps(step["state"]), (
                    f"step {index}: direct runtime diverged from golden"
                )
            assert response.json()["status"] == golden["final_status"]

            store = app.state.store
            games_before = store.list_games()

            def explode(*args, **kwargs):
                raise OSError("disk full")

            monkeypatch.setattr(store, "_write_game_dir", explode)
            crash = client.post(
                "/games", json={"victim": golden["victim"], "seed": 999}
            )
            assert crash.status_code == 503
            monkeypatch.undo()
            assert store.list_games() == games_before, "crash left a partial game behind"
            assert not list(Path(store.games_dir).glob(".tmp-*")), "temp residue after crash"
        return "12 HTTP steps byte-equal to runtime and golden; crash leaves no partial game"

    gate("service-equivalence", body)


def test_feedback_exclusion(gate, forge_config, standard_source):
    def body():
        app = create_app(forge_config, source=standard_source)
        with TestClient(app) as client:
            first = client.post(
                "/games", json={"victim": "Albert Einstein", "seed": 9}
            ).json()
            spec_data = client.get(f"/games/{first['game_id']}").json()["spec"]
            reported = spec_data["suspects"]["members"][0]
            ack = client.post(
                f"/games/{first['game_id']}/feedback", json={"suspect": reported}
            )
            assert ack.status_code == 200 and ack.json()["acknowledged"]
            second = client.post(
                "/games", json={"victim": "Albert Einstein", "seed": 9}
            ).json()
            regenerated = client.get(f"/games/{second['game_id']}").json()["spec"]
            assert reported not in regenerated["suspects"]["members"], (
                "reported suspect resurfaced in the next pool"
            )
        return "reported suspect absent from the regenerated pool"

    gate("feedback-exclusion", body)
