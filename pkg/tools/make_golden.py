"""Record the golden session trace used by the service-equivalence gate.

A fixed 12-action walkthrough of one standard game: the reference solver's
first eleven actions plus a premature accusation (which must bounce). For
every step the file stores the action, the observation text, and the full
session state minus ``spec_ref`` (that field is a per-deployment token, so
byte comparisons exclude it). Regenerating the file is byte-identical.
"""

from pathlib import Path

from mysteryforge.assemble import assemble_game
from mysteryforge.canonical import canonical_bytes
from mysteryforge.config import ForgeConfig
from mysteryforge.ingest import FixtureSource
from mysteryforge.runtime import Action, apply_action, greedy_playthrough, new_session

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "tests" / "golden" / "walkthrough.json"

VICTIM = "Albert Einstein"
MODE = "wikimystery"
SEED = 7
STEP_COUNT = 12


def comparable_state(state) -> dict:
    data = state.to_canonical()
    del data["spec_ref"]
    return data


def build_walkthrough() -> dict:
    config = ForgeConfig(
        mode="fixture",
        fixtures_dir=str(ROOT / "fixtures" / "standard"),
        store_dir="var/store",
        cache_dir="var/cache",
    )
    source = FixtureSource.from_path(config.fixtures_dir)
    spec = assemble_game(source, VICTIM, MODE, SEED, config)

    solved, _ = greedy_playthrough(spec)
    # The solver's opening (talks, then the first travel), the first evidence
    # pickup pulled forward to right after arrival, two more talks, and a
    # premature accusation: all four action kinds inside twelve steps.
    log = solved.action_log
    first_travel = next(i for i, a in enumerate(log) if a.kind == "travel")
    first_collect = next(a for a in log if a.kind == "collect")
    actions = list(log[: first_travel + 1])
    actions.append(first_collect)
    actions.extend(log[first_travel + 1 : first_travel + 3])
    actions = actions[: STEP_COUNT - 1]
    actions.append(Action("accuse", spec.suspects.culprit))

    state = new_session(spec)
    steps = []
    for action in actions:
        state, observation = apply_action(spec, state, action)
        steps.append(
            {
                "action": action.to_canonical(),
                "observation": observation,
                "state": comparable_state(state),
            }
        )
    assert len(steps) == STEP_COUNT
    assert state.status == "in-progress"  # the early accusation must not end the game
    return {
        "victim": VICTIM,
        "mode": MODE,
        "seed": SEED,
        "spec": spec.to_canonical(),
        "steps": steps,
        "final_status": state.status,
    }


def main() -> None:
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_bytes(canonical_bytes(build_walkthrough()))
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
