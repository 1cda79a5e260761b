"""The ``forge`` command line: generate, validate, audit, play, serve."""

import argparse
import json
import sys
from pathlib import Path

from .assemble import assemble_game, validate_solvability
from .config import load_config
from .errors import ForgeError
from .feedback import load_exclusions
from .gamespec import GameSpec
from .ingest import FixtureSource
from .metrics import bias_audit, score_game
from .runtime import Action, apply_action, greedy_playthrough, new_session, session_view


def _slug(text: str) -> str:
    return "".join(ch if ch.isalnum() else "-" for ch in text.lower()).strip("-")


def _load_spec_file(path: str) -> GameSpec:
    return GameSpec.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def cmd_generate(args) -> int:
    config = load_config(args.config)
    if args.offline:
        source = FixtureSource.from_path(args.fixtures or config.fixtures_dir)
    else:
        from .service import make_source

        source = make_source(config)
    exclusions = load_exclusions(config.exclusion_ledger)
    spec = assemble_game(source, args.victim, args.mode, args.seed, config, exclusions)
    score = score_game(spec)
    out = Path(args.out or f"{_slug(args.victim)}-{args.mode}-{args.seed}.json")
    out.write_bytes(spec.canonical_form())
    print(
        f"wrote {out} (k={spec.k}, locations={len(spec.locations)}, "
        f"transformation={score.transformation:.3f}, functionality={score.functionality:.3f})"
    )
    return 0


def cmd_validate(args) -> int:
    spec = _load_spec_file(args.spec_file)
    report = validate_solvability(spec)
    for check in report.checks:
        marker = "PASS" if check.passed else "FAIL"
        detail = f"  {check.detail}" if check.detail and not check.passed else ""
        print(f"[{marker}] {check.name}{detail}")
    return 0 if report.passed else 1


def _collect_specs(directory: Path):
    store_games = directory / "games"
    if store_games.is_dir():
        for spec_path in sorted(store_games.glob("*/spec.json")):
            yield GameSpec.from_dict(json.loads(spec_path.read_text(encoding="utf-8")))
        return
    for spec_path in sorted(directory.glob("*.json")):
        if spec_path.name.endswith(".map.json") or spec_path.name == "manifest":
            continue
        yield GameSpec.from_dict(json.loads(spec_path.read_text(encoding="utf-8")))


def cmd_audit(args) -> int:
    specs = list(_collect_specs(Path(args.directory)))
    report = bias_audit(specs, top_n=args.top)
    sys.stdout.write(report.table_text())
    return 0


def _print_view(view: dict) -> None:
    location = view["location"]
    print(f"\n== {location['label']} ({view['status']}) ==")
    for npc in location["npcs"]:
        print(f"  npc: {npc['label']} ({npc['entity']})")
    for collectible in location["collectibles"]:
        print(f"  {collectible['kind']}: {collectible['label']} [{collectible['id']}]")
    unlocked = [loc for loc in view["locations"] if loc["unlocked"]]
    print(f"  places: {', '.join(loc['label'] for loc in unlocked)}")
    print(f"  tray: {len(view['tray'])} collected")


def cmd_play(args) -> int:
    spec = _load_spec_file(args.spec_file)
    if not args.interactive:
        state, observations = greedy_playthrough(spec)
        for line in observations:
            print(line)
        print(f"\nresult: {state.status} after {len(state.action_log)} actions")
        return 0 if state.status == "won" else 1

    state = new_session(spec)
    print("commands: travel <iri> | talk <iri> | collect <id> | accuse <iri> [id ...] | look | quit")
    _print_view(session_view(spec, state))
    for raw in sys.stdin:
        parts = raw.strip().split()
        if not parts:
            continue
        command = parts[0]
        if command == "quit":
            break
        if command == "look":
            _print_view(session_view(spec, state))
            continue
        try:
            if command == "accuse":
                action = Action("accuse", parts[1], tuple(parts[2:]))
            else:
                action = Action(command, parts[1])
            state, observation = apply_action(spec, state, action)
            print(observation)
        except (ForgeError, IndexError) as exc:
            print(f"! {exc}")
            continue
        if state.status != "in-progress":
            print(f"result: {state.status}")
            break
        if command == "travel":
            _print_view(session_view(spec, state))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    config = load_config(args.config)
    app = create_app(config)
    uvicorn.run(app, host=config.listen_host, port=config.listen_port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="forge", description="Data-driven mystery game toolkit")
    commands = parser.add_subparsers(dest="command", required=True)

    generate = commands.add_parser("generate", help="generate one game")
    generate.add_argument("--victim", required=True, help="victim entity label (exact match)")
    generate.add_argument("--mode", default="wikimystery", choices=["linkpath", "wikimystery", "data-agent"])
    generate.add_argument("--seed", type=int, default=0)
    generate.add_argument("--offline", action="store_true", help="force fixture mode")
    generate.add_argument("--fixtures", help="fixture corpus directory")
    generate.add_argument("--config", help="config file path")
    generate.add_argument("--out", help="output spec file")
    generate.set_defaults(func=cmd_generate)

    validate = commands.add_parser("validate", help="run solvability checks on a spec file")
    validate.add_argument("spec_file")
    validate.set_defaults(func=cmd_validate)

    audit = commands.add_parser("audit", help="bias audit over a directory of specs")
    audit.add_argument("directory")
    audit.add_argument("--top", type=int, default=8)
    audit.set_defaults(func=cmd_audit)

    play = commands.add_parser("play", help="play a spec in the terminal")
    play.add_argument("spec_file")
    play.add_argument("--interactive", action="store_true", help="read commands from stdin")
    play.set_defaults(func=cmd_play)

    serve = commands.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--config", help="config file path")
    serve.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ForgeError as exc:
        stage = f" at {exc.stage}" if exc.stage else ""
        print(f"error [{exc.code}]{stage}: {exc.message}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
