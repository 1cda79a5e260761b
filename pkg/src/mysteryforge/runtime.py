"""Deterministic session runtime: travel, talk, collect, accuse.

State transitions are pure functions of (spec, state, action); rejected
actions raise and leave state untouched. Locations unlock only through
collected reveal-location clues, which is what makes the clue loop binding.
"""

from dataclasses import dataclass, field, replace

from .assemble import validate_solvability
from .canonical import canonical_bytes, canonical_dumps
from .errors import IllegalActionError, InvalidSpecError
from .gamespec import GameSpec
from .ingest import fetch_image_candidates

ACTION_KINDS = ("travel", "talk", "collect", "accuse")
STATUSES = ("in-progress", "won", "lost")
VERDICTS = ("won", "lost", "rejected")

SOLVER_STEP_CAP = 10_000


@dataclass(frozen=True)
class Action:
    kind: str
    target: str
    payload: tuple = ()

    def __post_init__(self):
        if self.kind not in ACTION_KINDS:
            raise IllegalActionError(f"unknown action kind {self.kind!r}")

    def to_canonical(self) -> dict:
        return {"kind": self.kind, "target": self.target, "payload": list(self.payload)}

    @classmethod
    def from_dict(cls, data: dict) -> "Action":
        return cls(data["kind"], data["target"], tuple(data.get("payload") or ()))


@dataclass(frozen=True)
class GameState:
    spec_ref: str
    location: str
    visited: frozenset
    collected: frozenset
    dialog_cursor: tuple  # sorted (npc iri, next line index) pairs
    status: str
    action_log: tuple  # Actions applied so far

    def cursor_for(self, npc: str) -> int:
        return dict(self.dialog_cursor).get(npc, 0)

    def to_canonical(self) -> dict:
        return {
            "spec_ref": self.spec_ref,
            "status": self.status,
            "location": self.location,
            "visited": sorted(self.visited),
            "collected": sorted(self.collected),
            "dialog_cursor": {npc: cursor for npc, cursor in sorted(self.dialog_cursor)},
            "action_log": [action.to_canonical() for action in self.action_log],
        }

    def canonical_text(self) -> str:
        return canonical_dumps(self.to_canonical())

    def canonical_form(self) -> bytes:
        return canonical_bytes(self.to_canonical())

    @classmethod
    def from_dict(cls, data: dict) -> "GameState":
        return cls(
            spec_ref=data["spec_ref"],
            location=data["location"],
            visited=frozenset(data["visited"]),
            collected=frozenset(data["collected"]),
            dialog_cursor=tuple(sorted(data["dialog_cursor"].items())),
            status=data["status"],
            action_log=tuple(Action.from_dict(a) for a in data["action_log"]),
        )


def spec_reference(spec: GameSpec) -> str:
    import hashlib

    return hashlib.sha256(spec.canonical_form()).hexdigest()[:16]


def new_session(spec: GameSpec, spec_ref: str | None = None) -> GameState:
    report = validate_solvability(spec)
    if not report.passed:
        raise InvalidSpecError(f"spec fails validation: {', '.join(report.failed_names())}")
    return GameState(
        spec_ref=spec_ref or spec_reference(spec),
        location=spec.start_location,
        visited=frozenset({spec.start_location}),
        collected=frozenset(),
        dialog_cursor=(),
        status="in-progress",
        action_log=(),
    )


def unlocked_locations(spec: GameSpec, state: GameState) -> set:
    """Start location plus everything revealed by collected clues."""
    unlocked = {spec.start_location}
    for record in spec.clue_chain:
        if record.reveals_location is not None and record.clue_id in state.collected:
            unlocked.add(record.reveals_location)
    return unlocked


def _require_in_progress(state: GameState) -> None:
    if state.status != "in-progress":
        raise IllegalActionError(f"game already {state.status}")


def _log(state: GameState, action: Action, **changes) -> GameState:
    return replace(state, action_log=state.action_log + (action,), **changes)


def _travel(spec, state, action):
    target = action.target
    if target not in spec.location_ids:
        raise IllegalActionError(f"unknown location {target}")
    if target == state.location:
        raise IllegalActionError("already at that location")
    if target not in unlocked_locations(spec, state):
        raise IllegalActionError(f"location {target} is locked")
    new = _log(state, action, location=target, visited=state.visited | {target})
    return new, f"You travel to {spec.entities[target].label}."


def _talk(spec, state, action):
    npc = spec.npc(action.target)
    if npc is None:
        raise IllegalActionError(f"unknown NPC {action.target}")
    if npc.home != state.location:
        raise IllegalActionError(f"{action.target} is not here")
    lines = npc.script.lines
    if not lines:
        raise IllegalActionError(f"{action.target} has nothing to say")
    cursor = state.cursor_for(npc.entity)
    line = lines[cursor % len(lines)]
    cursors = dict(state.dialog_cursor)
    cursors[npc.entity] = (cursor + 1) % len(lines)
    collected = state.collected
    if line.clue_id is not None:
        collected = collected | {line.clue_id}
    new = _log(
        state,
        action,
        dialog_cursor=tuple(sorted(cursors.items())),
        collected=collected,
    )
    return new, line.text


def _collect(spec, state, action):
    target = action.target
    if target in state.collected:
        raise IllegalActionError(f"{target} already collected")
    for item in spec.items:
        if item.collectible_id == target:
            if item.location != state.location:
                raise IllegalActionError(f"{target} is not here")
            new = _log(state, action, collected=state.collected | {target})
            return new, item.text
    for item in spec.evidence:
        if item.collectible_id == target:
            if item.placed_at != state.location:
                raise IllegalActionError(f"{target} is not here")
            new = _log(state, action, collected=state.collected | {target})
            return new, item.text
    raise IllegalActionError(f"unknown collectible {target}")


def apply_action(spec: GameSpec, state: GameState, action: Action):
    """One step of play; returns (new state, observation text)."""
    _require_in_progress(state)
    if action.kind == "travel":
        return _travel(spec, state, action)
    if action.kind == "talk":
        return _talk(spec, state, action)
    if action.kind == "collect":
        return _collect(spec, state, action)
    new_state, verdict, observation = evaluate_accusation(
        spec, state, action.target, action.payload
    )
    return new_state, observation


def evaluate_accusation(spec: GameSpec, state: GameState, suspect: str, presented=()):
    """Mode-specific accusation rules; returns (state, verdict, observation).

    wikimystery: accusation only counts with every evidence item collected
    and presented; then culprit wins, innocent loses the game. data-agent:
    accusing the culprit wins only with the true fact behind the lie in
    hand, otherwise the accusation bounces with a hint; accusing an
    innocent loses. linkpath: the goal person must be accused after their
    home was visited.
    """
    _require_in_progress(state)
    if suspect not in spec.suspects.members:
        raise IllegalActionError(f"{suspect} is not a suspect")
    action = Action("accuse", suspect, tuple(presented))
    culprit = spec.suspects.culprit
    label = spec.entities[suspect].label

    if spec.mode == "wikimystery":
        required = spec.evidence_ids()
        if not required <= state.collected or set(presented) != required:
            missing = len(required - state.collected)
            observation = (
                f"The accusation is rejected: present all {len(required)} pieces of "
                f"evidence ({missing} still uncollected)."
            )
            return _log(state, action), "rejected", observation
        if suspect == culprit:
            return _log(state, action, status="won"), "won", f"{label} confesses. Case closed."
        return _log(state, action, status="lost"), "lost", f"{label} is innocent. The culprit walks free."

    if spec.mode == "data-agent":
        if suspect == culprit:
            if spec.truth_clue_ids() & state.collected:
                observation = f"Caught in the lie, {label} confesses. Case closed."
                return _log(state, action, status="won"), "won", observation
            observation = (
                "The accusation is rejected: something in their story is false, "
                "but you cannot prove it yet."
            )
            return _log(state, action), "rejected", observation
        return _log(state, action, status="lost"), "lost", f"{label} is innocent. The culprit walks free."

    # linkpath: find the goal person by following the trail to their home
    goal_home = spec.npc(culprit).home if spec.npc(culprit) else None
    if suspect == culprit:
        if goal_home in state.visited:
            return _log(state, action, status="won"), "won", f"You found {label}. The trail ends here."
        observation = "The accusation is rejected: you have not tracked them down yet."
        return _log(state, action), "rejected", observation
    return _log(state, action, status="lost"), "lost", f"{label} was not the person you sought."


def greedy_playthrough(spec: GameSpec):
    """Reference solver: exhaust every location, then accuse the culprit.

    Wins every spec that passes validation; used as the solvability oracle.
    Returns (final state, observations).
    """
    state = new_session(spec)
    observations = []
    steps = 0

    def step(action):
        nonlocal state, steps
        steps += 1
        if steps > SOLVER_STEP_CAP:
            raise RuntimeError("solver step cap exceeded")
        state, observation = apply_action(spec, state, action)
        observations.append(observation)

    while state.status == "in-progress":
        here = state.location
        for npc in spec.npcs:
            if npc.home == here:
                for _ in range(len(npc.script.lines)):
                    step(Action("talk", npc.entity))
        for item in spec.items:
            if item.location == here and item.collectible_id not in state.collected:
                step(Action("collect", item.collectible_id))
        for item in spec.evidence:
            if item.placed_at == here and item.collectible_id not in state.collected:
                step(Action("collect", item.collectible_id))
        unlocked = unlocked_locations(spec, state)
        destination = next(
            (iri for iri in spec.location_ids if iri in unlocked and iri not in state.visited),
            None,
        )
        if destination is not None:
            step(Action("travel", destination))
            continue
        presented = tuple(sorted(spec.evidence_ids())) if spec.mode == "wikimystery" else ()
        step(Action("accuse", spec.suspects.culprit, presented))
        break

    return state, observations


def _clue_texts(spec: GameSpec) -> dict:
    """Display text for every collectible id."""
    texts = {}
    for npc in spec.npcs:
        for line in npc.script.lines:
            if line.clue_id is not None:
                texts.setdefault(line.clue_id, line.text)
    for item in spec.items:
        texts[item.collectible_id] = item.text
    for item in spec.evidence:
        texts[item.collectible_id] = item.text
    return texts


def _npc_portrait(spec: GameSpec, npc_iri: str, flag_threshold: float):
    entity = spec.entities[npc_iri]
    candidates, flagged = fetch_image_candidates(None, entity, flag_threshold)
    if not candidates:
        return None
    best = candidates[0]
    return {
        "url": best.url_or_path,
        "caption": best.caption,
        "confidence": best.confidence,
        "flagged": best in flagged,
    }


def session_view(spec: GameSpec, state: GameState, flag_threshold: float = 0.5) -> dict:
    """Everything a UI needs to draw one session; no game rules included."""
    unlocked = unlocked_locations(spec, state)
    labels = spec.labels()
    texts = _clue_texts(spec)
    here = state.location

    npcs_here = [
        {
            "entity": npc.entity,
            "label": labels[npc.entity],
            "portrait": _npc_portrait(spec, npc.entity, flag_threshold),
            "line_count": len(npc.script.lines),
        }
        for npc in spec.npcs
        if npc.home == here
    ]
    collectibles_here = [
        {"id": item.collectible_id, "kind": "item", "label": labels[item.entity]}
        for item in spec.items
        if item.location == here and item.collectible_id not in state.collected
    ] + [
        {"id": item.collectible_id, "kind": "evidence", "label": labels[item.about]}
        for item in spec.evidence
        if item.placed_at == here and item.collectible_id not in state.collected
    ]

    extracts = dict(spec.locations)
    locations = [
        {
            "entity": iri,
            "label": labels[iri],
            "unlocked": iri in unlocked,
            "visited": iri in state.visited,
            "current": iri == here,
            "map": extracts[iri].to_canonical() if iri in unlocked and extracts.get(iri) else None,
        }
        for iri in spec.location_ids
    ]

    tray = [
        {"id": cid, "text": texts.get(cid, "")}
        for cid in sorted(state.collected)
    ]
    evidence_ids = spec.evidence_ids()

    return {
        "spec_ref": state.spec_ref,
        "mode": spec.mode,
        "status": state.status,
        "victim": {"entity": spec.victim, "label": labels[spec.victim]},
        "location": {"entity": here, "label": labels[here], "npcs": npcs_here, "collectibles": collectibles_here},
        "locations": locations,
        "suspects": [
            {"entity": member, "label": labels[member]} for member in spec.suspects.members
        ],
        "tray": tray,
        "evidence": {
            "required": sorted(evidence_ids),
            "collected": sorted(evidence_ids & state.collected),
        },
        "state": state.to_canonical(),
    }
