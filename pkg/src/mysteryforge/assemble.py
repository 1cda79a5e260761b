"""Orchestration: from a victim name to a validated, solvable game.

The pipeline is strictly sequential and every stage failure is wrapped with
its stage name. Locations are the place entities encountered while walking
victim-to-suspect article paths (plus suspects' birth places), in first-
appearance order; the clue chain re-walks the same paths so each listed
location is revealed exactly once before it is needed. That linear unlock
order is what makes every generated game solvable by construction.
"""

from dataclasses import dataclass, field

from .config import ForgeConfig
from .dialog import ClueDirective, render_dialog
from .errors import ForgeError, GenerationError, NotFoundError
from .gamespec import GENERATOR_VERSION, ClueRecord, GameSpec, ItemRecord, NPCRecord
from .graph import build_graph, find_path
from .ingest import fetch_map_extract, resolve_label
from .model import GAME_MODES
from .plot import (
    assign_culprit,
    assign_evidence,
    build_suspect_pool,
    evolve_suspect_set,
    inject_lie,
    render_fact_text,
)
from .seeds import derive_seed

STAGES = (
    "resolve",
    "graph",
    "pool",
    "evolve",
    "culprit",
    "lie",
    "locations",
    "chain",
    "evidence",
    "dialog",
    "validate",
)


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except GenerationError:
        raise
    except (ForgeError, ValueError) as exc:
        message = getattr(exc, "message", str(exc))
        raise GenerationError(message, stage=name) from exc


def stored_fact(graph, a: str, b: str):
    """The fact behind the undirected hop a-b: smallest stored triple wins."""
    triples = sorted(
        (s, p, t)
        for s, p, t in graph.edges
        if (s == a and t == b) or (s == b and t == a)
    )
    if not triples:
        raise NotFoundError(f"no stored edge between {a} and {b}")
    s, p, t = triples[0]
    for fact in graph.entity(s).facts:
        if fact.predicate == p and fact.object_entity == t:
            return fact
    raise NotFoundError(f"edge {s} -{p}-> {t} has no backing fact")


def _birth_place(graph, iri: str) -> str | None:
    """The entity's first birth-place target that is a place in the graph."""
    for fact in sorted(graph.entity(iri).facts_by_predicate("birth-place"), key=lambda f: f.object_key):
        target = fact.object_entity
        if target is not None and target in graph and graph.entity(target).kind == "place":
            return target
    return None


def suspect_paths(graph, victim: str, members) -> dict:
    return {member: find_path(graph, victim, member) for member in sorted(members)}


def _walk_places(graph, victim: str, paths: dict, members) -> list:
    """Candidate locations in first-appearance order: home, path places, birth places."""
    ordered = []

    def push(iri):
        if iri is not None and iri not in ordered:
            ordered.append(iri)

    push(_birth_place(graph, victim))
    for member in sorted(members):
        for node in paths[member].nodes[1:]:
            if graph.entity(node).kind == "place":
                push(node)
        push(_birth_place(graph, member))
    return ordered


def select_locations(graph, victim: str, members, paths: dict, cap: int, npc_count: int) -> list:
    """Location IRIs in unlock order, capped so every location can host an NPC."""
    candidates = _walk_places(graph, victim, paths, members)
    if not candidates:
        raise NotFoundError("no place entity reachable from the victim's paths")
    return candidates[: max(1, min(cap, npc_count))]


def assign_npc_homes(locations, npc_iris) -> dict:
    """Round-robin NPCs over locations so every location hosts at least one."""
    homes = {}
    for index, npc in enumerate(sorted(npc_iris)):
        homes[npc] = locations[index % len(locations)]
    return homes


@dataclass
class ChainPlan:
    """Clue chain plus the companion placements it implies."""

    records: list = field(default_factory=list)
    items: list = field(default_factory=list)  # ItemRecord, placement order
    directives: dict = field(default_factory=dict)  # npc iri -> [ClueDirective]


def build_clue_chain(
    graph,
    suspect_set,
    victim: str,
    locations,
    seed: int,
    npc_homes: dict,
    labels: dict,
    lie=None,
) -> ChainPlan:
    """Walk each suspect's article path and emit one clue per step.

    A step onto an unrevealed listed place becomes a reveal-location clue;
    every other step reveals the connecting fact. Work entities become
    collectible items that hold their own clue; everything else is voiced
    by an NPC at the current location. In data-agent games a final record
    through a non-culprit NPC surfaces the true version of the lied fact.
    """
    location_set = set(locations)
    start = locations[0]
    npcs_at = {}
    for npc, home in npc_homes.items():
        npcs_at.setdefault(home, []).append(npc)
    for residents in npcs_at.values():
        residents.sort()

    def deliverer(location, exclude=None):
        for npc in npcs_at.get(location, ()):
            if npc != exclude:
                return npc
        return None

    plan = ChainPlan()
    placed_items = set()
    revealed = {start}
    cur = start

    def next_id():
        return f"clue:{len(plan.records) + 1:03d}"

    def emit(via, via_kind, about, fact, reveal=None):
        record = ClueRecord(
            clue_id=next_id(),
            at=cur,
            via=via,
            via_kind=via_kind,
            about=about,
            reveals_location=reveal,
            reveals_fact=None if reveal else fact,
        )
        plan.records.append(record)
        if via_kind == "npc":
            plan.directives.setdefault(via, []).append(ClueDirective(record.clue_id, fact))
        return record

    def npc_via(location):
        via = deliverer(location)
        if via is None:
            raise GenerationError(f"chain: location {location} hosts no NPC", stage="chain")
        return via

    for member in sorted(suspect_set.members):
        path = find_path(graph, victim, member)
        prev = victim
        for node in path.nodes[1:]:
            fact = stored_fact(graph, prev, node)
            if graph.entity(node).kind == "work" and node not in placed_items:
                # the work itself is the clue: collect it where you stand
                placed_items.add(node)
                plan.items.append(ItemRecord(node, cur, render_fact_text(fact, labels)))
                via, via_kind = node, "item"
            else:
                via, via_kind = npc_via(cur), "npc"
            if node in location_set and node not in revealed:
                emit(via, via_kind, node, fact, reveal=node)
                revealed.add(node)
                cur = node
            else:
                emit(via, via_kind, node, fact)
            prev = node
        birth = _birth_place(graph, member)
        if birth is not None and birth in location_set and birth not in revealed:
            fact = next(
                f
                for f in sorted(graph.entity(member).facts_by_predicate("birth-place"), key=lambda f: f.object_key)
                if f.object_entity == birth
            )
            emit(npc_via(cur), "npc", birth, fact, reveal=birth)
            revealed.add(birth)
            cur = birth

    missing = location_set - revealed
    if missing:
        raise GenerationError(
            f"chain: locations never revealed: {sorted(missing)}", stage="chain"
        )

    if lie is not None:
        truth_at, truth_via = cur, deliverer(cur, exclude=lie.culprit)
        if truth_via is None:
            for location in locations:
                candidate = deliverer(location, exclude=lie.culprit)
                if candidate is not None:
                    truth_at, truth_via = location, candidate
                    break
        if truth_via is None:
            raise GenerationError("chain: no NPC can voice the true fact", stage="chain")
        cur = truth_at
        emit(truth_via, "npc", lie.culprit, lie.truth)

    return plan


def assemble_game(
    source,
    victim_name: str,
    mode: str,
    seed: int,
    config: ForgeConfig | None = None,
    exclusions=frozenset(),
    theme=None,
) -> GameSpec:
    """Generate a complete game, deterministic in (source, inputs, config)."""
    config = config or ForgeConfig()
    if mode not in GAME_MODES:
        raise GenerationError(f"resolve: unknown mode {mode!r}", stage="resolve")

    victim = _stage("resolve", resolve_label, source, victim_name)
    graph = _stage("graph", build_graph, source, victim, config.graph_depth, config.fan_out_cap)
    pool = _stage(
        "pool",
        build_suspect_pool,
        graph,
        victim,
        theme,
        exclusions,
        config.k,
        config.pool_cap,
        config.relatedness_weights,
    )
    suspects = _stage(
        "evolve",
        evolve_suspect_set,
        graph,
        victim,
        pool,
        config.k,
        derive_seed(seed, "evolve"),
        config.relatedness_weights,
        population_size=config.evo_population,
        generations=config.evo_generations,
        tournament=config.evo_tournament,
        elitism=config.evo_elitism,
    )
    suspects = _stage("culprit", assign_culprit, suspects, derive_seed(seed, "culprit"))

    lie = None
    if mode == "data-agent":
        culprit_entity = graph.entity(suspects.culprit)
        lie = _stage("lie", inject_lie, culprit_entity, derive_seed(seed, "lie"), graph)

    paths = _stage("locations", suspect_paths, graph, victim, suspects.members)
    npc_iris = {
        node
        for path in paths.values()
        for node in path.nodes
        if node != victim and graph.entity(node).kind == "person"
    }
    location_ids = _stage(
        "locations",
        select_locations,
        graph,
        victim,
        suspects.members,
        paths,
        config.locations_cap,
        len(npc_iris),
    )
    locations = [
        (iri, _stage("locations", fetch_map_extract, source, iri, config.map_radius_deg))
        for iri in location_ids
    ]
    npc_homes = assign_npc_homes(location_ids, npc_iris)

    labels = {iri: entity.label for iri, entity in graph.entities.items()}
    plan = _stage(
        "chain",
        build_clue_chain,
        graph,
        suspects,
        victim,
        location_ids,
        derive_seed(seed, "chain"),
        npc_homes,
        labels,
        lie,
    )

    evidence = []
    if mode == "wikimystery":
        evidence = _stage(
            "evidence",
            assign_evidence,
            suspects,
            graph,
            location_ids,
            derive_seed(seed, "evidence"),
            labels,
        )
        evidence.sort(key=lambda item: item.about)

    npcs = []
    for npc_iri in sorted(npc_homes):
        entity = graph.entity(npc_iri)
        if npc_iri == suspects.culprit:
            role = "culprit"
        elif npc_iri in suspects.members:
            role = "innocent"
        else:
            role = "bystander"
        script = _stage(
            "dialog",
            render_dialog,
            entity,
            entity.facts,
            role,
            config.fidelity,
            seed,
            labels,
            tuple(plan.directives.get(npc_iri, ())),
            lie if role == "culprit" else None,
        )
        npcs.append(NPCRecord(npc_iri, npc_homes[npc_iri], script))

    spec = GameSpec(
        mode=mode,
        victim=victim,
        suspects=suspects,
        locations=locations,
        npcs=npcs,
        items=sorted(plan.items, key=lambda item: item.entity),
        clue_chain=plan.records,
        evidence=evidence,
        lie=lie,
        seed=seed,
        generator_version=GENERATOR_VERSION,
        entities=dict(sorted(graph.entities.items())),
    )

    report = validate_solvability(spec)
    if not report.passed:
        raise GenerationError(
            f"failed checks: {', '.join(report.failed_names())}", stage="validate"
        )
    return spec


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def to_canonical(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class ValidationReport:
    checks: list = field(default_factory=list)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), detail))

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failed_names(self) -> list:
        return [check.name for check in self.checks if not check.passed]

    def to_canonical(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [check.to_canonical() for check in self.checks],
        }


def _simulate_chain(spec: GameSpec):
    """Walk the chain in order; return (unlocked set, list of violations)."""
    unlocked = {spec.start_location}
    problems = []
    for record in spec.clue_chain:
        if record.at not in unlocked:
            problems.append(f"{record.clue_id} sits at locked location {record.at}")
        if record.via_kind == "npc":
            npc = spec.npc(record.via)
            if npc is None or npc.home != record.at:
                problems.append(f"{record.clue_id} deliverer {record.via} absent from {record.at}")
        else:
            item = spec.item(record.via)
            if item is None or item.location != record.at:
                problems.append(f"{record.clue_id} item {record.via} absent from {record.at}")
        if record.reveals_location is not None:
            if record.reveals_location in unlocked:
                problems.append(f"{record.clue_id} re-reveals {record.reveals_location}")
            unlocked.add(record.reveals_location)
    return unlocked, problems


def validate_solvability(spec: GameSpec) -> ValidationReport:
    """Static checks that a game can be played to a win."""
    report = ValidationReport()
    members = spec.suspects.members
    location_ids = spec.location_ids

    report.add(
        "exactly-one-culprit",
        spec.suspects.culprit is not None and spec.suspects.culprit in members,
        f"culprit={spec.suspects.culprit}",
    )
    report.add("members-distinct", len(set(members)) == len(members))

    referenced = {spec.victim, *members, *location_ids}
    referenced |= {npc.entity for npc in spec.npcs}
    referenced |= {item.entity for item in spec.items}
    referenced |= {record.about for record in spec.clue_chain}
    referenced |= {item.about for item in spec.evidence}
    missing = sorted(iri for iri in referenced if iri not in spec.entities)
    report.add("entities-resolvable", not missing, f"missing={missing}" if missing else "")

    report.add(
        "npc-homes-valid",
        all(npc.home in location_ids for npc in spec.npcs),
    )
    report.add(
        "item-locations-valid",
        all(item.location in location_ids for item in spec.items),
    )
    clue_ids = [record.clue_id for record in spec.clue_chain]
    report.add("clue-ids-unique", len(set(clue_ids)) == len(clue_ids))

    unlocked, problems = _simulate_chain(spec)
    report.add("chain-traversable", not problems, "; ".join(problems))
    unreachable = sorted(set(location_ids) - unlocked)
    report.add(
        "locations-reachable", not unreachable, f"unreachable={unreachable}" if unreachable else ""
    )

    if spec.mode == "wikimystery":
        innocents = set(spec.suspects.innocents)
        abouts = [item.about for item in spec.evidence]
        report.add(
            "evidence-count",
            len(spec.evidence) == len(members) - 1 and set(abouts) == innocents
            and len(set(abouts)) == len(abouts),
            f"{len(spec.evidence)} items for {len(innocents)} innocents",
        )
        report.add(
            "evidence-facts-own",
            all(item.fact.subject == item.about for item in spec.evidence),
        )
        misplaced = sorted(
            item.about for item in spec.evidence if item.placed_at not in unlocked
        )
        report.add(
            "evidence-reachable", not misplaced, f"unreachable={misplaced}" if misplaced else ""
        )

    if spec.mode == "data-agent":
        report.add(
            "lie-present",
            spec.lie is not None and spec.lie.culprit == spec.suspects.culprit,
        )
        altered_by_npc = {
            npc.entity: sum(1 for line in npc.script.lines if line.transformation.kind == "altered")
            for npc in spec.npcs
        }
        total_altered = sum(altered_by_npc.values())
        report.add(
            "lie-unique",
            total_altered == 1 and altered_by_npc.get(spec.suspects.culprit, 0) == 1,
            f"altered lines: {total_altered}",
        )
        truth_ids = spec.truth_clue_ids()
        report.add("truth-collectible", bool(truth_ids), f"truth clues: {sorted(truth_ids)}")
        report.add(
            "truth-not-self-served",
            all(
                spec.clue(clue_id).via != spec.suspects.culprit for clue_id in truth_ids
            ) and bool(truth_ids),
        )

    if spec.mode == "linkpath":
        goal = spec.npc(spec.suspects.culprit)
        report.add(
            "goal-home-reachable",
            goal is not None and goal.home in unlocked,
        )

    return report
