"""Suspect selection and the facts that make a mystery solvable.

The pool is every person related to the victim; an evolutionary search picks
the k-subset that maximizes mutual relatedness plus relatedness to the
victim. One member becomes the culprit; innocents get evidence of innocence
(wikimystery) or the culprit gets a deliberately altered personal fact
(data-agent).
"""

import random
from datetime import date

from .errors import InsufficientFactsError, NoLiableFactError, NotFoundError, PoolTooSmallError
from .dialog import fact_source_text, label_or_local, template_for
from .gamespec import EvidenceItem, LiedFact, SuspectSet
from .graph import DEFAULT_RELATEDNESS_WEIGHTS, relatedness
from .model import Fact, Literal

DEFAULT_K = 5  # one culprit + four innocents
DEFAULT_POOL_CAP = 20

# Evolutionary search parameters (all deterministic in the seed).
EVO_POPULATION = 32
EVO_GENERATIONS = 100
EVO_TOURNAMENT = 3
EVO_ELITISM = 2
EVO_MUTATION_RATE = 0.8

# Predicates eligible for the culprit's lie.
LIABLE_PREDICATES = ("birth-date", "occupation")

# Evidence facts, most human-legible first.
EVIDENCE_PREFERENCE = ("birth-place", "occupation", "known-for", "generic-link")

LIE_YEAR_OFFSETS = (-3, -2, -1, 1, 2, 3)


def build_suspect_pool(
    graph,
    victim: str,
    theme=None,
    exclusions=frozenset(),
    k: int = DEFAULT_K,
    pool_cap: int = DEFAULT_POOL_CAP,
    weights=DEFAULT_RELATEDNESS_WEIGHTS,
) -> list:
    """Persons related to the victim, minus exclusions, best-related first."""
    victim_entity = graph.entity(victim)
    if victim_entity.kind != "person":
        raise NotFoundError(f"victim {victim} is not a person")
    scored = []
    for iri in graph.persons():
        if iri == victim or iri in exclusions:
            continue
        if theme is not None and not theme.matches(graph.entity(iri)):
            continue
        score = relatedness(graph, victim, iri, weights)
        if score > 0:
            scored.append((-score, iri))
    scored.sort()
    pool = [iri for _, iri in scored[:pool_cap]]
    if len(pool) < k:
        raise PoolTooSmallError(f"pool has {len(pool)} candidates, need {k}")
    return pool


class SubsetFitness:
    """Cached fitness: mean pairwise relatedness + mean relatedness to victim."""

    def __init__(self, graph, victim, pool, weights=DEFAULT_RELATEDNESS_WEIGHTS):
        self.victim_score = {p: relatedness(graph, victim, p, weights) for p in pool}
        self.pair_score = {}
        ordered = sorted(pool)
        for i, a in enumerate(ordered):
            for b in ordered[i + 1 :]:
                self.pair_score[(a, b)] = relatedness(graph, a, b, weights)

    def pair(self, a: str, b: str) -> float:
        if a > b:
            a, b = b, a
        return self.pair_score[(a, b)]

    def __call__(self, members) -> float:
        members = sorted(members)
        n = len(members)
        to_victim = sum(self.victim_score[m] for m in members) / n
        if n < 2:
            return to_victim
        pairs = [
            self.pair(members[i], members[j]) for i in range(n) for j in range(i + 1, n)
        ]
        return sum(pairs) / len(pairs) + to_victim


def greedy_subset(pool, k: int, fitness) -> tuple:
    """Baseline: repeatedly add the candidate maximizing incremental fitness.

    Ties break toward the lexicographically smallest IRI (remaining is kept
    sorted, so the first max wins).
    """
    members = []
    remaining = sorted(pool)
    for _ in range(k):
        scores = [fitness(members + [c]) for c in remaining]
        best = remaining[scores.index(max(scores))]
        members.append(best)
        remaining.remove(best)
    return tuple(sorted(members))


def _repair(child, parents_union, pool, k: int) -> tuple:
    seen = []
    for m in child:
        if m not in seen:
            seen.append(m)
    for m in sorted(parents_union):
        if len(seen) >= k:
            break
        if m not in seen:
            seen.append(m)
    for m in sorted(pool):
        if len(seen) >= k:
            break
        if m not in seen:
            seen.append(m)
    return tuple(sorted(seen[:k]))


def evolve_subset(
    pool,
    k: int,
    seed: int,
    fitness,
    population_size: int = EVO_POPULATION,
    generations: int = EVO_GENERATIONS,
    tournament: int = EVO_TOURNAMENT,
    elitism: int = EVO_ELITISM,
    mutation_rate: float = EVO_MUTATION_RATE,
) -> tuple:
    """Deterministic GA over k-subsets; never returns worse than greedy.

    Population seeded with the greedy baseline, tournament selection,
    one-point crossover on sorted member lists with duplicate repair.
    Mutation drops a seeded-random member and admits the pool outsider
    that maximizes fitness (a steepest single-swap step). Ties break on
    the lexicographically smallest member tuple.
    """
    pool = sorted(pool)
    rng = random.Random(seed)
    cache = {}

    def fit(members) -> float:
        if members not in cache:
            cache[members] = fitness(members)
        return cache[members]

    def rank_key(members):
        return (-fit(members), members)

    population = [greedy_subset(pool, k, fitness)]
    while len(population) < population_size:
        population.append(tuple(sorted(rng.sample(pool, k))))

    for _ in range(generations):
        population.sort(key=rank_key)
        next_population = population[:elitism]
        while len(next_population) < population_size:
            parent_a = min(rng.sample(population, tournament), key=rank_key)
            parent_b = min(rng.sample(population, tournament), key=rank_key)
            cut = rng.randrange(1, k) if k > 1 else 0
            child = parent_a[:cut] + parent_b[cut:]
            child = _repair(child, set(parent_a) | set(parent_b), pool, k)
            if rng.random() < mutation_rate:
                outsiders = [p for p in pool if p not in child]
                if outsiders:
                    dropped = rng.choice(child)
                    base = set(child) - {dropped}
                    child = min(
                        (tuple(sorted(base | {o})) for o in outsiders), key=rank_key
                    )
            next_population.append(child)
        population = next_population

    return min(population, key=rank_key)


def evolve_suspect_set(graph, victim: str, pool, k: int = DEFAULT_K, seed: int = 0,
                       weights=DEFAULT_RELATEDNESS_WEIGHTS, **evo_params) -> SuspectSet:
    """Evolve the suspect subset and wrap it with its fitness."""
    if len(pool) < k:
        raise PoolTooSmallError(f"pool has {len(pool)} candidates, need {k}")
    fitness = SubsetFitness(graph, victim, pool, weights)
    if len(pool) == k:
        members = tuple(sorted(pool))
    else:
        members = evolve_subset(pool, k, seed, fitness, **evo_params)
    return SuspectSet(members=members, culprit=None, fitness=fitness(members))


def assign_culprit(suspect_set: SuspectSet, seed: int) -> SuspectSet:
    """Uniform seeded culprit pick over the sorted member list."""
    if suspect_set.culprit is not None:
        raise ValueError("culprit already assigned")
    members = sorted(suspect_set.members)
    culprit = members[random.Random(seed).randrange(len(members))]
    return SuspectSet(members=suspect_set.members, culprit=culprit, fitness=suspect_set.fitness)


def _preferred_evidence_fact(entity) -> Fact | None:
    for predicate in EVIDENCE_PREFERENCE:
        facts = sorted(entity.facts_by_predicate(predicate), key=Fact.sort_key)
        if facts:
            return facts[0]
    return None


def render_fact_text(fact: Fact, labels: dict) -> str:
    template = template_for(fact.predicate, "suspect-hint")
    value = fact_source_text(fact, labels)
    subject = label_or_local(labels, fact.subject)
    if template is None:
        return f'{subject}: "{value}"'
    return template.format(subject=subject, value=value)


def assign_evidence(suspect_set: SuspectSet, graph, locations, seed: int, labels: dict) -> list:
    """One evidence item per innocent, spread over distinct locations."""
    if suspect_set.culprit is None:
        raise ValueError("culprit must be assigned before evidence")
    if not locations:
        raise ValueError("need at least one location for evidence placement")
    rng = random.Random(seed)
    placement = list(locations)
    rng.shuffle(placement)
    items = []
    for index, innocent in enumerate(sorted(suspect_set.innocents)):
        entity = graph.entity(innocent)
        fact = _preferred_evidence_fact(entity)
        if fact is None:
            raise InsufficientFactsError(f"innocent {innocent} has no usable evidence fact")
        placed_at = placement[index % len(placement)]
        items.append(
            EvidenceItem(
                about=innocent,
                fact=fact,
                placed_at=placed_at,
                text=render_fact_text(fact, labels),
            )
        )
    return items


def _shift_date(value: str, offset: int) -> str:
    parsed = date.fromisoformat(value)
    year = parsed.year + offset
    month, day = parsed.month, parsed.day
    if month == 2 and day == 29:
        try:
            date(year, 2, 29)
        except ValueError:
            day = 28
    return date(year, month, day).isoformat()


def inject_lie(culprit_entity, seed: int, graph) -> LiedFact:
    """Alter one liable personal fact of the culprit, seeded.

    Birth dates shift 1-3 years (either direction, month-day preserved);
    occupations swap to one present elsewhere in the graph. The altered
    value never collides with any true value the culprit holds for the
    same predicate.
    """
    rng = random.Random(seed)
    candidates = []
    for predicate in LIABLE_PREDICATES:
        candidates.extend(sorted(culprit_entity.facts_by_predicate(predicate), key=Fact.sort_key))

    own_occupations = {f.object_key for f in culprit_entity.facts_by_predicate("occupation")}
    graph_occupations = sorted(
        {
            f.object_key
            for entity in graph.entities.values()
            for f in entity.facts_by_predicate("occupation")
        }
        - own_occupations
    )

    alterable = []
    for fact in candidates:
        if fact.predicate == "birth-date":
            alterable.append(fact)
        elif fact.predicate == "occupation" and graph_occupations:
            alterable.append(fact)
    if not alterable:
        raise NoLiableFactError(f"culprit {culprit_entity.id} has no alterable fact")

    truth = alterable[rng.randrange(len(alterable))]
    if truth.predicate == "birth-date":
        offset = rng.choice(LIE_YEAR_OFFSETS)
        altered_value = _shift_date(truth.object_literal.value, offset)
        datatype = "date"
    else:
        altered_value = graph_occupations[rng.randrange(len(graph_occupations))]
        datatype = truth.object_literal.datatype if truth.object_literal else "text"

    altered = Fact(
        subject=truth.subject,
        predicate=truth.predicate,
        object_entity=None,
        object_literal=Literal(altered_value, datatype),
        source=truth.source,
    )
    return LiedFact(truth=truth, altered=altered, culprit=culprit_entity.id)
