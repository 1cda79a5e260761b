"""Builders for small hand-made worlds: entities, graphs, corpora.

Tests that need exact, countable structure build it here instead of leaning
on the standard corpus, so every expectation in them is hand-checkable.
"""

from mysteryforge.fixtures import FIXTURE_TIMESTAMP
from mysteryforge.graph import KnowledgeGraph
from mysteryforge.model import Entity, Fact, Literal, MapFeature, SourceRecord

T = "https://t.test/"


def rec() -> SourceRecord:
    return SourceRecord("fixture", FIXTURE_TIMESTAMP, "test-world")


def link(subject: str, predicate: str, target: str) -> Fact:
    return Fact(T + subject, predicate, object_entity=T + target, source=rec())


def lit(subject: str, predicate: str, value: str, datatype: str = "text") -> Fact:
    return Fact(T + subject, predicate, object_literal=Literal(value, datatype), source=rec())


def person(name: str, *facts, label: str | None = None, images=()) -> Entity:
    return Entity(T + name, label or name, "person", list(facts), images=list(images))


def place(name: str, *facts, label: str | None = None, lat: float = 10.0, lon: float = 20.0) -> Entity:
    return Entity(T + name, label or name, "place", list(facts), geo=(lat, lon))


def work(name: str, *facts) -> Entity:
    return Entity(T + name, name, "work", list(facts))


def graph_of(*entities, edges=()) -> KnowledgeGraph:
    """Graph over the given entities: their link facts plus extra edges.

    ``edges`` entries are (subject, predicate, target) in short names.
    """
    graph = KnowledgeGraph()
    for entity in entities:
        graph.add_entity(entity)
    for entity in entities:
        for fact in entity.facts:
            if fact.object_entity is not None and fact.object_entity in graph.entities:
                graph.add_edge(entity.id, fact.predicate, fact.object_entity)
    for subject, predicate, target in edges:
        graph.add_edge(T + subject, predicate, T + target)
    return graph


def adjacency_of(graph: KnowledgeGraph) -> dict:
    """Undirected adjacency dict mirroring the graph, for the oracles."""
    table = {iri: set() for iri in graph.entities}
    for source, _, target in graph.edges:
        table[source].add(target)
        table[target].add(source)
    return table


def road(*points) -> MapFeature:
    return MapFeature("road", tuple(points))


def building(*points) -> MapFeature:
    return MapFeature("building", tuple(points))
