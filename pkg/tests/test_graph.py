import random as stdlib_random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mysteryforge.errors import NoPathError, NotFoundError
from mysteryforge.fixtures import write_fixture_corpus
from mysteryforge.graph import (
    DEFAULT_RELATEDNESS_WEIGHTS,
    KnowledgeGraph,
    build_graph,
    find_path,
    relatedness,
)
from mysteryforge.ingest import FixtureSource

from .oracles import relatedness_ref, shortest_path_ref
from .worlds import T, adjacency_of, graph_of, link, person, place


def chain_world(tmp_path):
    """a - b - c - d plus a dead-end e off b; hand-drawn."""
    entities = [
        person("a", link("a", "colleague", "b")),
        person("b", link("b", "colleague", "c"), link("b", "generic-link", "e")),
        person("c", link("c", "spouse", "d")),
        person("d"),
        person("e"),
        person("island"),
    ]
    root = write_fixture_corpus(tmp_path / "chain", entities)
    return FixtureSource.from_path(root)


def test_build_graph_depth_zero_is_seed_only(tmp_path):
    source = chain_world(tmp_path)
    graph = build_graph(source, T + "a", depth=0)
    assert set(graph.entities) == {T + "a"}
    assert graph.edges == []


def test_build_graph_depth_semantics(tmp_path):
    source = chain_world(tmp_path)
    one = build_graph(source, T + "a", depth=1)
    assert set(one.entities) == {T + "a", T + "b"}
    two = build_graph(source, T + "a", depth=2)
    assert set(two.entities) == {T + "a", T + "b", T + "c", T + "e"}
    assert (T + "a", "colleague", T + "b") in two._edge_set
    assert (T + "b", "colleague", T + "c") in two._edge_set


def test_build_graph_follows_incoming_links(tmp_path):
    source = chain_world(tmp_path)
    graph = build_graph(source, T + "d", depth=1)
    # d has no outgoing links; c reaches it via spouse.
    assert set(graph.entities) == {T + "d", T + "c"}
    assert (T + "c", "spouse", T + "d") in graph._edge_set


def test_build_graph_fan_out_cap_keeps_sorted_prefix(tmp_path):
    hub_links = [link("hub", "generic-link", f"n{i:02d}") for i in range(20)]
    entities = [person("hub", *hub_links)] + [person(f"n{i:02d}") for i in range(20)]
    root = write_fixture_corpus(tmp_path / "hub", entities)
    source = FixtureSource.from_path(root)
    graph = build_graph(source, T + "hub", depth=1, fan_out_cap=16)
    kept = sorted(set(graph.entities) - {T + "hub"})
    assert kept == [T + f"n{i:02d}" for i in range(16)]


def test_build_graph_negative_depth_rejected(tmp_path):
    source = chain_world(tmp_path)
    with pytest.raises(ValueError):
        build_graph(source, T + "a", depth=-1)


def test_find_path_trivial_and_direct():
    graph = graph_of(person("a", link("a", "spouse", "b")), person("b"))
    assert find_path(graph, T + "a", T + "a").nodes == (T + "a",)
    path = find_path(graph, T + "a", T + "b")
    assert path.nodes == (T + "a", T + "b")
    assert path.predicates == ("spouse",)


def test_find_path_prefers_lexicographically_smallest():
    """Diamond: s-alpha-t and s-beta-t are both shortest; alpha wins."""
    graph = graph_of(
        person("s", link("s", "colleague", "alpha"), link("s", "colleague", "beta")),
        person("alpha", link("alpha", "colleague", "t")),
        person("beta", link("beta", "colleague", "t")),
        person("t"),
    )
    assert find_path(graph, T + "s", T + "t").nodes == (T + "s", T + "alpha", T + "t")


def test_find_path_no_path():
    graph = graph_of(person("a"), person("b"))
    with pytest.raises(NoPathError):
        find_path(graph, T + "a", T + "b")


def test_find_path_max_len():
    graph = graph_of(
        person("a", link("a", "colleague", "b")),
        person("b", link("b", "colleague", "c")),
        person("c"),
    )
    with pytest.raises(NoPathError):
        find_path(graph, T + "a", T + "c", max_len=1)
    assert find_path(graph, T + "a", T + "c", max_len=2).nodes == (T + "a", T + "b", T + "c")


def test_find_path_unknown_endpoints():
    graph = graph_of(person("a"))
    with pytest.raises(NotFoundError):
        find_path(graph, T + "a", T + "zz")
    with pytest.raises(NotFoundError):
        find_path(graph, T + "zz", T + "a")


def test_path_predicates_use_smallest_stored_triple():
    graph = graph_of(
        person("a", link("a", "spouse", "b"), link("a", "colleague", "b")),
        person("b"),
    )
    path = find_path(graph, T + "a", T + "b")
    assert path.predicates == ("colleague",)


def random_graph(node_count: int, edge_seed: int) -> KnowledgeGraph:
    rng = stdlib_random.Random(edge_seed)
    names = [f"n{i}" for i in range(node_count)]
    edges = []
    for i in range(node_count):
        for j in range(i + 1, node_count):
            if rng.random() < 0.3:
                edges.append((names[i], "generic-link", names[j]))
    return graph_of(*[person(n) for n in names], edges=edges)


@settings(max_examples=60, deadline=None)
@given(
    node_count=st.integers(min_value=2, max_value=10),
    edge_seed=st.integers(min_value=0, max_value=10_000),
    pick=st.integers(min_value=0, max_value=10_000),
)
def test_find_path_matches_brute_force(node_count, edge_seed, pick):
    graph = random_graph(node_count, edge_seed)
    nodes = sorted(graph.entities)
    rng = stdlib_random.Random(pick)
    src, dst = rng.sample(nodes, 2)
    expected = shortest_path_ref(adjacency_of(graph), src, dst)
    if expected is None:
        with pytest.raises(NoPathError):
            find_path(graph, src, dst)
    else:
        assert find_path(graph, src, dst).nodes == expected


def test_relatedness_hand_value():
    """a-b direct, sharing neighbor x; every term verified by hand.

    direct = 1; shared = {x}; union = {x, y}; jaccard = 1/2; inverse = 1/2
    => 0.5*1 + 0.3*0.5 + 0.2*0.5 = 0.75
    """
    graph = graph_of(
        person("a", link("a", "colleague", "b"), link("a", "generic-link", "x")),
        person("b", link("b", "generic-link", "x"), link("b", "generic-link", "y")),
        person("x"),
        person("y"),
    )
    assert relatedness(graph, T + "a", T + "b") == pytest.approx(0.75)


def test_relatedness_two_hop_hand_value():
    """a-m-b chain: no direct edge, shared {m}, union {m}, distance 2.

    => 0.5*0 + 0.3*1.0 + 0.2*(1/3) = 0.3 + 0.0666...
    """
    graph = graph_of(
        person("a", link("a", "colleague", "m")),
        person("m", link("m", "colleague", "b")),
        person("b"),
    )
    assert relatedness(graph, T + "a", T + "b") == pytest.approx(0.3 + 0.2 / 3)


def test_relatedness_identity_and_disconnection():
    graph = graph_of(person("a"), person("b"))
    assert relatedness(graph, T + "a", T + "a") == 1.0
    assert relatedness(graph, T + "a", T + "b") == 0.0


@settings(max_examples=40, deadline=None)
@given(
    node_count=st.integers(min_value=2, max_value=9),
    edge_seed=st.integers(min_value=0, max_value=10_000),
    pick=st.integers(min_value=0, max_value=10_000),
)
def test_relatedness_matches_oracle(node_count, edge_seed, pick):
    graph = random_graph(node_count, edge_seed)
    nodes = sorted(graph.entities)
    rng = stdlib_random.Random(pick)
    a, b = rng.sample(nodes, 2)
    expected = relatedness_ref(adjacency_of(graph), a, b, DEFAULT_RELATEDNESS_WEIGHTS)
    assert relatedness(graph, a, b) == pytest.approx(expected)


@settings(max_examples=40, deadline=None)
@given(
    node_count=st.integers(min_value=2, max_value=9),
    edge_seed=st.integers(min_value=0, max_value=10_000),
    pick=st.integers(min_value=0, max_value=10_000),
)
def test_relatedness_symmetric_and_bounded(node_count, edge_seed, pick):
    graph = random_graph(node_count, edge_seed)
    nodes = sorted(graph.entities)
    rng = stdlib_random.Random(pick)
    a, b = rng.sample(nodes, 2)
    forward = relatedness(graph, a, b)
    assert forward == relatedness(graph, b, a)
    assert 0.0 <= forward <= 1.0


def test_edges_deduplicated():
    graph = graph_of(person("a", link("a", "spouse", "b"), link("a", "spouse", "b")), person("b"))
    assert len(graph.edges) == 1


def test_add_edge_requires_known_endpoints():
    graph = KnowledgeGraph()
    graph.add_entity(person("a"))
    with pytest.raises(NotFoundError):
        graph.add_edge(T + "a", "spouse", T + "ghost")
