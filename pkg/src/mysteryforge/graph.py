"""Typed knowledge graph over fetched entities.

Edges are stored directed as reported by the source but traversed as
undirected: article connections are semantic, not directional. Expansion,
path-finding and relatedness are all deterministic; ties always break on
sorted IRIs.
"""

from collections import deque
from dataclasses import dataclass, field

from .canonical import canonical_dumps
from .errors import NoPathError, NotFoundError
from .ingest import fetch_entity, fetch_neighbors

DEFAULT_FAN_OUT_CAP = 16
DEFAULT_RELATEDNESS_WEIGHTS = (0.5, 0.3, 0.2)


@dataclass
class KnowledgeGraph:
    entities: dict = field(default_factory=dict)  # iri -> Entity
    edges: list = field(default_factory=list)  # (source, predicate, target) triples
    _edge_set: set = field(default_factory=set, repr=False)
    _adjacency: dict = field(default_factory=dict, repr=False)  # iri -> set of undirected neighbors

    def add_entity(self, entity) -> None:
        self.entities.setdefault(entity.id, entity)
        self._adjacency.setdefault(entity.id, set())

    def add_edge(self, source: str, predicate: str, target: str) -> None:
        if source not in self.entities or target not in self.entities:
            raise NotFoundError(f"edge endpoint missing from graph: {source} -> {target}")
        triple = (source, predicate, target)
        if triple in self._edge_set:
            return
        self._edge_set.add(triple)
        self.edges.append(triple)
        self._adjacency[source].add(target)
        self._adjacency[target].add(source)

    def __contains__(self, iri: str) -> bool:
        return iri in self.entities

    def entity(self, iri: str):
        try:
            return self.entities[iri]
        except KeyError:
            raise NotFoundError(f"entity not in graph: {iri}") from None

    def neighbors(self, iri: str) -> set:
        """Undirected neighbor IRIs (self excluded)."""
        return self._adjacency.get(iri, set()) - {iri}

    def has_edge(self, a: str, b: str) -> bool:
        return b in self._adjacency.get(a, ())

    def persons(self) -> list:
        return sorted(iri for iri, e in self.entities.items() if e.kind == "person")

    def to_canonical(self) -> dict:
        return {
            "entities": sorted(self.entities),
            "edges": [
                {"source": s, "predicate": p, "target": t}
                for s, p, t in sorted(self.edges)
            ],
        }

    def canonical_text(self) -> str:
        return canonical_dumps(self.to_canonical())

    def to_node_link(self) -> dict:
        """Node-link export for UI overlays."""
        return {
            "nodes": [
                {"id": iri, "label": self.entities[iri].label, "kind": self.entities[iri].kind}
                for iri in sorted(self.entities)
            ],
            "links": [
                {"source": s, "predicate": p, "target": t}
                for s, p, t in sorted(self.edges)
            ],
        }


@dataclass(frozen=True)
class ArticlePath:
    nodes: tuple  # ordered entity IRIs
    predicates: tuple  # len(nodes) - 1 edge predicates

    def __post_init__(self):
        if len(self.predicates) != max(len(self.nodes) - 1, 0):
            raise ValueError("predicate count must be node count - 1")
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("article path repeats a node")

    def __len__(self):
        return len(self.nodes)


def build_graph(source, seed_iri: str, depth: int, fan_out_cap: int = DEFAULT_FAN_OUT_CAP) -> KnowledgeGraph:
    """Breadth-first expansion from a seed article.

    Per-node fan-out is capped deterministically: distinct counterpart IRIs
    are sorted and only the first ``fan_out_cap`` kept.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    graph = KnowledgeGraph()
    seed_entity = fetch_entity(source, seed_iri)
    graph.add_entity(seed_entity)
    frontier = [seed_iri]
    seen = {seed_iri}
    for _ in range(depth):
        next_frontier = []
        for iri in frontier:
            # Directed triples touching this node; counterpart is the far end.
            touching = [(iri, p, t) for p, t in source.outgoing(iri)]
            touching += [(s, p, iri) for p, s in source.incoming(iri)]
            counterparts = {s if t == iri else t for s, _, t in touching} - {iri}
            kept = set(sorted(counterparts)[:fan_out_cap])
            for target in sorted(kept):
                if target not in seen:
                    try:
                        graph.add_entity(fetch_entity(source, target))
                    except NotFoundError:  # dangling link in the source
                        kept.discard(target)
                        continue
                    seen.add(target)
                    next_frontier.append(target)
            for s, p, t in touching:
                far = s if t == iri else t
                if (far == iri or far in kept) and s in graph and t in graph:
                    graph.add_edge(s, p, t)
        frontier = sorted(next_frontier)
    return graph


def _bfs_distances(graph: KnowledgeGraph, start: str) -> dict:
    dist = {start: 0}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for neighbor in graph.neighbors(node):
            if neighbor not in dist:
                dist[neighbor] = dist[node] + 1
                queue.append(neighbor)
    return dist


def _edge_predicate(graph: KnowledgeGraph, a: str, b: str) -> str:
    """Predicate label for the undirected hop a-b: smallest stored triple."""
    candidates = [p for s, p, t in graph.edges if (s == a and t == b) or (s == b and t == a)]
    return min(candidates)


def find_path(graph: KnowledgeGraph, src: str, dst: str, max_len: int | None = None) -> ArticlePath:
    """Shortest undirected path, ties broken by lexicographic node sequence.

    Greedy reconstruction over distances-to-destination yields the unique
    lexicographically smallest shortest node sequence.
    """
    if src not in graph:
        raise NotFoundError(f"source not in graph: {src}")
    if dst not in graph:
        raise NotFoundError(f"destination not in graph: {dst}")
    if src == dst:
        return ArticlePath((src,), ())
    dist_to_dst = _bfs_distances(graph, dst)
    if src not in dist_to_dst:
        raise NoPathError(f"no path from {src} to {dst}")
    length = dist_to_dst[src]
    if max_len is not None and length > max_len:
        raise NoPathError(f"shortest path has {length} edges, exceeds max {max_len}")
    nodes = [src]
    current = src
    while current != dst:
        step = min(
            n for n in graph.neighbors(current) if dist_to_dst.get(n) == dist_to_dst[current] - 1
        )
        nodes.append(step)
        current = step
    predicates = tuple(_edge_predicate(graph, a, b) for a, b in zip(nodes, nodes[1:]))
    return ArticlePath(tuple(nodes), predicates)


def relatedness(
    graph: KnowledgeGraph,
    a: str,
    b: str,
    weights: tuple = DEFAULT_RELATEDNESS_WEIGHTS,
) -> float:
    """Symmetric relatedness in [0,1].

    weighted sum of: direct-edge indicator, shared-neighbor Jaccard, and
    inverse shortest-path length (1/(1+d), 0 when disconnected).
    """
    if a not in graph:
        raise NotFoundError(f"entity not in graph: {a}")
    if b not in graph:
        raise NotFoundError(f"entity not in graph: {b}")
    if a == b:
        return 1.0
    w_edge, w_jaccard, w_path = weights
    direct = 1.0 if graph.has_edge(a, b) or graph.has_edge(b, a) else 0.0
    na = graph.neighbors(a)
    nb = graph.neighbors(b)
    union = (na | nb) - {a, b}
    shared = (na & nb) - {a, b}
    jaccard = len(shared) / len(union) if union else 0.0
    if direct:
        inv_path = 0.5  # shortest path length is 1
    else:
        dist = _bfs_distances(graph, a).get(b)
        inv_path = 1.0 / (1.0 + dist) if dist is not None else 0.0
    score = w_edge * direct + w_jaccard * jaccard + w_path * inv_path
    return min(max(score, 0.0), 1.0)
