"""Fetch operations over a data source (fixture corpus or live endpoints).

A source object provides raw entities, link neighborhoods and map features;
the functions here add the normalization contracts: deterministic neighbor
ordering, image-confidence scoring and map clipping. In fixture mode every
operation is a pure function of (corpus, arguments).
"""

import string
from dataclasses import dataclass

from .errors import NoGeoError, NotFoundError
from .fixtures import FixtureCorpus, load_fixture_corpus
from .geometry import clip_feature
from .model import Entity, ImageCandidate, MapExtract

DEFAULT_FLAG_THRESHOLD = 0.5
DEFAULT_MAP_RADIUS_DEG = 0.02

_PUNCT_TABLE = str.maketrans({ch: " " for ch in string.punctuation})


def tokens(text: str) -> set:
    """Lowercased, punctuation-stripped word set."""
    return set(text.lower().translate(_PUNCT_TABLE).split())


def caption_confidence(caption: str, label: str) -> float:
    """Token overlap between caption and entity label, in [0,1]."""
    label_tokens = tokens(label)
    if not label_tokens:
        return 0.0
    return len(tokens(caption) & label_tokens) / len(label_tokens)


class FixtureSource:
    """Data source backed by a loaded fixture corpus."""

    mode = "fixture"

    def __init__(self, corpus: FixtureCorpus):
        self.corpus = corpus

    @classmethod
    def from_path(cls, path) -> "FixtureSource":
        return cls(load_fixture_corpus(path))

    def entity(self, iri: str) -> Entity:
        return self.corpus.get(iri)

    def outgoing(self, iri: str):
        entity = self.corpus.get(iri)
        return [
            (fact.predicate, fact.object_entity)
            for fact in entity.facts
            if fact.object_entity is not None
        ]

    def incoming(self, iri: str):
        self.corpus.get(iri)  # raises not-found for unknown ids
        return list(self.corpus.incoming.get(iri, ()))

    def map_features(self, iri: str):
        return self.corpus.map_features(iri)

    def entity_count(self) -> int:
        return self.corpus.entity_count

    def iris(self):
        return self.corpus.iris()

    def find_by_label(self, label: str):
        return sorted(e.id for e in self.corpus.entities.values() if e.label == label)


def fetch_entity(source, iri: str) -> Entity:
    """Return the normalized entity record for one article."""
    return source.entity(iri)


def fetch_neighbors(source, iri: str, predicate_filter=None):
    """Outgoing plus incoming links, deduplicated, sorted by (predicate, IRI)."""
    pairs = set(source.outgoing(iri)) | set(source.incoming(iri))
    if predicate_filter is not None:
        wanted = set(predicate_filter)
        pairs = {(p, t) for p, t in pairs if p in wanted}
    return sorted(pairs)


def fetch_image_candidates(source, entity: Entity, flag_threshold: float = DEFAULT_FLAG_THRESHOLD):
    """Score stored image candidates against the entity label.

    Returns (candidates sorted by confidence desc then url, flagged list);
    low-confidence candidates are retained, only flagged.
    """
    candidates = [
        ImageCandidate(url, caption, caption_confidence(caption, entity.label))
        for url, caption in entity.images
    ]
    candidates.sort(key=lambda c: (-c.confidence, c.url_or_path))
    flagged = [c for c in candidates if c.confidence < flag_threshold]
    return candidates, flagged


def fetch_map_extract(source, iri: str, radius_deg: float = DEFAULT_MAP_RADIUS_DEG) -> MapExtract:
    """Map features around a place, clipped to a box centered on its geo."""
    entity = source.entity(iri)
    if entity.kind != "place" or entity.geo is None:
        raise NoGeoError(f"{iri} is not a place with coordinates")
    lat, lon = entity.geo
    box = (lat - radius_deg, lon - radius_deg, lat + radius_deg, lon + radius_deg)
    clipped = []
    for feature in source.map_features(iri):
        clipped.extend(clip_feature(feature, box))
    return MapExtract(place=iri, bounding_box=box, features=tuple(clipped))


def resolve_label(source, label: str) -> str:
    """Exact-label entity resolution; ambiguity is an error, never a guess."""
    matches = source.find_by_label(label)
    if not matches:
        raise NotFoundError(f"no entity labeled {label!r}")
    if len(matches) > 1:
        raise NotFoundError(f"label {label!r} is ambiguous: {matches}")
    return matches[0]


@dataclass(frozen=True)
class SourceHandle:
    """Convenience bundle pairing a source with its scoring thresholds."""

    source: object
    flag_threshold: float = DEFAULT_FLAG_THRESHOLD
    map_radius_deg: float = DEFAULT_MAP_RADIUS_DEG
