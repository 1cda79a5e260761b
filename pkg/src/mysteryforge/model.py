"""Domain records for normalized linked-data articles.

An Entity is one article plus its predicate-object facts; everything a game
touches (NPCs, locations, items, dialog, images) is instantiated from these
records. The predicate vocabulary is deliberately closed: dialog templates
stay total, and anything a source reports outside the vocabulary is folded
into ``generic-link``.
"""

from dataclasses import dataclass, field
from datetime import date

from .errors import MalformedSourceError

# Closed predicate vocabulary; unknown source predicates become generic-link.
PREDICATES = (
    "birth-date",
    "death-date",
    "occupation",
    "birth-place",
    "spouse",
    "colleague",
    "known-for",
    "located-in",
    "creator-of",
    "generic-link",
)
PREDICATE_SET = frozenset(PREDICATES)

ENTITY_KINDS = frozenset({"person", "place", "work", "organization", "other"})
REPOSITORIES = frozenset({"wikipedia", "dbpedia", "commons", "osm", "fixture"})
LITERAL_DATATYPES = frozenset({"text", "date", "number"})
FEATURE_KINDS = frozenset({"road", "building", "water", "landmark"})

GAME_MODES = ("linkpath", "wikimystery", "data-agent")


def valid_iri(iri) -> bool:
    """Cheap absolute-IRI check: non-empty, has a scheme, no whitespace."""
    if not isinstance(iri, str) or not iri:
        return False
    if any(ch.isspace() for ch in iri):
        return False
    scheme, sep, rest = iri.partition(":")
    return bool(sep) and bool(rest) and scheme[:1].isalpha() and scheme.isalnum()


def check_iri(iri: str) -> str:
    if not valid_iri(iri):
        raise MalformedSourceError(f"invalid entity IRI: {iri!r}")
    return iri


def _check_iso_date(value: str) -> None:
    try:
        date.fromisoformat(value)
    except ValueError as exc:
        raise MalformedSourceError(f"bad date literal {value!r}: {exc}") from None


@dataclass(frozen=True)
class SourceRecord:
    repository: str
    retrieved_at: str  # UTC ISO-8601 timestamp
    source_ref: str  # endpoint URL (live) or fixture file path

    def __post_init__(self):
        if self.repository not in REPOSITORIES:
            raise MalformedSourceError(f"unknown repository {self.repository!r}")

    def to_canonical(self) -> dict:
        return {
            "repository": self.repository,
            "retrieved_at": self.retrieved_at,
            "source_ref": self.source_ref,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SourceRecord":
        return cls(data["repository"], data["retrieved_at"], data["source_ref"])


@dataclass(frozen=True)
class Literal:
    value: str
    datatype: str  # text | date | number

    def __post_init__(self):
        if self.datatype not in LITERAL_DATATYPES:
            raise MalformedSourceError(f"unknown literal datatype {self.datatype!r}")
        if self.datatype == "date":
            _check_iso_date(self.value)


@dataclass(frozen=True)
class Fact:
    subject: str  # entity IRI
    predicate: str
    object_entity: str | None = None
    object_literal: Literal | None = None
    source: SourceRecord | None = None

    def __post_init__(self):
        if self.predicate not in PREDICATE_SET:
            raise MalformedSourceError(f"predicate {self.predicate!r} outside vocabulary")
        if (self.object_entity is None) == (self.object_literal is None):
            raise MalformedSourceError("fact object must be exactly one of entity or literal")
        if self.source is None:
            raise MalformedSourceError("fact provenance missing")

    @property
    def object_key(self) -> str:
        """Sort / identity key of the object side."""
        if self.object_entity is not None:
            return self.object_entity
        return self.object_literal.value

    def sort_key(self):
        return (self.predicate, self.object_key)

    def to_canonical(self) -> dict:
        if self.object_entity is not None:
            obj = {"entity": self.object_entity}
        else:
            obj = {"literal": {"value": self.object_literal.value, "datatype": self.object_literal.datatype}}
        return {"predicate": self.predicate, "object": obj, "source": self.source.to_canonical()}

    def to_canonical_with_subject(self) -> dict:
        """Standalone fact form (outside an entity file): subject leads."""
        return {"subject": self.subject} | self.to_canonical()

    @classmethod
    def from_dict(cls, subject: str, data: dict) -> "Fact":
        predicate = data["predicate"]
        if predicate not in PREDICATE_SET:
            predicate = "generic-link"
        obj = data["object"]
        entity = None
        literal = None
        if "entity" in obj:
            entity = check_iri(obj["entity"])
        elif "literal" in obj:
            literal = Literal(obj["literal"]["value"], obj["literal"]["datatype"])
        else:
            raise MalformedSourceError(f"fact object {obj!r} has neither entity nor literal")
        return cls(subject, predicate, entity, literal, SourceRecord.from_dict(data["source"]))


@dataclass(frozen=True)
class ImageCandidate:
    url_or_path: str
    caption: str
    confidence: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise MalformedSourceError(f"image confidence {self.confidence} outside [0,1]")


@dataclass
class Entity:
    id: str
    label: str
    kind: str
    facts: list = field(default_factory=list)
    images: list = field(default_factory=list)  # (url, caption) pairs as stored
    geo: tuple | None = None  # (lat, lon) degrees

    def __post_init__(self):
        check_iri(self.id)
        if not self.label:
            raise MalformedSourceError(f"entity {self.id} has empty label")
        if self.kind not in ENTITY_KINDS:
            raise MalformedSourceError(f"unknown entity kind {self.kind!r}")
        if self.kind == "place" and self.geo is None:
            raise MalformedSourceError(f"place {self.id} lacks geo coordinates")
        for fact in self.facts:
            if fact.subject != self.id:
                raise MalformedSourceError(f"fact subject {fact.subject} != entity {self.id}")

    def facts_by_predicate(self, predicate: str) -> list:
        return [f for f in self.facts if f.predicate == predicate]

    def to_canonical(self) -> dict:
        # Field order: id, label, kind, facts, images, geo.
        return {
            "id": self.id,
            "label": self.label,
            "kind": self.kind,
            "facts": [f.to_canonical() for f in sorted(self.facts, key=Fact.sort_key)],
            "images": [{"url": url, "caption": caption} for url, caption in sorted(self.images)],
            "geo": None if self.geo is None else {"lat": float(self.geo[0]), "lon": float(self.geo[1])},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Entity":
        iri = check_iri(data["id"])
        geo = None
        if data.get("geo") is not None:
            geo = (float(data["geo"]["lat"]), float(data["geo"]["lon"]))
        return cls(
            id=iri,
            label=data["label"],
            kind=data["kind"],
            facts=[Fact.from_dict(iri, f) for f in data.get("facts", [])],
            images=[(img["url"], img["caption"]) for img in data.get("images", [])],
            geo=geo,
        )


@dataclass(frozen=True)
class MapFeature:
    kind: str  # road | building | water | landmark
    points: tuple  # ((lat, lon), ...)

    def __post_init__(self):
        if self.kind not in FEATURE_KINDS:
            raise MalformedSourceError(f"unknown feature kind {self.kind!r}")

    def to_canonical(self) -> dict:
        return {
            "kind": self.kind,
            "points": [{"lat": float(lat), "lon": float(lon)} for lat, lon in self.points],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MapFeature":
        return cls(data["kind"], tuple((float(p["lat"]), float(p["lon"])) for p in data["points"]))

    def sort_key(self):
        return (self.kind, self.points)


@dataclass(frozen=True)
class MapExtract:
    place: str
    bounding_box: tuple  # (min_lat, min_lon, max_lat, max_lon)
    features: tuple = ()

    def __post_init__(self):
        min_lat, min_lon, max_lat, max_lon = self.bounding_box
        if not (min_lat < max_lat and min_lon < max_lon):
            raise MalformedSourceError(f"bounding box {self.bounding_box} not well-ordered")

    def to_canonical(self) -> dict:
        min_lat, min_lon, max_lat, max_lon = self.bounding_box
        return {
            "place": self.place,
            "bounding_box": {
                "min_lat": float(min_lat),
                "min_lon": float(min_lon),
                "max_lat": float(max_lat),
                "max_lon": float(max_lon),
            },
            "features": [f.to_canonical() for f in self.features],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MapExtract":
        box = data["bounding_box"]
        return cls(
            place=data["place"],
            bounding_box=(
                float(box["min_lat"]),
                float(box["min_lon"]),
                float(box["max_lat"]),
                float(box["max_lon"]),
            ),
            features=tuple(MapFeature.from_dict(f) for f in data.get("features", [])),
        )
