"""Frozen, checksummed corpus of source-data responses.

A corpus directory holds one canonical entity file per article plus optional
map-feature files for places, all listed in a ``manifest`` with SHA-256
checksums. Loading verifies every checksum, parses every entity and builds
the incoming-link index; the handle is immutable afterwards and safe for
concurrent readers.

File naming: percent-encoded IRI + ``.json`` (entities) or ``.map.json``
(map features).
"""

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from urllib.parse import quote, unquote

from .canonical import canonical_bytes
from .errors import ChecksumMismatchError, MalformedSourceError, MissingManifestError, NotFoundError, ParseError
from .model import Entity, MapFeature

MANIFEST_NAME = "manifest"
ENTITY_SUFFIX = ".json"
MAP_SUFFIX = ".map.json"

# Frozen timestamp stamped on fixture provenance records by the writer.
FIXTURE_TIMESTAMP = "1970-01-01T00:00:00Z"


def entity_filename(iri: str) -> str:
    return quote(iri, safe="") + ENTITY_SUFFIX


def map_filename(iri: str) -> str:
    return quote(iri, safe="") + MAP_SUFFIX


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


@dataclass(frozen=True)
class FixtureCorpus:
    """Immutable handle over a loaded corpus."""

    path: Path
    entities: dict  # iri -> Entity
    maps: dict  # place iri -> tuple[MapFeature]
    incoming: dict  # iri -> tuple[(predicate, source iri)]

    @property
    def entity_count(self) -> int:
        return len(self.entities)

    def get(self, iri: str) -> Entity:
        try:
            return self.entities[iri]
        except KeyError:
            raise NotFoundError(f"entity not in corpus: {iri}") from None

    def __contains__(self, iri: str) -> bool:
        return iri in self.entities

    def map_features(self, iri: str) -> tuple:
        return self.maps.get(iri, ())

    def iris(self) -> list:
        return sorted(self.entities)


def load_fixture_corpus(path) -> FixtureCorpus:
    """Parse and index a corpus directory, verifying the manifest checksums."""
    root = Path(path)
    manifest_path = root / MANIFEST_NAME
    if not manifest_path.is_file():
        raise MissingManifestError(f"no manifest in {root}")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc.msg), str(manifest_path), exc.lineno) from None

    entities = {}
    maps = {}
    for record in manifest.get("files", []):
        file_path = root / record["path"]
        if not file_path.is_file():
            raise ChecksumMismatchError(f"manifest lists missing file {record['path']}")
        data = file_path.read_bytes()
        if _sha256(data) != record["sha256"]:
            raise ChecksumMismatchError(f"checksum mismatch for {record['path']}")
        try:
            parsed = json.loads(data.decode("utf-8"))
        except json.JSONDecodeError as exc:
            raise ParseError(str(exc.msg), str(file_path), exc.lineno) from None
        try:
            if record["path"].endswith(MAP_SUFFIX):
                features = tuple(MapFeature.from_dict(f) for f in parsed.get("features", []))
                maps[parsed["place"]] = features
            else:
                entity = Entity.from_dict(parsed)
                entities[entity.id] = entity
        except (MalformedSourceError, KeyError, TypeError, ValueError) as exc:
            raise ParseError(str(exc), str(file_path)) from None

    declared = manifest.get("entity_count")
    if declared is not None and declared != len(entities):
        raise ChecksumMismatchError(
            f"manifest declares {declared} entities, found {len(entities)}"
        )

    incoming = {}
    for entity in entities.values():
        for fact in entity.facts:
            if fact.object_entity is not None:
                incoming.setdefault(fact.object_entity, []).append((fact.predicate, entity.id))
    frozen_incoming = {iri: tuple(sorted(links)) for iri, links in incoming.items()}
    return FixtureCorpus(path=root, entities=entities, maps=maps, incoming=frozen_incoming)


def write_fixture_corpus(path, entities, maps=None) -> Path:
    """Write entities (and optional place->features map data) as a corpus.

    Every file is canonical; the manifest is written last so a corpus is
    never readable half-written.
    """
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    maps = maps or {}
    files = []
    for entity in entities:
        name = entity_filename(entity.id)
        data = canonical_bytes(entity.to_canonical())
        (root / name).write_bytes(data)
        files.append({"path": name, "sha256": _sha256(data)})
    for place_iri, features in maps.items():
        name = map_filename(place_iri)
        payload = {
            "place": place_iri,
            "features": [f.to_canonical() for f in sorted(features, key=MapFeature.sort_key)],
        }
        data = canonical_bytes(payload)
        (root / name).write_bytes(data)
        files.append({"path": name, "sha256": _sha256(data)})
    manifest = {
        "entity_count": len(entities),
        "files": sorted(files, key=lambda r: r["path"]),
    }
    (root / MANIFEST_NAME).write_bytes(canonical_bytes(manifest))
    return root


def iri_from_filename(name: str) -> str:
    for suffix in (MAP_SUFFIX, ENTITY_SUFFIX):
        if name.endswith(suffix):
            return unquote(name[: -len(suffix)])
    return unquote(name)
