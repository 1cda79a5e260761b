"""Live open-data clients behind the same source interface as fixtures.

Four endpoint clients: SPARQL for structured facts and links, a wiki REST
API for labels and page images, a media API for extra image candidates,
and an Overpass-style API for map features. Every HTTP response is cached
on disk keyed by request hash with atomic write-then-rename, so a live
session is reproducible and can be frozen into a fixture corpus.
"""

import hashlib
import json
from datetime import datetime, timezone
from pathlib import Path
from urllib.parse import quote

import httpx

from .config import ForgeConfig
from .errors import MalformedSourceError, NetworkUnreachableError, NotFoundError
from .fixtures import write_fixture_corpus
from .model import Entity, Fact, Literal, MapFeature, SourceRecord

# DBpedia-style property local names -> the closed predicate vocabulary.
PREDICATE_MAP = {
    "birthDate": "birth-date",
    "deathDate": "death-date",
    "occupation": "occupation",
    "birthPlace": "birth-place",
    "spouse": "spouse",
    "colleague": "colleague",
    "knownFor": "known-for",
    "locatedInArea": "located-in",
    "country": "located-in",
    "isPartOf": "located-in",
    "creator": "creator-of",
    "author": "creator-of",
}

PERSON_TYPES = {"Person", "Agent"}
PLACE_TYPES = {"Place", "PopulatedPlace", "Settlement", "City", "Location"}
WORK_TYPES = {"Work", "MusicalWork", "Film", "Book", "Album", "Song"}
ORG_TYPES = {"Organisation", "Organization", "Company", "Band"}

FEATURE_TAGS = (
    ("highway", "road"),
    ("building", "building"),
    ("waterway", "water"),
)


def _local_name(uri: str) -> str:
    for separator in ("#", "/"):
        if separator in uri:
            uri = uri.rsplit(separator, 1)[1]
    return uri


def map_predicate(uri: str) -> str:
    return PREDICATE_MAP.get(_local_name(uri), "generic-link")


def _utc_now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


class ResponseCache:
    """Disk cache of raw response text, keyed by request hash."""

    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, key: str) -> Path:
        return self.root / f"{key}.json"

    @staticmethod
    def request_key(method: str, url: str, params: dict | None, body: str | None) -> str:
        canon = json.dumps(
            {"method": method, "url": url, "params": params or {}, "body": body or ""},
            sort_keys=True,
        )
        return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:40]

    def get(self, key: str) -> str | None:
        path = self._path(key)
        if not path.exists():
            return None
        return json.loads(path.read_text(encoding="utf-8"))["body"]

    def put(self, key: str, body: str) -> None:
        import os

        path = self._path(key)
        tmp = path.parent / f".tmp-{path.name}"
        tmp.write_text(json.dumps({"body": body}, ensure_ascii=False), encoding="utf-8")
        os.replace(tmp, path)


class HttpJsonClient:
    """One endpoint: GET/POST JSON with retries and the shared cache."""

    def __init__(self, base_url: str, cache: ResponseCache, timeout_s: float, retries: int, client=None):
        self.base_url = base_url.rstrip("/")
        self.cache = cache
        self.retries = retries
        self.client = client or httpx.Client(timeout=timeout_s)

    def request(self, path: str = "", params: dict | None = None, body: str | None = None) -> dict:
        url = f"{self.base_url}{path}"
        method = "POST" if body is not None else "GET"
        key = self.cache.request_key(method, url, params, body)
        cached = self.cache.get(key)
        if cached is not None:
            return json.loads(cached)
        last_error = None
        for _ in range(self.retries + 1):
            try:
                if body is not None:
                    response = self.client.post(url, params=params, content=body)
                else:
                    response = self.client.get(url, params=params)
            except httpx.HTTPError as exc:
                last_error = exc
                continue
            if response.status_code == 404:
                raise NotFoundError(f"{url} -> 404")
            if response.status_code != 200:
                raise MalformedSourceError(f"{url} -> HTTP {response.status_code}")
            try:
                parsed = json.loads(response.text)
            except json.JSONDecodeError as exc:
                raise MalformedSourceError(f"{url}: unparseable response: {exc.msg}")
            self.cache.put(key, response.text)
            return parsed
        raise NetworkUnreachableError(f"{url}: {last_error}")


class LiveSource:
    """Source protocol implementation over live endpoints."""

    mode = "live"

    def __init__(self, config: ForgeConfig, client=None):
        cache = ResponseCache(config.cache_dir)
        endpoints = config.endpoints
        timeout, retries = config.timeout_s, config.retries
        self.sparql = HttpJsonClient(endpoints.sparql, cache, timeout, retries, client)
        self.wiki = HttpJsonClient(endpoints.wiki, cache, timeout, retries, client)
        self.commons = HttpJsonClient(endpoints.commons, cache, timeout, retries, client)
        self.overpass = HttpJsonClient(endpoints.overpass, cache, timeout, retries, client)
        self.map_radius_deg = config.map_radius_deg

    # -- SPARQL ---------------------------------------------------------

    def _select(self, query: str) -> list:
        data = self.sparql.request(
            params={"query": query, "format": "application/sparql-results+json"}
        )
        try:
            return data["results"]["bindings"]
        except (KeyError, TypeError):
            raise MalformedSourceError("SPARQL response missing results.bindings")

    def _raw_properties(self, iri: str) -> list:
        return self._select(f"SELECT ?p ?o WHERE {{ <{iri}> ?p ?o }}")

    def entity(self, iri: str) -> Entity:
        bindings = self._raw_properties(iri)
        if not bindings:
            raise NotFoundError(f"no triples for {iri}")
        label = None
        kind_votes = set()
        lat = lon = None
        facts = []
        source = SourceRecord("dbpedia", _utc_now(), self.sparql.base_url)
        for row in bindings:
            prop = row["p"]["value"]
            obj = row["o"]
            local = _local_name(prop)
            if local == "label":
                if obj.get("xml:lang") in (None, "en") and label is None:
                    label = obj["value"]
                continue
            if local == "type":
                kind_votes.add(_local_name(obj["value"]))
                continue
            if local == "lat":
                lat = float(obj["value"])
                continue
            if local == "long":
                lon = float(obj["value"])
                continue
            predicate = map_predicate(prop)
            if obj["type"] == "uri":
                facts.append(Fact(iri, predicate, object_entity=obj["value"], source=source))
            else:
                datatype = "text"
                dt = _local_name(obj.get("datatype", ""))
                if dt == "date":
                    datatype = "date"
                elif dt in ("integer", "decimal", "double", "float", "int"):
                    datatype = "number"
                if predicate == "generic-link":
                    continue  # plain literals on unknown properties carry no link
                facts.append(
                    Fact(iri, predicate, object_literal=Literal(obj["value"], datatype), source=source)
                )
        kind = "other"
        if kind_votes & PERSON_TYPES:
            kind = "person"
        elif kind_votes & PLACE_TYPES:
            kind = "place"
        elif kind_votes & WORK_TYPES:
            kind = "work"
        elif kind_votes & ORG_TYPES:
            kind = "organization"
        if label is None:
            label = self._wiki_label(iri) or _local_name(iri).replace("_", " ")
        geo = (lat, lon) if lat is not None and lon is not None else None
        if kind == "place" and geo is None:
            kind = "other"  # a place without coordinates cannot host a map screen
        images = self._images(iri, label)
        return Entity(
            id=iri,
            label=label,
            kind=kind,
            facts=tuple(sorted(facts, key=Fact.sort_key)),
            images=tuple(images),
            geo=geo,
        )

    def outgoing(self, iri: str):
        entity = self.entity(iri)
        return [
            (fact.predicate, fact.object_entity)
            for fact in entity.facts
            if fact.object_entity is not None
        ]

    def incoming(self, iri: str):
        bindings = self._select(f"SELECT ?p ?s WHERE {{ ?s ?p <{iri}> }} LIMIT 500")
        pairs = {
            (map_predicate(row["p"]["value"]), row["s"]["value"])
            for row in bindings
            if row["s"]["type"] == "uri"
        }
        return sorted(pairs)

    # -- wiki + media -----------------------------------------------------

    def _wiki_label(self, iri: str) -> str | None:
        title = quote(_local_name(iri), safe="")
        try:
            summary = self.wiki.request(f"/page/summary/{title}")
        except (NotFoundError, MalformedSourceError):
            return None
        return summary.get("title")

    def _images(self, iri: str, label: str) -> list:
        """(url, caption) pairs: wiki page image first, then media search."""
        images = []
        title = quote(_local_name(iri), safe="")
        try:
            summary = self.wiki.request(f"/page/summary/{title}")
            thumb = (summary.get("thumbnail") or {}).get("source")
            if thumb:
                images.append((thumb, summary.get("description") or summary.get("title") or label))
        except (NotFoundError, MalformedSourceError):
            pass
        try:
            data = self.commons.request(
                params={
                    "action": "query",
                    "list": "allimages",
                    "aisearch": label,
                    "format": "json",
                }
            )
            for record in (data.get("query") or {}).get("allimages", []):
                url = record.get("url")
                if url:
                    images.append((url, record.get("comment") or record.get("name") or ""))
        except (NotFoundError, MalformedSourceError):
            pass
        return images

    # -- maps ---------------------------------------------------------------

    def map_features(self, iri: str):
        entity = self.entity(iri)
        if entity.geo is None:
            return ()
        lat, lon = entity.geo
        r = self.map_radius_deg
        bbox = f"{lat - r},{lon - r},{lat + r},{lon + r}"
        query = f"[out:json];(way({bbox}););out geom;"
        data = self.overpass.request(body=query)
        features = []
        for element in data.get("elements", []):
            points = tuple(
                (point["lat"], point["lon"]) for point in element.get("geometry", [])
            )
            if len(points) < 2:
                continue
            tags = element.get("tags", {})
            kind = "landmark"
            for tag, feature_kind in FEATURE_TAGS:
                if tag in tags:
                    kind = feature_kind
                    break
            if tags.get("natural") == "water":
                kind = "water"
            features.append(MapFeature(kind, points))
        return tuple(sorted(features, key=MapFeature.sort_key))

    # -- source protocol extras ----------------------------------------------

    def entity_count(self) -> int:
        raise MalformedSourceError("live source has no bounded entity count")

    def iris(self):
        raise MalformedSourceError("live source cannot enumerate entities")

    def find_by_label(self, label: str):
        escaped = label.replace("\\", "\\\\").replace('"', '\\"')
        query = (
            "SELECT ?s WHERE { ?s "
            f'<http://www.w3.org/2000/01/rdf-schema#label> "{escaped}"@en }}'
        )
        bindings = self._select(query)
        return sorted({row["s"]["value"] for row in bindings if row["s"]["type"] == "uri"})


def freeze_to_corpus(source, iris, out_dir) -> Path:
    """Snapshot live entities (and their maps) into a fixture corpus."""
    entities = []
    maps = {}
    for iri in sorted(set(iris)):
        entity = source.entity(iri)
        entities.append(entity)
        if entity.kind == "place":
            features = source.map_features(iri)
            if features:
                maps[iri] = features
    return write_fixture_corpus(out_dir, entities, maps)
