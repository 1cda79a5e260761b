import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import httpx
import pytest

from mysteryforge.config import Endpoints, ForgeConfig
from mysteryforge.errors import (
    MalformedSourceError,
    NetworkUnreachableError,
    NotFoundError,
)
from mysteryforge.ingest import FixtureSource, fetch_map_extract
from mysteryforge.livesource import (
    HttpJsonClient,
    LiveSource,
    ResponseCache,
    freeze_to_corpus,
    map_predicate,
)

RDFS_LABEL = "http://www.w3.org/2000/01/rdf-schema#label"
RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
GEO_LAT = "http://www.w3.org/2003/01/geo/wgs84_pos#lat"
GEO_LONG = "http://www.w3.org/2003/01/geo/wgs84_pos#long"
ONT = "http://dbpedia.org/ontology/"
XSD_DATE = "http://www.w3.org/2001/XMLSchema#date"

PERSON = "http://live.test/resource/Ida_Noddack"
CITY = "http://live.test/resource/Wesel"


def b_uri(value):
    return {"type": "uri", "value": value}


def b_lit(value, datatype=None, lang=None):
    row = {"type": "literal", "value": value}
    if datatype:
        row["datatype"] = datatype
    if lang:
        row["xml:lang"] = lang
    return row


def sparql_json(*rows):
    return json.dumps({"results": {"bindings": list(rows)}})


class FakeResponse:
    def __init__(self, status_code, text):
        self.status_code = status_code
        self.text = text


class FakeClient:
    """Stands in for httpx.Client; routes by (method, url, params, body)."""

    def __init__(self, respond):
        self.respond = respond
        self.calls = []

    def get(self, url, params=None):
        return self._dispatch("GET", url, params or {}, None)

    def post(self, url, params=None, content=None):
        return self._dispatch("POST", url, params or {}, content)

    def _dispatch(self, method, url, params, body):
        self.calls.append((method, url, params, body))
        result = self.respond(method, url, params, body)
        if isinstance(result, Exception):
            raise result
        return result


def stub_config(tmp_path, **overrides) -> ForgeConfig:
    return ForgeConfig(
        mode="live",
        cache_dir=str(tmp_path / "cache"),
        store_dir=str(tmp_path / "store"),
        endpoints=Endpoints(
            sparql="http://stub.test/sparql",
            wiki="http://stub.test/wiki",
            commons="http://stub.test/commons",
            overpass="http://stub.test/overpass",
        ),
        **overrides,
    )


def person_bindings():
    return [
        {"p": b_uri(RDFS_LABEL), "o": b_lit("Ida Noddack", lang="en")},
        {"p": b_uri(RDFS_LABEL), "o": b_lit("Ida Noddack (de)", lang="de")},
        {"p": b_uri(RDF_TYPE), "o": b_uri("http://dbpedia.org/ontology/Person")},
        {"p": b_uri(ONT + "birthDate"), "o": b_lit("1896-02-25", datatype=XSD_DATE)},
        {"p": b_uri(ONT + "birthPlace"), "o": b_uri(CITY)},
        {"p": b_uri(ONT + "occupation"), "o": b_lit("chemist")},
        {"p": b_uri(ONT + "award"), "o": b_uri("http://live.test/resource/Liebig_Medal")},
        {"p": b_uri(ONT + "note"), "o": b_lit("ignored free-text on unknown property")},
    ]


def city_bindings():
    return [
        {"p": b_uri(RDFS_LABEL), "o": b_lit("Wesel", lang="en")},
        {"p": b_uri(RDF_TYPE), "o": b_uri("http://dbpedia.org/ontology/City")},
        {"p": b_uri(GEO_LAT), "o": b_lit("51.658")},
        {"p": b_uri(GEO_LONG), "o": b_lit("6.617")},
        {"p": b_uri(ONT + "country"), "o": b_uri("http://live.test/resource/Germany")},
    ]


def overpass_elements():
    return {
        "elements": [
            {
                "tags": {"highway": "residential"},
                "geometry": [
                    {"lat": 51.657, "lon": 6.616},
                    {"lat": 51.659, "lon": 6.618},
                ],
            },
            {
                "tags": {"natural": "water", "waterway": "river"},
                "geometry": [
                    {"lat": 51.656, "lon": 6.615},
                    {"lat": 51.6565, "lon": 6.6155},
                    {"lat": 51.657, "lon": 6.6145},
                ],
            },
            {"tags": {}, "geometry": [{"lat": 51.0, "lon": 6.0}]},
        ]
    }


def standard_stub(method, url, params, body):
    if url.endswith("/sparql"):
        query = params["query"]
        if f"<{PERSON}> ?p ?o" in query:
            return FakeResponse(200, sparql_json(*person_bindings()))
        if f"<{CITY}> ?p ?o" in query:
            return FakeResponse(200, sparql_json(*city_bindings()))
        if f"?p <{PERSON}>" in query:
            return FakeResponse(
                200,
                sparql_json(
                    {"p": b_uri(ONT + "doctoralStudent"), "s": b_uri("http://live.test/resource/Walter_Noddack")},
                    {"p": b_uri(ONT + "spouse"), "s": b_uri("http://live.test/resource/Walter_Noddack")},
                    {"p": b_uri(RDFS_LABEL), "s": b_lit("not a uri")},
                ),
            )
        if 'rdf-schema#label> "Ida Noddack"@en' in query:
            return FakeResponse(200, sparql_json({"s": b_uri(PERSON)}))
        return FakeResponse(200, sparql_json())
    if "/wiki/page/summary/Ida_Noddack" in url:
        return FakeResponse(
            200,
            json.dumps(
                {
                    "title": "Ida Noddack",
                    "description": "Ida Noddack German chemist",
                    "thumbnail": {"source": "https://img.live.test/ida.jpg"},
                }
            ),
        )
    if "/wiki/page/summary/Wesel" in url:
        return FakeResponse(200, json.dumps({"title": "Wesel"}))
    if "/wiki/page/summary/" in url:
        return FakeResponse(404, "")
    if url.endswith("/commons"):
        if params.get("aisearch") == "Ida Noddack":
            return FakeResponse(
                200,
                json.dumps(
                    {
                        "query": {
                            "allimages": [
                                {"url": "https://img.live.test/ida-lab.jpg", "comment": "Noddack in the laboratory"},
                                {"name": "skipped.jpg"},
                            ]
                        }
                    }
                ),
            )
        return FakeResponse(200, json.dumps({"query": {"allimages": []}}))
    if url.endswith("/overpass"):
        return FakeResponse(200, json.dumps(overpass_elements()))
    raise AssertionError(f"unrouted request {method} {url} {params}")


@pytest.fixture
def live(tmp_path):
    client = FakeClient(standard_stub)
    return LiveSource(stub_config(tmp_path), client=client), client


def test_predicate_mapping():
    assert map_predicate(ONT + "birthDate") == "birth-date"
    assert map_predicate(ONT + "country") == "located-in"
    assert map_predicate(ONT + "isPartOf") == "located-in"
    assert map_predicate(ONT + "author") == "creator-of"
    assert map_predicate("http://example.org/vocab#somethingElse") == "generic-link"


def test_entity_assembly_from_bindings(live):
    source, _ = live
    entity = source.entity(PERSON)
    assert entity.label == "Ida Noddack"
    assert entity.kind == "person"
    assert entity.geo is None
    by_predicate = {}
    for fact in entity.facts:
        by_predicate.setdefault(fact.predicate, []).append(fact)
    assert by_predicate["birth-date"][0].object_literal.value == "1896-02-25"
    assert by_predicate["birth-date"][0].object_literal.datatype == "date"
    assert by_predicate["birth-place"][0].object_entity == CITY
    assert by_predicate["occupation"][0].object_literal.value == "chemist"
    # Unknown property with a URI object folds to generic-link ...
    assert by_predicate["generic-link"][0].object_entity.endswith("Liebig_Medal")
    # ... but unknown-property literals are dropped entirely.
    assert all(f.object_literal is None for f in by_predicate["generic-link"])
    assert entity.facts == tuple(sorted(entity.facts, key=type(entity.facts[0]).sort_key))
    assert [fact.source.repository for fact in entity.facts] == ["dbpedia"] * len(entity.facts)


def test_entity_images_merge_wiki_and_commons(live):
    source, _ = live
    entity = source.entity(PERSON)
    assert entity.images[0] == ("https://img.live.test/ida.jpg", "Ida Noddack German chemist")
    assert ("https://img.live.test/ida-lab.jpg", "Noddack in the laboratory") in entity.images
    assert all(url for url, _ in entity.images)


def test_place_entity_has_geo_and_kind(live):
    source, _ = live
    entity = source.entity(CITY)
    assert entity.kind == "place"
    assert entity.geo == (51.658, 6.617)


def test_missing_entity_raises_not_found(live):
    source, _ = live
    with pytest.raises(NotFoundError):
        source.entity("http://live.test/resource/Nobody")


def test_outgoing_and_incoming_links(live):
    source, _ = live
    outgoing = source.outgoing(PERSON)
    assert ("birth-place", CITY) in outgoing
    assert all(target for _, target in outgoing)

    incoming = source.incoming(PERSON)
    # Literal subjects are dropped; duplicate subjects stay distinct by predicate.
    assert incoming == [
        ("generic-link", "http://live.test/resource/Walter_Noddack"),
        ("spouse", "http://live.test/resource/Walter_Noddack"),
    ]


def test_find_by_label_exact_match(live):
    source, _ = live
    assert source.find_by_label("Ida Noddack") == [PERSON]
    assert source.find_by_label("Nobody At All") == []


def test_map_features_tagging_and_filtering(live):
    source, _ = live
    features = source.map_features(CITY)
    kinds = sorted(f.kind for f in features)
    assert kinds == ["road", "water"]
    assert all(len(f.points) >= 2 for f in features)
    assert source.map_features(PERSON) == ()


def test_live_source_refuses_enumeration(live):
    source, _ = live
    with pytest.raises(MalformedSourceError):
        source.entity_count()
    with pytest.raises(MalformedSourceError):
        source.iris()


def test_responses_are_cached_on_disk(tmp_path):
    client = FakeClient(standard_stub)
    source = LiveSource(stub_config(tmp_path), client=client)
    first = source.entity(CITY)
    calls_after_first = len(client.calls)
    again = source.entity(CITY)
    assert len(client.calls) == calls_after_first
    assert again.to_canonical()["facts"] == first.to_canonical()["facts"]

    rebuilt = LiveSource(stub_config(tmp_path), client=FakeClient(standard_stub))
    cached = rebuilt.entity(CITY)
    assert cached.geo == first.geo
    cache_dir = tmp_path / "cache"
    assert list(cache_dir.glob(".tmp-*")) == []
    assert len(list(cache_dir.glob("*.json"))) >= 1


def test_retries_then_success(tmp_path):
    attempts = {"n": 0}

    def flaky(method, url, params, body):
        if url.endswith("/sparql") and f"<{CITY}> ?p ?o" in params.get("query", ""):
            attempts["n"] += 1
            if attempts["n"] <= 2:
                return httpx.ConnectError("boom")
            return FakeResponse(200, sparql_json(*city_bindings()))
        return standard_stub(method, url, params, body)

    source = LiveSource(stub_config(tmp_path, retries=2), client=FakeClient(flaky))
    assert source.entity(CITY).label == "Wesel"
    assert attempts["n"] == 3


def test_retries_exhausted_raise_network_unreachable(tmp_path):
    def down(method, url, params, body):
        return httpx.ConnectError("connection refused")

    source = LiveSource(stub_config(tmp_path, retries=1), client=FakeClient(down))
    with pytest.raises(NetworkUnreachableError):
        source.entity(CITY)


def test_http_errors_are_not_cached(tmp_path):
    state = {"healthy": False}

    def flipping(method, url, params, body):
        if url.endswith("/sparql") and f"<{CITY}> ?p ?o" in params.get("query", ""):
            if not state["healthy"]:
                return FakeResponse(500, "upstream sad")
            return FakeResponse(200, sparql_json(*city_bindings()))
        return standard_stub(method, url, params, body)

    source = LiveSource(stub_config(tmp_path), client=FakeClient(flipping))
    with pytest.raises(MalformedSourceError):
        source.entity(CITY)
    state["healthy"] = True
    assert source.entity(CITY).label == "Wesel"


def test_unparseable_body_is_malformed(tmp_path):
    def garbled(method, url, params, body):
        return FakeResponse(200, "<html>not json</html>")

    source = LiveSource(stub_config(tmp_path), client=FakeClient(garbled))
    with pytest.raises(MalformedSourceError, match="unparseable"):
        source.entity(CITY)


def test_request_key_is_stable_and_distinct():
    key = ResponseCache.request_key("GET", "http://x.test/a", {"q": "1"}, None)
    assert key == ResponseCache.request_key("GET", "http://x.test/a", {"q": "1"}, None)
    assert key != ResponseCache.request_key("GET", "http://x.test/a", {"q": "2"}, None)
    assert key != ResponseCache.request_key("POST", "http://x.test/a", {"q": "1"}, "body")
    assert len(key) == 40


def test_freeze_to_corpus_round_trip(tmp_path, live):
    source, _ = live
    out = tmp_path / "frozen"
    freeze_to_corpus(source, [PERSON, CITY], out)

    fixture = FixtureSource.from_path(out)
    assert fixture.entity_count() == 2
    person = fixture.entity(PERSON)
    live_person = source.entity(PERSON)
    assert person.to_canonical() == live_person.to_canonical()

    extract = fetch_map_extract(fixture, CITY)
    assert {f.kind for f in extract.features} == {"road", "water"}


class _SparqlHandler(BaseHTTPRequestHandler):
    def do_GET(self):
        payload = sparql_json(
            {"p": b_uri(RDFS_LABEL), "o": b_lit("Socket Town", lang="en")},
            {"p": b_uri(RDF_TYPE), "o": b_uri("http://dbpedia.org/ontology/City")},
            {"p": b_uri(GEO_LAT), "o": b_lit("1.0")},
            {"p": b_uri(GEO_LONG), "o": b_lit("2.0")},
        ).encode("utf-8")
        self.send_response(200)
        self.send_header("Content-Type", "application/sparql-results+json")
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def log_message(self, *args):
        pass


def test_http_client_against_real_socket(tmp_path):
    server = ThreadingHTTPServer(("127.0.0.1", 0), _SparqlHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        port = server.server_address[1]
        cache = ResponseCache(tmp_path / "cache")
        client = HttpJsonClient(f"http://127.0.0.1:{port}", cache, timeout_s=5.0, retries=0)
        data = client.request(params={"query": "SELECT ..."})
        assert data["results"]["bindings"][0]["o"]["value"] == "Socket Town"
        cached = client.request(params={"query": "SELECT ..."})
        assert cached == data
    finally:
        server.shutdown()
        thread.join(timeout=5)


def test_unreachable_port_raises(tmp_path):
    cache = ResponseCache(tmp_path / "cache")
    client = HttpJsonClient("http://127.0.0.1:9", cache, timeout_s=0.2, retries=1)
    with pytest.raises(NetworkUnreachableError):
        client.request(params={"query": "SELECT ..."})
