"""Build the committed offline corpus under fixtures/standard.

The corpus is a small, hand-designed world: a physics circle around Albert
Einstein and a pop-music circle around Justin Bieber.  It is shaped so the
generator has everything it needs end to end:

* every person carries birth-date, occupation and birth-place facts, so any
  culprit supports both an evidence assignment and a liable fact to alter;
* each victim has enough related persons for a k=5 suspect pool with spares
  left over for exclusion-ledger runs;
* one suspect per cluster is reachable only through a work article, so some
  seeds produce collectible items on the clue chain;
* cities link to countries that the bias-audit region table knows;
* Stratford ships a map with exactly 3 roads and 2 buildings (a fixed count
  tests can assert), Ulm a map whose features cross the bounding box (clip
  coverage), and Margaret Thatcher an image whose caption names a different
  person (confidence-flag coverage).

Deterministic: running it twice produces byte-identical files.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from mysteryforge.fixtures import FIXTURE_TIMESTAMP, entity_filename, write_fixture_corpus
from mysteryforge.model import Entity, Fact, Literal, MapFeature, SourceRecord

BASE = "https://ex.org/wiki/"
IMG = "https://img.ex.org/"


def iri(name: str) -> str:
    return BASE + name


def _source(subject_iri: str) -> SourceRecord:
    return SourceRecord("fixture", FIXTURE_TIMESTAMP, entity_filename(subject_iri))


def link(subject: str, predicate: str, obj: str) -> Fact:
    return Fact(subject, predicate, object_entity=obj, source=_source(subject))


def lit(subject: str, predicate: str, value: str, datatype: str = "text") -> Fact:
    return Fact(subject, predicate, object_literal=Literal(value, datatype), source=_source(subject))


def person(name, label, born, occupation, city, extra=(), images=(), died=None) -> Entity:
    subject = iri(name)
    facts = [
        lit(subject, "birth-date", born, "date"),
        lit(subject, "occupation", occupation),
        link(subject, "birth-place", iri(city)),
    ]
    if died:
        facts.append(lit(subject, "death-date", died, "date"))
    for predicate, target in extra:
        facts.append(link(subject, predicate, iri(target)))
    return Entity(id=subject, label=label, kind="person", facts=facts, images=list(images))


def city(name, label, lat, lon, country) -> Entity:
    subject = iri(name)
    return Entity(
        id=subject,
        label=label,
        kind="place",
        facts=[link(subject, "located-in", iri(country))],
        geo=(lat, lon),
    )


def country(name, label, lat, lon) -> Entity:
    return Entity(id=iri(name), label=label, kind="place", geo=(lat, lon))


def work(name, label) -> Entity:
    return Entity(id=iri(name), label=label, kind="work")


def img(slug: str, caption: str):
    return (IMG + slug + ".jpg", caption)


def physics_cluster() -> list:
    return [
        person(
            "Albert_Einstein", "Albert Einstein", "1879-03-14", "physicist", "Ulm",
            died="1955-04-18",
            extra=[
                ("spouse", "Mileva_Maric"),
                ("spouse", "Elsa_Einstein"),
                ("colleague", "Niels_Bohr"),
                ("colleague", "Max_Planck"),
                ("colleague", "Marie_Curie"),
                ("colleague", "Michele_Besso"),
                ("known-for", "Theory_of_Relativity"),
                ("creator-of", "Annus_Mirabilis_Papers"),
            ],
            images=[img("einstein", "Albert Einstein 1921 portrait")],
        ),
        person(
            "Mileva_Maric", "Mileva Maric", "1875-12-19", "physicist", "Novi_Sad",
            images=[img("maric", "Mileva Maric portrait")],
        ),
        person(
            "Elsa_Einstein", "Elsa Einstein", "1876-01-18", "translator", "Berlin",
            images=[img("elsa", "Elsa Einstein 1929")],
        ),
        person(
            "Niels_Bohr", "Niels Bohr", "1885-10-07", "physicist", "Copenhagen",
            extra=[("colleague", "Max_Planck")],
            images=[img("bohr", "Niels Bohr 1935")],
        ),
        person(
            "Max_Planck", "Max Planck", "1858-04-23", "physicist", "Kiel",
            images=[img("planck", "Max Planck 1933")],
        ),
        person(
            "Marie_Curie", "Marie Curie", "1867-11-07", "chemist", "Warsaw",
            images=[img("curie", "Marie Curie c1920")],
        ),
        person(
            "Michele_Besso", "Michele Besso", "1873-05-25", "engineer", "Zurich",
            images=[img("besso", "Michele Besso portrait")],
        ),
        person(
            "David_Hilbert", "David Hilbert", "1862-01-23", "mathematician", "Gottingen",
            extra=[("colleague", "Albert_Einstein")],
            images=[img("hilbert", "David Hilbert 1912")],
        ),
        person(
            "Kurt_Godel", "Kurt Godel", "1906-04-28", "mathematician", "Vienna",
            extra=[("colleague", "Albert_Einstein")],
            images=[img("godel", "Kurt Godel portrait")],
        ),
        person(
            "Leo_Szilard", "Leo Szilard", "1898-02-11", "physicist", "Budapest",
            extra=[("colleague", "Albert_Einstein")],
            images=[img("szilard", "Leo Szilard 1960")],
        ),
        # Reachable from Einstein only through the shared paper: exercises
        # work nodes on suspect paths (collectible items).
        person(
            "Satyendra_Bose", "Satyendra Bose", "1894-01-01", "physicist", "Kolkata",
            extra=[("known-for", "Annus_Mirabilis_Papers")],
            images=[img("bose", "Satyendra Bose portrait")],
        ),
        work("Theory_of_Relativity", "Theory of Relativity"),
        work("Annus_Mirabilis_Papers", "Annus Mirabilis Papers"),
        city("Ulm", "Ulm", 48.4011, 9.9876, "Germany"),
        city("Novi_Sad", "Novi Sad", 45.2671, 19.8335, "Serbia"),
        city("Berlin", "Berlin", 52.52, 13.405, "Germany"),
        city("Copenhagen", "Copenhagen", 55.6761, 12.5683, "Denmark"),
        city("Kiel", "Kiel", 54.3233, 10.1228, "Germany"),
        city("Warsaw", "Warsaw", 52.2297, 21.0122, "Poland"),
        city("Zurich", "Zurich", 47.3769, 8.5417, "Switzerland"),
        city("Gottingen", "Gottingen", 51.5413, 9.9158, "Germany"),
        city("Vienna", "Vienna", 48.2082, 16.3738, "Austria"),
        city("Budapest", "Budapest", 47.4979, 19.0402, "Hungary"),
        city("Kolkata", "Kolkata", 22.5726, 88.3639, "India"),
        country("Germany", "Germany", 51.1657, 10.4515),
        country("Serbia", "Serbia", 44.0165, 21.0059),
        country("Denmark", "Denmark", 56.2639, 9.5018),
        country("Poland", "Poland", 51.9194, 19.1451),
        country("Switzerland", "Switzerland", 46.8182, 8.2275),
        country("Austria", "Austria", 47.5162, 14.5501),
        country("Hungary", "Hungary", 47.1625, 19.5033),
        country("India", "India", 20.5937, 78.9629),
    ]


def pop_cluster() -> list:
    return [
        person(
            "Justin_Bieber", "Justin Bieber", "1994-03-01", "singer", "Stratford_Ontario",
            extra=[
                ("spouse", "Hailey_Bieber"),
                ("colleague", "Usher"),
                ("colleague", "Ed_Sheeran"),
                ("creator-of", "Baby_Song"),
                ("creator-of", "Purpose_Album"),
            ],
            images=[img("bieber", "Justin Bieber 2015")],
        ),
        person(
            "Hailey_Bieber", "Hailey Bieber", "1996-11-22", "model", "Tucson",
            images=[img("hailey", "Hailey Rhode portrait")],
        ),
        person(
            "Usher", "Usher", "1978-10-14", "singer", "Dallas",
            images=[img("usher", "Usher 2016")],
        ),
        person(
            "Scooter_Braun", "Scooter Braun", "1981-06-18", "manager", "New_York_City",
            extra=[("colleague", "Justin_Bieber")],
            images=[img("braun", "Scooter Braun 2011")],
        ),
        person(
            "Ed_Sheeran", "Ed Sheeran", "1991-02-17", "singer", "Halifax_England",
            images=[img("sheeran", "Ed Sheeran 2013")],
        ),
        person(
            "Drake", "Drake", "1986-10-24", "singer", "Toronto",
            extra=[("colleague", "Justin_Bieber")],
            images=[img("drake", "Drake 2016")],
        ),
        person(
            "Selena_Gomez", "Selena Gomez", "1992-07-22", "singer", "Grand_Prairie",
            extra=[("generic-link", "Justin_Bieber")],
            images=[img("gomez", "Selena Gomez 2016")],
        ),
        person(
            "Pattie_Mallette", "Pattie Mallette", "1975-04-02", "author", "Stratford_Ontario",
            extra=[("generic-link", "Justin_Bieber")],
            images=[img("mallette", "Pattie Mallette 2012")],
        ),
        # Reachable from Bieber only through the song credit.
        person(
            "Ludacris", "Ludacris", "1977-09-11", "rapper", "Champaign",
            extra=[("known-for", "Baby_Song")],
            images=[img("ludacris", "Ludacris 2015")],
        ),
        # Caption names a different person: the image pipeline must flag it.
        person(
            "Margaret_Thatcher", "Margaret Thatcher", "1925-10-13", "politician", "Grantham",
            died="2013-04-08",
            extra=[("generic-link", "United_Kingdom")],
            images=[img("thatcher", "Aung San Suu Kyi portrait")],
        ),
        work("Baby_Song", "Baby"),
        work("Purpose_Album", "Purpose"),
        city("Stratford_Ontario", "Stratford", 43.3701, -80.9821, "Canada"),
        city("Tucson", "Tucson", 32.2226, -110.9747, "United_States"),
        city("Dallas", "Dallas", 32.7767, -96.797, "United_States"),
        city("New_York_City", "New York City", 40.7128, -74.006, "United_States"),
        city("Halifax_England", "Halifax", 53.725, -1.863, "United_Kingdom"),
        city("Toronto", "Toronto", 43.6532, -79.3832, "Canada"),
        city("Grand_Prairie", "Grand Prairie", 32.7459, -96.9978, "United_States"),
        city("Champaign", "Champaign", 40.1164, -88.2434, "United_States"),
        city("Grantham", "Grantham", 52.9122, -0.6428, "United_Kingdom"),
        country("Canada", "Canada", 56.1304, -106.3468),
        country("United_States", "United States", 39.8283, -98.5795),
        country("United_Kingdom", "United Kingdom", 55.3781, -3.436),
    ]


def victorian_cluster() -> list:
    """Pool of exactly five around Ada Lovelace, one reachable only through
    a work article: the evolved suspect set must take all five, so these
    games always carry a collectible item on the clue chain."""
    return [
        person(
            "Ada_Lovelace", "Ada Lovelace", "1815-12-10", "mathematician", "London_England",
            died="1852-11-27",
            extra=[
                ("spouse", "William_King"),
                ("colleague", "Charles_Babbage"),
                ("creator-of", "Analytical_Engine_Notes"),
            ],
            images=[img("lovelace", "Ada Lovelace 1840 portrait")],
        ),
        person(
            "William_King", "William King", "1805-02-21", "politician", "London_England",
            images=[img("king", "William King portrait")],
        ),
        person(
            "Charles_Babbage", "Charles Babbage", "1791-12-26", "mathematician", "London_England",
            images=[img("babbage", "Charles Babbage 1860")],
        ),
        person(
            "Mary_Somerville", "Mary Somerville", "1780-12-26", "scientist", "Jedburgh",
            extra=[("generic-link", "Ada_Lovelace")],
            images=[img("somerville", "Mary Somerville portrait")],
        ),
        person(
            "Lord_Byron", "Lord Byron", "1788-01-22", "poet", "London_England",
            extra=[("generic-link", "Ada_Lovelace")],
            images=[img("byron", "Lord Byron 1813")],
        ),
        person(
            "Luigi_Menabrea", "Luigi Menabrea", "1809-09-04", "engineer", "Chambery",
            extra=[("known-for", "Analytical_Engine_Notes")],
            images=[img("menabrea", "Luigi Menabrea portrait")],
        ),
        work("Analytical_Engine_Notes", "Analytical Engine Notes"),
        city("London_England", "London", 51.5074, -0.1278, "United_Kingdom"),
        city("Jedburgh", "Jedburgh", 55.4777, -2.5549, "United_Kingdom"),
        city("Chambery", "Chambery", 45.5646, 5.9178, "France"),
        country("France", "France", 46.2276, 2.2137),
    ]


def road(*points) -> MapFeature:
    return MapFeature("road", tuple(points))


def building(*points) -> MapFeature:
    return MapFeature("building", tuple(points))


def water(*points) -> MapFeature:
    return MapFeature("water", tuple(points))


def map_layers() -> dict:
    return {
        # Exactly 3 roads + 2 buildings, all inside the default extract box.
        iri("Stratford_Ontario"): [
            road((43.36, -80.99), (43.37, -80.98), (43.38, -80.97)),
            road((43.355, -80.975), (43.365, -80.975), (43.375, -80.978)),
            road((43.372, -80.995), (43.374, -80.985), (43.376, -80.975), (43.378, -80.965)),
            building((43.368, -80.983), (43.368, -80.982), (43.369, -80.982), (43.369, -80.983)),
            building((43.371, -80.979), (43.371, -80.978), (43.372, -80.978), (43.372, -80.979)),
        ],
        # One road leaves the box (clipped back), one feature sits fully
        # outside (dropped): 5 stored features, 4 survive extraction.
        iri("Ulm"): [
            road((48.39, 9.975), (48.4, 9.985), (48.41, 9.995)),
            road((48.395, 10.0), (48.43, 9.98)),
            building((48.399, 9.987), (48.399, 9.9885), (48.4, 9.9885), (48.4, 9.987)),
            water((48.395, 9.97), (48.397, 9.985), (48.399, 10.0)),
            water((48.5, 9.9), (48.51, 9.91)),
        ],
        iri("Toronto"): [
            road((43.645, -79.39), (43.65, -79.38), (43.655, -79.37)),
            building((43.652, -79.385), (43.652, -79.384), (43.653, -79.384), (43.653, -79.385)),
        ],
    }


def build_corpus(out_dir) -> Path:
    entities = physics_cluster() + pop_cluster() + victorian_cluster()
    seen = {}
    for entity in entities:
        if entity.id in seen:
            raise SystemExit(f"duplicate entity {entity.id}")
        seen[entity.id] = entity
    # Link targets must resolve inside the corpus.
    for entity in entities:
        for fact in entity.facts:
            if fact.object_entity is not None and fact.object_entity not in seen:
                raise SystemExit(f"{entity.id} links to missing {fact.object_entity}")
    return write_fixture_corpus(out_dir, entities, map_layers())


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="regenerate the standard fixture corpus")
    parser.add_argument("--out", default="fixtures/standard", help="output directory")
    args = parser.parse_args(argv)
    root = build_corpus(args.out)
    files = sorted(p.name for p in root.iterdir())
    print(f"wrote {len(files)} files to {root}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
