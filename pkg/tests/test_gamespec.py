import json

import pytest

from mysteryforge.errors import MalformedSourceError
from mysteryforge.gamespec import ClueRecord, GameSpec, SuspectSet, ThemeFilter

from .worlds import T, link, lit, person


def test_suspect_set_innocents():
    suspect_set = SuspectSet(members=("a", "b", "c"), culprit="b", fitness=0.5)
    assert suspect_set.innocents == ("a", "c")


def test_clue_record_reveals_exactly_one_thing():
    with pytest.raises(MalformedSourceError):
        ClueRecord("clue:001", "loc", "npc", "npc", "about")
    with pytest.raises(MalformedSourceError):
        ClueRecord(
            "clue:001",
            "loc",
            "npc",
            "npc",
            "about",
            reveals_location="x",
            reveals_fact=link("a", "spouse", "b"),
        )


def test_theme_filter_matches_constraint_and_month_day():
    entity = person(
        "a",
        lit("a", "occupation", "chemist"),
        lit("a", "birth-date", "1900-06-15", "date"),
    )
    assert ThemeFilter((("occupation", "chemist"),)).matches(entity)
    assert not ThemeFilter((("occupation", "poet"),)).matches(entity)
    assert ThemeFilter(month_day="06-15").matches(entity)
    assert not ThemeFilter(month_day="01-01").matches(entity)


def test_theme_filter_rejects_foreign_predicate():
    with pytest.raises(MalformedSourceError):
        ThemeFilter((("star-sign", "leo"),))


def test_game_spec_rejects_unknown_mode(assembled):
    spec = assembled()
    with pytest.raises(MalformedSourceError):
        GameSpec(mode="bingo", victim=spec.victim, suspects=spec.suspects, locations=spec.locations)


def test_canonical_field_order_is_documented_order(assembled):
    data = assembled().to_canonical()
    assert list(data) == [
        "mode",
        "victim",
        "suspects",
        "locations",
        "npcs",
        "items",
        "clue_chain",
        "evidence",
        "lie",
        "seed",
        "generator_version",
        "entities",
    ]


def test_entities_bundle_sorted_by_id(assembled):
    data = assembled().to_canonical()
    ids = [e["id"] for e in data["entities"]]
    assert ids == sorted(ids)


def test_round_trip_is_byte_identical(assembled):
    for mode in ("wikimystery", "data-agent", "linkpath"):
        spec = assembled(mode=mode)
        back = GameSpec.from_dict(json.loads(spec.canonical_text()))
        assert back.canonical_form() == spec.canonical_form()


def test_lookup_helpers(assembled):
    spec = assembled()
    assert spec.k == 5
    assert spec.start_location == spec.locations[0][0]
    npc = spec.npcs[0]
    assert spec.npc(npc.entity) is npc
    assert spec.npc(T + "nobody") is None
    first_clue = spec.clue_chain[0]
    assert spec.clue(first_clue.clue_id) is first_clue
    evidence = spec.evidence[0]
    assert spec.evidence_for(evidence.about) is evidence
    assert evidence.collectible_id == f"evidence:{evidence.about}"
    assert spec.evidence_ids() == {e.collectible_id for e in spec.evidence}


def test_collectible_ids_cover_chain_items_evidence(assembled):
    spec = assembled(victim="Ada Lovelace", seed=4)
    ids = spec.collectible_ids()
    for record in spec.clue_chain:
        assert record.clue_id in ids
    for item in spec.items:
        assert item.collectible_id in ids
        assert item.collectible_id.startswith("item:")
    for evidence in spec.evidence:
        assert evidence.collectible_id in ids


def test_truth_clue_ids_empty_without_lie(assembled):
    assert assembled().truth_clue_ids() == set()


def test_truth_clue_ids_match_lie_truth(assembled):
    spec = assembled(mode="data-agent")
    truth_ids = spec.truth_clue_ids()
    assert truth_ids
    truth = spec.lie.truth
    for clue_id in truth_ids:
        fact = spec.clue(clue_id).reveals_fact
        assert (fact.subject, fact.predicate, fact.object_key) == (
            truth.subject,
            truth.predicate,
            truth.object_key,
        )


def test_labels_cover_all_bundle_entities(assembled):
    spec = assembled()
    labels = spec.labels()
    assert set(labels) == set(spec.entities)
    assert labels[spec.victim] == "Albert Einstein"
