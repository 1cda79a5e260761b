"""The complete generated adventure and its canonical file form.

A game file embeds every entity it references (the bundle), so a spec is
self-contained and replayable offline. Canonical field order: mode, victim,
suspects, locations, npcs, items, clue_chain, evidence, lie, seed,
generator_version, entities.
"""

from dataclasses import dataclass, field

from .canonical import canonical_bytes, canonical_dumps
from .dialog import DialogLine, DialogScript, TransformationRecord
from .errors import MalformedSourceError
from .model import Entity, Fact, GAME_MODES, MapExtract

GENERATOR_VERSION = "mysteryforge/0.1.0"


@dataclass(frozen=True)
class SuspectSet:
    members: tuple  # person IRIs, sorted
    culprit: str | None
    fitness: float

    def __post_init__(self):
        if len(self.members) < 2:
            raise MalformedSourceError("suspect set needs at least 2 members")
        if len(set(self.members)) != len(self.members):
            raise MalformedSourceError("suspect set members must be distinct")
        if self.culprit is not None and self.culprit not in self.members:
            raise MalformedSourceError("culprit must be a member")

    @property
    def innocents(self) -> tuple:
        return tuple(m for m in self.members if m != self.culprit)

    def to_canonical(self) -> dict:
        return {
            "members": list(self.members),
            "culprit": self.culprit,
            "fitness": float(self.fitness),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SuspectSet":
        return cls(tuple(data["members"]), data["culprit"], data["fitness"])


@dataclass(frozen=True)
class EvidenceItem:
    about: str  # innocent suspect IRI
    fact: Fact
    placed_at: str  # location IRI
    text: str

    @property
    def collectible_id(self) -> str:
        return f"evidence:{self.about}"

    def to_canonical(self) -> dict:
        return {
            "about": self.about,
            "fact": self.fact.to_canonical_with_subject(),
            "placed_at": self.placed_at,
            "text": self.text,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EvidenceItem":
        return cls(
            about=data["about"],
            fact=Fact.from_dict(data["fact"]["subject"], data["fact"]),
            placed_at=data["placed_at"],
            text=data["text"],
        )


@dataclass(frozen=True)
class LiedFact:
    truth: Fact
    altered: Fact
    culprit: str

    def __post_init__(self):
        if self.truth.predicate != self.altered.predicate:
            raise MalformedSourceError("lie must keep the predicate")
        if self.truth.object_key == self.altered.object_key:
            raise MalformedSourceError("altered fact equals the truth")

    def to_canonical(self) -> dict:
        return {
            "truth": self.truth.to_canonical_with_subject(),
            "altered": self.altered.to_canonical_with_subject(),
            "culprit": self.culprit,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LiedFact":
        return cls(
            truth=Fact.from_dict(data["truth"]["subject"], data["truth"]),
            altered=Fact.from_dict(data["altered"]["subject"], data["altered"]),
            culprit=data["culprit"],
        )


@dataclass(frozen=True)
class ThemeFilter:
    """Constraints on pool candidates: vocabulary predicates only.

    ``constraints`` is a tuple of (predicate, value) pairs a candidate must
    carry verbatim; ``month_day`` ("MM-DD") matches any date-valued fact,
    for day-themed generation.
    """

    constraints: tuple = ()
    month_day: str | None = None

    def __post_init__(self):
        from .model import PREDICATE_SET

        for predicate, _ in self.constraints:
            if predicate not in PREDICATE_SET:
                raise MalformedSourceError(f"theme predicate {predicate!r} outside vocabulary")

    def matches(self, entity: Entity) -> bool:
        for predicate, value in self.constraints:
            if not any(
                f.predicate == predicate and f.object_key == value for f in entity.facts
            ):
                return False
        if self.month_day is not None:
            dated = [
                f.object_literal.value
                for f in entity.facts
                if f.object_literal is not None and f.object_literal.datatype == "date"
            ]
            if not any(v[5:] == self.month_day for v in dated):
                return False
        return True


@dataclass(frozen=True)
class ClueRecord:
    """One step of the chain: at a location, an element reveals the next thing."""

    clue_id: str
    at: str  # location IRI
    via: str  # npc or item entity IRI voicing/holding the clue
    via_kind: str  # npc | item
    about: str  # path node this record covers
    reveals_location: str | None = None
    reveals_fact: Fact | None = None

    def __post_init__(self):
        if (self.reveals_location is None) == (self.reveals_fact is None):
            raise MalformedSourceError("clue record reveals exactly one of location or fact")

    def to_canonical(self) -> dict:
        reveals: dict = {}
        if self.reveals_location is not None:
            reveals = {"location": self.reveals_location}
        else:
            reveals = {"fact": self.reveals_fact.to_canonical_with_subject()}
        return {
            "id": self.clue_id,
            "at": self.at,
            "via": self.via,
            "via_kind": self.via_kind,
            "about": self.about,
            "reveals": reveals,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ClueRecord":
        reveals = data["reveals"]
        return cls(
            clue_id=data["id"],
            at=data["at"],
            via=data["via"],
            via_kind=data["via_kind"],
            about=data["about"],
            reveals_location=reveals.get("location"),
            reveals_fact=(
                Fact.from_dict(reveals["fact"]["subject"], reveals["fact"])
                if "fact" in reveals
                else None
            ),
        )


@dataclass(frozen=True)
class NPCRecord:
    entity: str
    home: str  # location IRI
    script: DialogScript

    def to_canonical(self) -> dict:
        return {"entity": self.entity, "home": self.home, "script": self.script.to_canonical()}

    @classmethod
    def from_dict(cls, data: dict) -> "NPCRecord":
        raw = data["script"]
        script = DialogScript(npc=raw["npc"], notes=list(raw.get("notes", [])))
        for line in raw["lines"]:
            script.lines.append(
                DialogLine(
                    topic=line["topic"],
                    text=line["text"],
                    source_facts=tuple(
                        Fact.from_dict(f["subject"], f) for f in line["source_facts"]
                    ),
                    transformation=TransformationRecord.from_dict(line["transformation"]),
                    clue_id=line.get("clue_id"),
                )
            )
        return cls(data["entity"], data["home"], script)


@dataclass(frozen=True)
class ItemRecord:
    entity: str
    location: str
    text: str  # clue text shown on collection

    @property
    def collectible_id(self) -> str:
        return f"item:{self.entity}"

    def to_canonical(self) -> dict:
        return {"entity": self.entity, "location": self.location, "text": self.text}

    @classmethod
    def from_dict(cls, data: dict) -> "ItemRecord":
        return cls(data["entity"], data["location"], data["text"])


@dataclass
class GameSpec:
    mode: str
    victim: str
    suspects: SuspectSet
    locations: list  # [(location IRI, MapExtract)]
    npcs: list = field(default_factory=list)
    items: list = field(default_factory=list)
    clue_chain: list = field(default_factory=list)
    evidence: list = field(default_factory=list)  # wikimystery mode
    lie: LiedFact | None = None  # data-agent mode
    seed: int = 0
    generator_version: str = GENERATOR_VERSION
    entities: dict = field(default_factory=dict)  # bundle: iri -> Entity

    def __post_init__(self):
        if self.mode not in GAME_MODES:
            raise MalformedSourceError(f"unknown game mode {self.mode!r}")

    # -- lookups ---------------------------------------------------------

    @property
    def k(self) -> int:
        return len(self.suspects.members)

    @property
    def location_ids(self) -> list:
        return [iri for iri, _ in self.locations]

    @property
    def start_location(self) -> str:
        return self.locations[0][0]

    def npc(self, iri: str) -> NPCRecord | None:
        for record in self.npcs:
            if record.entity == iri:
                return record
        return None

    def item(self, iri: str) -> ItemRecord | None:
        for record in self.items:
            if record.entity == iri:
                return record
        return None

    def evidence_for(self, about: str) -> EvidenceItem | None:
        for item in self.evidence:
            if item.about == about:
                return item
        return None

    def clue(self, clue_id: str) -> ClueRecord | None:
        for record in self.clue_chain:
            if record.clue_id == clue_id:
                return record
        return None

    def collectible_ids(self) -> set:
        ids = {record.clue_id for record in self.clue_chain}
        ids |= {item.collectible_id for item in self.items}
        ids |= {item.collectible_id for item in self.evidence}
        return ids

    def evidence_ids(self) -> set:
        return {item.collectible_id for item in self.evidence}

    def labels(self) -> dict:
        return {iri: entity.label for iri, entity in self.entities.items()}

    def truth_clue_ids(self) -> set:
        """Chain records whose fact is the true version of the lie."""
        if self.lie is None:
            return set()
        truth = self.lie.truth
        return {
            r.clue_id
            for r in self.clue_chain
            if r.reveals_fact is not None
            and r.reveals_fact.subject == truth.subject
            and r.reveals_fact.predicate == truth.predicate
            and r.reveals_fact.object_key == truth.object_key
        }

    # -- serialization ---------------------------------------------------

    def to_canonical(self) -> dict:
        return {
            "mode": self.mode,
            "victim": self.victim,
            "suspects": self.suspects.to_canonical(),
            "locations": [
                {"entity": iri, "map": extract.to_canonical() if extract else None}
                for iri, extract in self.locations
            ],
            "npcs": [record.to_canonical() for record in self.npcs],
            "items": [record.to_canonical() for record in self.items],
            "clue_chain": [record.to_canonical() for record in self.clue_chain],
            "evidence": [item.to_canonical() for item in self.evidence],
            "lie": self.lie.to_canonical() if self.lie else None,
            "seed": self.seed,
            "generator_version": self.generator_version,
            "entities": [self.entities[iri].to_canonical() for iri in sorted(self.entities)],
        }

    def canonical_text(self) -> str:
        return canonical_dumps(self.to_canonical())

    def canonical_form(self) -> bytes:
        return canonical_bytes(self.to_canonical())

    @classmethod
    def from_dict(cls, data: dict) -> "GameSpec":
        locations = []
        for loc in data["locations"]:
            extract = MapExtract.from_dict(loc["map"]) if loc.get("map") else None
            locations.append((loc["entity"], extract))
        return cls(
            mode=data["mode"],
            victim=data["victim"],
            suspects=SuspectSet.from_dict(data["suspects"]),
            locations=locations,
            npcs=[NPCRecord.from_dict(n) for n in data["npcs"]],
            items=[ItemRecord.from_dict(i) for i in data["items"]],
            clue_chain=[ClueRecord.from_dict(c) for c in data["clue_chain"]],
            evidence=[EvidenceItem.from_dict(e) for e in data["evidence"]],
            lie=LiedFact.from_dict(data["lie"]) if data.get("lie") else None,
            seed=data["seed"],
            generator_version=data["generator_version"],
            entities={e["id"]: Entity.from_dict(e) for e in data["entities"]},
        )
