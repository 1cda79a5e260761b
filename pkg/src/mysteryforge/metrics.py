"""Scores for the two design axes, plus the batch location-bias audit.

Transformation measures how far rendered text drifted from its source
(0 = everything verbatim). Functionality measures how much of the
data-derived content gates progression rather than decorating it. The
bias audit tallies where generated games send players, by region.
"""

from dataclasses import dataclass, field
from importlib import resources
from urllib.parse import unquote

from .canonical import canonical_dumps
from .gamespec import GameSpec

DEFAULT_TOP_N = 8

# Qualitative landmark placements (transformation, functionality) for
# plotting context next to scored games. Illustrative positions only —
# these systems were never scored with this implementation's metrics.
REFERENCE_POINTS = {
    "WikiRace": (0.05, 0.95),
    "OpenTrumps": (0.15, 0.85),
    "Open Data Monopoly": (0.35, 0.65),
    "WikiMystery": (0.45, 0.80),
    "ANGELINA": (0.70, 0.40),
    "FreeCiv maps": (0.85, 0.90),
}
REFERENCE_POINTS_ILLUSTRATIVE = True


@dataclass(frozen=True)
class MaximalismScore:
    transformation: float  # 0 = full fidelity, 1 = fully transformed
    functionality: float  # 1 = fully functional, 0 = fully decorative

    def __post_init__(self):
        for value in (self.transformation, self.functionality):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"score out of range: {value}")

    def to_canonical(self) -> dict:
        return {
            "transformation": self.transformation,
            "functionality": self.functionality,
        }


def _all_records(spec: GameSpec):
    for npc in spec.npcs:
        for line in npc.script.lines:
            yield line.transformation


def score_transformation(spec: GameSpec) -> float:
    """1 − mean line similarity; all-verbatim scripts score exactly 0."""
    similarities = [record.similarity for record in _all_records(spec)]
    if not similarities:
        raise ValueError("spec has no dialog lines to score")
    return 1.0 - sum(similarities) / len(similarities)


def functionality_counts(spec: GameSpec) -> tuple:
    """(gating, total) data-derived element counts.

    Gating: dialog lines that carry a clue or the lie, plus items and
    evidence (all collectibles feed the accusation). Decorative: remaining
    dialog lines, entity images, and map features.
    """
    gating = 0
    total = 0
    for npc in spec.npcs:
        for line in npc.script.lines:
            total += 1
            if line.clue_id is not None or line.transformation.kind == "altered":
                gating += 1
    gating += len(spec.items) + len(spec.evidence)
    total += len(spec.items) + len(spec.evidence)
    total += sum(len(entity.images) for entity in spec.entities.values())
    total += sum(len(extract.features) for _, extract in spec.locations if extract)
    return gating, total


def score_functionality(spec: GameSpec) -> float:
    gating, total = functionality_counts(spec)
    if total == 0:
        return 1.0
    return gating / total


def score_game(spec: GameSpec) -> MaximalismScore:
    return MaximalismScore(
        transformation=score_transformation(spec),
        functionality=score_functionality(spec),
    )


def load_region_table() -> dict:
    """country label -> region, from the packaged lookup asset."""
    table = {}
    text = resources.files("mysteryforge.assets").joinpath("regions.txt").read_text("utf-8")
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        country, region = line.split("|", 1)
        table[country] = region
    return table


def _iri_local_label(iri: str) -> str:
    """Readable guess at an entity label from its IRI local name."""
    local = unquote(iri.rstrip("/").rsplit("/", 1)[-1])
    return local.replace("_", " ")


def _location_region(spec: GameSpec, iri: str, region_table: dict) -> str | None:
    """Follow located-in links until a label known to the region table."""
    seen = set()
    current = iri
    while current is not None and current not in seen:
        seen.add(current)
        entity = spec.entities.get(current)
        if entity is None:
            # The chain stepped outside the game's entity bundle (country
            # articles sit one hop past the graph's depth cap); the IRI local
            # name is the best remaining label.
            return region_table.get(_iri_local_label(current))
        region = region_table.get(entity.label)
        if region is not None:
            return region
        parents = sorted(
            fact.object_entity
            for fact in entity.facts_by_predicate("located-in")
            if fact.object_entity is not None
        )
        current = parents[0] if parents else None
    return None


@dataclass
class BiasReport:
    batch_size: int
    location_frequency: dict = field(default_factory=dict)  # region -> count
    top_locations: list = field(default_factory=list)  # [(iri, count)]
    unmapped: list = field(default_factory=list)  # location iris without a region

    def to_canonical(self) -> dict:
        return {
            "batch_size": self.batch_size,
            "location_frequency": {
                region: self.location_frequency[region]
                for region in sorted(self.location_frequency)
            },
            "top_locations": [
                {"entity": iri, "count": count} for iri, count in self.top_locations
            ],
            "unmapped": sorted(self.unmapped),
        }

    def canonical_text(self) -> str:
        return canonical_dumps(self.to_canonical())

    def table_text(self) -> str:
        """Plain-text report for terminals."""
        lines = [f"games audited: {self.batch_size}", "", "region counts:"]
        for region in sorted(self.location_frequency):
            lines.append(f"  {region:<15} {self.location_frequency[region]}")
        lines.append("")
        lines.append("top locations:")
        for iri, count in self.top_locations:
            lines.append(f"  {count:>4}  {iri}")
        if self.unmapped:
            lines.append("")
            lines.append("unmapped locations:")
            for iri in sorted(self.unmapped):
                lines.append(f"  {iri}")
        return "\n".join(lines) + "\n"


def bias_audit(specs, region_table: dict | None = None, top_n: int = DEFAULT_TOP_N) -> BiasReport:
    """Tally location occurrences per region over a batch of games."""
    specs = list(specs)
    if region_table is None:
        region_table = load_region_table()
    frequency = {}
    per_location = {}
    unmapped = set()
    for spec in specs:
        for iri in spec.location_ids:
            per_location[iri] = per_location.get(iri, 0) + 1
            region = _location_region(spec, iri, region_table)
            if region is None:
                unmapped.add(iri)
            else:
                frequency[region] = frequency.get(region, 0) + 1
    top = sorted(per_location.items(), key=lambda pair: (-pair[1], pair[0]))[:top_n]
    return BiasReport(
        batch_size=len(specs),
        location_frequency=frequency,
        top_locations=top,
        unmapped=sorted(unmapped),
    )
