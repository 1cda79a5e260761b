"""Template-driven rendering of facts into NPC dialog lines.

Each rendered line keeps a transformation record: what the source text was,
what the data-bearing rendering became, and how similar the two are. The
similarity is the normalized longest-common-subsequence ratio between the
source text and the rendered payload (the line minus any framing prefix),
so verbatim lines always score exactly 1. These records are the raw input
of the transformation metric.
"""

from dataclasses import dataclass, field
from importlib import resources
from urllib.parse import unquote

from .seeds import stage_rng

TEMPLATE_VERSION = "1"
VERBATIM_PREFIX = "The records state: "

GREETINGS = (
    "Hello, I am {label}.",
    "Good day. {label}, at your service.",
    "Yes? You are speaking with {label}.",
)

TOPICS = ("greeting", "self-fact", "suspect-hint", "clue", "lie")


def lcs_length(a: str, b: str) -> int:
    """Longest common subsequence on characters, O(len(a)*len(b))."""
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for ch_a in a:
        row = [0]
        for j, ch_b in enumerate(b, start=1):
            if ch_a == ch_b:
                row.append(prev[j - 1] + 1)
            else:
                row.append(max(prev[j], row[-1]))
        prev = row
    return prev[-1]


def similarity(a: str, b: str) -> float:
    """2*LCS(a,b) / (len(a)+len(b)); 1.0 for two empty strings."""
    if not a and not b:
        return 1.0
    return 2.0 * lcs_length(a, b) / (len(a) + len(b))


def _load_templates() -> dict:
    table = {}
    text = resources.files("mysteryforge.assets").joinpath("templates.txt").read_text("utf-8")
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        predicate, topic, template = line.split("|", 2)
        table[(predicate, topic)] = template
    return table


TEMPLATES = _load_templates()


def template_for(predicate: str, topic: str) -> str | None:
    exact = TEMPLATES.get((predicate, topic))
    if exact is not None:
        return exact
    if topic == "clue":  # clue lines reuse the hint phrasing
        return TEMPLATES.get((predicate, "suspect-hint"))
    if topic == "lie":  # the culprit lies about themselves
        return TEMPLATES.get((predicate, "self-fact"))
    return None


@dataclass(frozen=True)
class TransformationRecord:
    kind: str  # verbatim | template | altered
    source_text: str
    rendered: str
    similarity: float

    def to_canonical(self) -> dict:
        return {
            "kind": self.kind,
            "source_text": self.source_text,
            "rendered": self.rendered,
            "similarity": self.similarity,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TransformationRecord":
        return cls(data["kind"], data["source_text"], data["rendered"], data["similarity"])


@dataclass(frozen=True)
class DialogLine:
    topic: str
    text: str
    source_facts: tuple
    transformation: TransformationRecord
    clue_id: str | None = None

    def to_canonical(self) -> dict:
        return {
            "topic": self.topic,
            "text": self.text,
            "source_facts": [f.to_canonical_with_subject() for f in self.source_facts],
            "transformation": self.transformation.to_canonical(),
            "clue_id": self.clue_id,
        }


@dataclass
class DialogScript:
    npc: str
    lines: list = field(default_factory=list)
    notes: list = field(default_factory=list)  # reported template fallbacks

    def to_canonical(self) -> dict:
        return {
            "npc": self.npc,
            "lines": [line.to_canonical() for line in self.lines],
            "notes": list(self.notes),
        }


def label_or_local(labels: dict, iri: str) -> str:
    """Label when known, else a readable guess from the IRI local name.

    Facts may point one hop past the entity bundle (a suspect's birth city
    when the suspect sits on the graph frontier); those still need prose.
    """
    if iri in labels:
        return labels[iri]
    local = unquote(str(iri).rstrip("/").rsplit("/", 1)[-1])
    return local.replace("_", " ") or str(iri)


def fact_source_text(fact, labels: dict) -> str:
    """Surface string of the fact's object: literal value or target label."""
    if fact.object_literal is not None:
        return fact.object_literal.value
    return label_or_local(labels, fact.object_entity)


def _verbatim_line(topic, fact, source_text, clue_id=None) -> DialogLine:
    record = TransformationRecord("verbatim", source_text, source_text, 1.0)
    return DialogLine(
        topic=topic,
        text=f'{VERBATIM_PREFIX}"{source_text}"',
        source_facts=(fact,) if fact is not None else (),
        transformation=record,
        clue_id=clue_id,
    )


def _template_line(topic, fact, labels, clue_id=None, value_override=None, kind="template"):
    template = template_for(fact.predicate, topic)
    if template is None:
        return None
    source_text = fact_source_text(fact, labels)
    value = value_override if value_override is not None else source_text
    subject = label_or_local(labels, fact.subject)
    rendered = template.format(subject=subject, value=value)
    record = TransformationRecord(kind, source_text, rendered, similarity(source_text, rendered))
    return DialogLine(topic, rendered, (fact,), record, clue_id)


@dataclass(frozen=True)
class ClueDirective:
    """A chain clue this NPC must voice: the fact of the connecting edge."""

    clue_id: str
    fact: object


def render_dialog(
    npc,
    facts,
    role: str,
    fidelity_level: str,
    seed: int,
    labels: dict | None = None,
    clue_directives=(),
    lie=None,
) -> DialogScript:
    """Render an NPC's full script, deterministic in the seed.

    ``facts`` holds self-facts (subject == npc) and hint facts about others;
    ``clue_directives`` inject chain clues; ``lie`` (culprit only) replaces
    the matching true fact with an altered line.
    """
    labels = labels or {}
    script = DialogScript(npc=npc.id)
    rng = stage_rng(seed, f"dialog:{npc.id}")

    label = npc.label
    if fidelity_level == "verbatim":
        greeting = DialogLine(
            topic="greeting",
            text=f'{VERBATIM_PREFIX}"{label}"',
            source_facts=(),
            transformation=TransformationRecord("verbatim", label, label, 1.0),
        )
    else:
        text = rng.choice(GREETINGS).format(label=label)
        greeting = DialogLine(
            topic="greeting",
            text=text,
            source_facts=(),
            transformation=TransformationRecord("template", label, text, similarity(label, text)),
        )
    script.lines.append(greeting)

    lied_key = None
    if lie is not None and role == "culprit":
        lied_key = (lie.truth.predicate, lie.truth.object_key)

    emitted_lie = False
    for fact in sorted(facts, key=lambda f: (f.subject, f.predicate, f.object_key)):
        topic = "self-fact" if fact.subject == npc.id else "suspect-hint"
        if lied_key and fact.subject == npc.id and (fact.predicate, fact.object_key) == lied_key:
            if emitted_lie:
                continue
            altered_value = fact_source_text(lie.altered, labels)
            line = _template_line("lie", fact, labels, value_override=altered_value, kind="altered")
            if line is None:
                record = TransformationRecord(
                    "altered",
                    fact_source_text(fact, labels),
                    altered_value,
                    similarity(fact_source_text(fact, labels), altered_value),
                )
                line = DialogLine("lie", f'{VERBATIM_PREFIX}"{altered_value}"', (fact,), record)
            script.lines.append(line)
            emitted_lie = True
            continue
        if fidelity_level == "verbatim":
            script.lines.append(_verbatim_line(topic, fact, fact_source_text(fact, labels)))
            continue
        line = _template_line(topic, fact, labels)
        if line is None:
            script.notes.append(f"no template for ({fact.predicate}, {topic}); rendered verbatim")
            line = _verbatim_line(topic, fact, fact_source_text(fact, labels))
        script.lines.append(line)

    for directive in clue_directives:
        fact = directive.fact
        if fidelity_level == "verbatim":
            line = _verbatim_line("clue", fact, fact_source_text(fact, labels), directive.clue_id)
        else:
            line = _template_line("clue", fact, labels, clue_id=directive.clue_id)
            if line is None:
                script.notes.append(f"no template for ({fact.predicate}, clue); rendered verbatim")
                line = _verbatim_line("clue", fact, fact_source_text(fact, labels), directive.clue_id)
        script.lines.append(line)

    return script
