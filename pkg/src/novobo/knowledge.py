"""Domain knowledge: gesture-type and intention taxonomies, exemplars, citations.

The knowledge base is loaded once from a structured-text document (YAML, of
which JSON is a subset) and is immutable afterwards; every piece of generated
content is grounded in it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Any, Mapping

import yaml

from .errors import DanglingReference, MissingTaxonomyEntry, NotFound, ParseError

GESTURE_TYPE_KEYS = ("iconic", "metaphoric", "deictic", "emblematic")
INTENTION_KEYS = (
    "explain_complex",
    "attract_attention",
    "positive_feedback",
    "impart_new_knowledge",
    "role_modeling",
)
ORIGINS = ("literature", "practitioner_added")


@dataclass(frozen=True)
class CitationRef:
    key: str
    display: str


@dataclass(frozen=True)
class GestureType:
    id: str
    definition: str
    citations: tuple[CitationRef, ...]


@dataclass(frozen=True)
class InstructionalIntention:
    id: str
    description: str
    origin: str
    citations: tuple[CitationRef, ...]


@dataclass(frozen=True)
class GestureExemplar:
    id: int
    scenario_text: str
    gesture_description: str
    gesture_type: str
    intention: str
    annotator_note: str


@dataclass(frozen=True)
class DefinitionEntry:
    """Result of a taxonomy lookup: the entry text plus its sources."""

    kind: str
    key: str
    definition: str
    citations: tuple[CitationRef, ...]
    origin: str | None = None


@dataclass(frozen=True)
class Violation:
    code: str
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class KnowledgeBase:
    gesture_types: tuple[GestureType, ...]
    intentions: tuple[InstructionalIntention, ...]
    exemplars: tuple[GestureExemplar, ...]
    citations: Mapping[str, CitationRef] = field(default_factory=dict)

    def gesture_type(self, key: str) -> GestureType:
        for entry in self.gesture_types:
            if entry.id == key:
                return entry
        raise NotFound(f"unknown gesture type {key!r}")

    def intention(self, key: str) -> InstructionalIntention:
        for entry in self.intentions:
            if entry.id == key:
                return entry
        raise NotFound(f"unknown intention {key!r}")

    def exemplar(self, exemplar_id: int) -> GestureExemplar:
        for entry in self.exemplars:
            if entry.id == exemplar_id:
                return entry
        raise NotFound(f"unknown exemplar id {exemplar_id}")

    @property
    def gesture_type_keys(self) -> frozenset[str]:
        return frozenset(entry.id for entry in self.gesture_types)

    @property
    def intention_keys(self) -> frozenset[str]:
        return frozenset(entry.id for entry in self.intentions)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ParseError(message)


def _nonempty_str(value: Any, where: str) -> str:
    _require(isinstance(value, str), f"{where} must be a string")
    _require(value.strip() != "", f"{where} must be non-empty")
    return value


def _resolve_citations(
    keys: Any, citations: dict[str, CitationRef], where: str
) -> tuple[CitationRef, ...]:
    if keys is None:
        keys = []
    _require(isinstance(keys, list), f"{where}.citation_keys must be a list")
    resolved = []
    for key in keys:
        _require(isinstance(key, str), f"{where}.citation_keys entries must be strings")
        if key not in citations:
            raise DanglingReference(f"{where} cites unknown citation key {key!r}")
        resolved.append(citations[key])
    return tuple(resolved)


def parse_knowledge_document(doc: Any) -> KnowledgeBase:
    """Validate an already-parsed KB document and build the immutable base."""
    _require(isinstance(doc, dict), "KB document must be a mapping")

    allowed = {"gesture_types", "intentions", "citations", "exemplars"}
    unknown = set(doc) - allowed
    _require(not unknown, f"unknown top-level keys: {sorted(unknown)}")

    citations: dict[str, CitationRef] = {}
    for i, raw in enumerate(doc.get("citations") or []):
        _require(isinstance(raw, dict), f"citations[{i}] must be a mapping")
        key = _nonempty_str(raw.get("key"), f"citations[{i}].key")
        display = _nonempty_str(raw.get("display"), f"citations[{i}].display")
        _require(key not in citations, f"duplicate citation key {key!r}")
        citations[key] = CitationRef(key=key, display=display)

    raw_types = doc.get("gesture_types")
    _require(isinstance(raw_types, list), "gesture_types must be a list")
    gesture_types: list[GestureType] = []
    seen_types: set[str] = set()
    for i, raw in enumerate(raw_types):
        _require(isinstance(raw, dict), f"gesture_types[{i}] must be a mapping")
        key = _nonempty_str(raw.get("id"), f"gesture_types[{i}].id")
        _require(key in GESTURE_TYPE_KEYS, f"unknown gesture type id {key!r}")
        _require(key not in seen_types, f"duplicate gesture type {key!r}")
        seen_types.add(key)
        gesture_types.append(
            GestureType(
                id=key,
                definition=_nonempty_str(raw.get("definition"), f"gesture_types[{i}].definition"),
                citations=_resolve_citations(
                    raw.get("citation_keys"), citations, f"gesture_types[{i}]"
                ),
            )
        )
    for key in GESTURE_TYPE_KEYS:
        if key not in seen_types:
            raise MissingTaxonomyEntry(f"gesture type {key!r} is missing")

    raw_intentions = doc.get("intentions")
    _require(isinstance(raw_intentions, list), "intentions must be a list")
    intentions: list[InstructionalIntention] = []
    seen_intentions: set[str] = set()
    for i, raw in enumerate(raw_intentions):
        _require(isinstance(raw, dict), f"intentions[{i}] must be a mapping")
        key = _nonempty_str(raw.get("id"), f"intentions[{i}].id")
        _require(key in INTENTION_KEYS, f"unknown intention id {key!r}")
        _require(key not in seen_intentions, f"duplicate intention {key!r}")
        seen_intentions.add(key)
        origin = _nonempty_str(raw.get("origin"), f"intentions[{i}].origin")
        _require(origin in ORIGINS, f"intentions[{i}].origin must be one of {ORIGINS}")
        expected = "practitioner_added" if key == "role_modeling" else "literature"
        _require(
            origin == expected,
            f"intention {key!r} must have origin {expected!r}, got {origin!r}",
        )
        cites = _resolve_citations(raw.get("citation_keys"), citations, f"intentions[{i}]")
        _require(
            bool(cites) or origin == "practitioner_added",
            f"intention {key!r} has origin literature but no citations",
        )
        intentions.append(
            InstructionalIntention(
                id=key,
                description=_nonempty_str(raw.get("description"), f"intentions[{i}].description"),
                origin=origin,
                citations=cites,
            )
        )
    for key in INTENTION_KEYS:
        if key not in seen_intentions:
            raise MissingTaxonomyEntry(f"intention {key!r} is missing")

    exemplars: list[GestureExemplar] = []
    seen_ids: set[int] = set()
    for i, raw in enumerate(doc.get("exemplars") or []):
        _require(isinstance(raw, dict), f"exemplars[{i}] must be a mapping")
        ex_id = raw.get("id")
        _require(isinstance(ex_id, int) and not isinstance(ex_id, bool), f"exemplars[{i}].id must be an integer")
        _require(ex_id >= 0, f"exemplars[{i}].id must be >= 0")
        _require(ex_id not in seen_ids, f"duplicate exemplar id {ex_id}")
        seen_ids.add(ex_id)
        gesture_type = _nonempty_str(raw.get("gesture_type"), f"exemplars[{i}].gesture_type")
        if gesture_type not in seen_types:
            raise DanglingReference(f"exemplars[{i}] references unknown gesture type {gesture_type!r}")
        intention = _nonempty_str(raw.get("intention"), f"exemplars[{i}].intention")
        if intention not in seen_intentions:
            raise DanglingReference(f"exemplars[{i}] references unknown intention {intention!r}")
        exemplars.append(
            GestureExemplar(
                id=ex_id,
                scenario_text=_nonempty_str(raw.get("scenario_text"), f"exemplars[{i}].scenario_text"),
                gesture_description=_nonempty_str(
                    raw.get("gesture_description"), f"exemplars[{i}].gesture_description"
                ),
                gesture_type=gesture_type,
                intention=intention,
                annotator_note=_nonempty_str(raw.get("annotator_note"), f"exemplars[{i}].annotator_note"),
            )
        )

    return KnowledgeBase(
        gesture_types=tuple(gesture_types),
        intentions=tuple(intentions),
        exemplars=tuple(exemplars),
        citations=MappingProxyType(citations),
    )


def load_knowledge_base(path: str | Path) -> KnowledgeBase:
    """Load and fully validate a KB document from disk.

    Raises ParseError for malformed documents, MissingTaxonomyEntry when any
    of the four gesture types or five intentions is absent, and
    DanglingReference for unresolved citation or taxonomy keys.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read KB document {path}: {exc}") from exc
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ParseError(f"KB document {path} is not valid YAML/JSON: {exc}") from exc
    return parse_knowledge_document(doc)


def lookup_definition(kb: KnowledgeBase, kind: str, key: str) -> DefinitionEntry:
    """Return the taxonomy entry for ``key`` with its citations.

    ``kind`` is "gesture_type" or "intention"; raises NotFound for unknown
    keys (including keys of the other kind).
    """
    if kind == "gesture_type":
        try:
            entry = kb.gesture_type(key)
        except NotFound:
            raise NotFound(f"no gesture type named {key!r}") from None
        return DefinitionEntry(
            kind=kind, key=key, definition=entry.definition, citations=entry.citations
        )
    if kind == "intention":
        try:
            intent = kb.intention(key)
        except NotFound:
            raise NotFound(f"no intention named {key!r}") from None
        return DefinitionEntry(
            kind=kind,
            key=key,
            definition=intent.description,
            citations=intent.citations,
            origin=intent.origin,
        )
    raise NotFound(f"unknown taxonomy kind {kind!r}")


def validate_exemplar(kb: KnowledgeBase, candidate: GestureExemplar) -> ValidationReport:
    """Check a candidate exemplar against the loaded taxonomies.

    Violations are data, not faults: the report lists every violated
    invariant and is ok iff the list is empty.
    """
    violations: list[Violation] = []
    if candidate.id < 0:
        violations.append(Violation("NegativeId", f"id {candidate.id} is negative"))
    if candidate.gesture_type not in kb.gesture_type_keys:
        violations.append(
            Violation("UnknownGestureType", f"gesture type {candidate.gesture_type!r} not in taxonomy")
        )
    if candidate.intention not in kb.intention_keys:
        violations.append(
            Violation("UnknownIntention", f"intention {candidate.intention!r} not in taxonomy")
        )
    for field_name in ("scenario_text", "gesture_description", "annotator_note"):
        value = getattr(candidate, field_name)
        if not isinstance(value, str) or not value.strip():
            violations.append(Violation("EmptyField", f"{field_name} is empty"))
    return ValidationReport(violations=tuple(violations))
