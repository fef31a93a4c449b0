"""Strict validation of model output against the agents' wire schemas.

Agents must answer with a single JSON document. Validation is strict: unknown
fields are rejected and enum-like fields are checked against the loaded
taxonomies. The first violation is reported in the MalformedOutput so the
retry prompt can quote it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from ..errors import MalformedOutput
from ..knowledge import KnowledgeBase
from .types import IntentionFinding

SCHEMAS = ("intention_findings", "gesture_proposal", "mentee_message", "round_summary")


@dataclass(frozen=True)
class ProposalDraft:
    """The generator's raw answer before references and ordinal are attached."""

    description: str
    gesture_type: str


def _reject(code: str, detail: str) -> MalformedOutput:
    return MalformedOutput(f"{code}: {detail}")


def _as_object(value: Any, where: str, allowed: tuple[str, ...]) -> dict:
    if not isinstance(value, dict):
        raise _reject("NotObject", f"{where} must be a JSON object")
    unknown = set(value) - set(allowed)
    if unknown:
        raise _reject("UnexpectedField", f"{where} has unknown field {sorted(unknown)[0]!r}")
    missing = [key for key in allowed if key not in value]
    if missing:
        raise _reject("MissingField", f"{where} is missing field {missing[0]!r}")
    return value


def _as_text(value: Any, where: str) -> str:
    if not isinstance(value, str):
        raise _reject("WrongType", f"{where} must be a string")
    if not value.strip():
        raise _reject("EmptyText", f"{where} must be non-empty")
    return value


def parse_structured_output(raw: str, schema: str, kb: KnowledgeBase) -> Any:
    """Parse one model answer against the named schema.

    Returns the parsed value (list of IntentionFinding, a ProposalDraft, or
    plain text for mentee/summary schemas). Raises MalformedOutput carrying
    the first violation.
    """
    if schema not in SCHEMAS:
        raise ValueError(f"unknown schema {schema!r}, expected one of {SCHEMAS}")
    try:
        doc = json.loads(raw)
    except (json.JSONDecodeError, TypeError) as exc:
        raise _reject("NotJson", f"answer is not a JSON document ({exc})") from exc

    if schema == "intention_findings":
        body = _as_object(doc, "document", ("findings",))
        findings = body["findings"]
        if not isinstance(findings, list):
            raise _reject("WrongType", "findings must be a list")
        if not findings:
            raise _reject("EmptyFindings", "at least one finding is required")
        parsed = []
        for i, item in enumerate(findings):
            entry = _as_object(item, f"findings[{i}]", ("intention", "needs_gesture", "rationale"))
            intention = _as_text(entry["intention"], f"findings[{i}].intention")
            if intention not in kb.intention_keys:
                raise _reject("UnknownIntention", f"{intention!r} is not a known intention")
            needs = entry["needs_gesture"]
            if not isinstance(needs, bool):
                raise _reject("WrongType", f"findings[{i}].needs_gesture must be a boolean")
            rationale = _as_text(entry["rationale"], f"findings[{i}].rationale")
            parsed.append(
                IntentionFinding(intention=intention, needs_gesture=needs, rationale=rationale)
            )
        return parsed

    if schema == "gesture_proposal":
        body = _as_object(doc, "document", ("description", "gesture_type"))
        description = _as_text(body["description"], "description")
        gesture_type = _as_text(body["gesture_type"], "gesture_type")
        if gesture_type not in kb.gesture_type_keys:
            raise _reject("UnknownGestureType", f"{gesture_type!r} is not a known gesture type")
        return ProposalDraft(description=description, gesture_type=gesture_type)

    if schema == "mentee_message":
        body = _as_object(doc, "document", ("text",))
        return _as_text(body["text"], "text")

    # round_summary
    body = _as_object(doc, "document", ("summary",))
    return _as_text(body["summary"], "summary")
