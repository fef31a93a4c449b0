"""Domain types exchanged between the agents and the rest of the engine."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from ..errors import InvalidScenario
from ..stages import Stage

SCENARIO_SOURCES = ("catalog", "custom")

MAX_PROPOSALS = 4


@dataclass(frozen=True)
class TeachingScenario:
    subject: str
    grade_level: str
    lesson_topic: str
    scenario_text: str
    source: str = "custom"

    def __post_init__(self) -> None:
        if self.source not in SCENARIO_SOURCES:
            raise InvalidScenario(f"source must be one of {SCENARIO_SOURCES}, got {self.source!r}")
        if not self.scenario_text or not self.scenario_text.strip():
            raise InvalidScenario("scenario_text must be non-empty")
        if self.source == "catalog":
            for name in ("subject", "grade_level", "lesson_topic"):
                if not getattr(self, name).strip():
                    raise InvalidScenario(f"catalog scenarios require a non-empty {name}")


@dataclass(frozen=True)
class IntentionFinding:
    intention: str
    needs_gesture: bool
    rationale: str


@dataclass(frozen=True)
class GestureProposal:
    ordinal: int
    description: str
    intention: str
    gesture_type: str
    references: tuple[str, ...]
    few_shot_exemplar_id: int | None = None

    def __post_init__(self) -> None:
        if self.ordinal < 0:
            raise ValueError("ordinal must be >= 0")
        if not self.description.strip():
            raise ValueError("description must be non-empty")
        if not self.references:
            raise ValueError("a proposal must carry at least one citation reference")


@dataclass(frozen=True)
class ProposalSet:
    """Ordered proposals for one scenario; between one and four, ordinals 0..n-1."""

    proposals: tuple[GestureProposal, ...]

    def __post_init__(self) -> None:
        n = len(self.proposals)
        if not 1 <= n <= MAX_PROPOSALS:
            raise ValueError(f"a proposal set holds 1..{MAX_PROPOSALS} proposals, got {n}")
        for i, proposal in enumerate(self.proposals):
            if proposal.ordinal != i:
                raise ValueError(f"proposal at position {i} has ordinal {proposal.ordinal}")

    def __len__(self) -> int:
        return len(self.proposals)

    def __iter__(self):
        return iter(self.proposals)


@dataclass(frozen=True)
class MenteeMessage:
    text: str
    stage_hint: Stage
    role: str = "mentee"

    def __post_init__(self) -> None:
        if self.role != "mentee":
            raise ValueError("mentee messages always carry role 'mentee'")
        if not self.text.strip():
            raise ValueError("mentee message text must be non-empty")


class MenteeEvent(Enum):
    STAGE_ENTERED = "stage_entered"
    RATINGS_SUBMITTED = "ratings_submitted"
    DEMONSTRATION_ATTACHED = "demonstration_attached"
    EXPLANATION_SUBMITTED = "explanation_submitted"


MODEL_ROLES = ("reasoning", "chat")


@dataclass(frozen=True)
class TokenUsage:
    prompt_tokens: int = 0
    completion_tokens: int = 0


@dataclass(frozen=True)
class LlmRequest:
    model_role: str
    system_prompt: str
    messages: tuple[tuple[str, str], ...]
    response_schema: str | None = None
    temperature: float = 0.0

    def __post_init__(self) -> None:
        if self.model_role not in MODEL_ROLES:
            raise ValueError(f"model_role must be one of {MODEL_ROLES}")
        if not self.messages:
            raise ValueError("request must carry at least one message")


@dataclass(frozen=True)
class LlmResponse:
    raw_text: str
    usage: TokenUsage = field(default_factory=TokenUsage)
