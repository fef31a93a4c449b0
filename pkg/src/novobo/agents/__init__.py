"""Three-agent workflow: intention analysis, gesture generation, mentee persona."""

from .pipeline import (
    MAX_RETRIES,
    AgentRuntime,
    RoundDigest,
    SessionView,
    analyze_intentions,
    generate_gesture_proposal,
    mentee_reply,
    run_generation_pipeline,
    summarize_principles,
)
from .prompts import assemble_system_prompt
from .providers import HttpLlmClient, LlmClient, StubLlmClient
from .structured import parse_structured_output
from .types import (
    MAX_PROPOSALS,
    GestureProposal,
    IntentionFinding,
    LlmRequest,
    LlmResponse,
    MenteeEvent,
    MenteeMessage,
    ProposalSet,
    TeachingScenario,
    TokenUsage,
)

__all__ = [
    "MAX_PROPOSALS",
    "MAX_RETRIES",
    "AgentRuntime",
    "GestureProposal",
    "HttpLlmClient",
    "IntentionFinding",
    "LlmClient",
    "LlmRequest",
    "LlmResponse",
    "MenteeEvent",
    "MenteeMessage",
    "ProposalSet",
    "RoundDigest",
    "SessionView",
    "StubLlmClient",
    "TeachingScenario",
    "TokenUsage",
    "analyze_intentions",
    "assemble_system_prompt",
    "generate_gesture_proposal",
    "mentee_reply",
    "parse_structured_output",
    "run_generation_pipeline",
    "summarize_principles",
]
