"""The two-agent generation pipeline and the conversational mentee.

Flow per scenario: the intention analyzer produces findings, then for each
gesture-requiring finding (capped at four) the most similar exemplar is
retrieved and the gesture generator produces one proposal grounded in the
taxonomy. Proposal references are the citations attached to the chosen
taxonomy entries, never free-form model output.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from ..errors import MalformedOutput, NoGestureNeeded
from ..knowledge import KnowledgeBase
from ..retrieval import Embedder, ExemplarIndex, RetrievalHit, embed_text, retrieve_most_similar
from ..stages import Stage
from . import prompts
from .providers import LlmClient
from .structured import parse_structured_output
from .types import (
    MAX_PROPOSALS,
    GestureProposal,
    IntentionFinding,
    LlmRequest,
    MenteeEvent,
    MenteeMessage,
    ProposalSet,
    TeachingScenario,
)

# after the first answer, at most this many corrective re-asks
MAX_RETRIES = 2

REASONING_TEMPERATURE = 0.0
MENTEE_TEMPERATURE = 0.7

_RETRY_INSTRUCTION = (
    "Your previous answer was rejected: {violation}. Answer again with only a "
    "valid JSON document in the required schema."
)


@dataclass(frozen=True)
class AgentRuntime:
    """Everything the pipeline needs, bundled for callers."""

    kb: KnowledgeBase
    llm: LlmClient
    embedder: Embedder
    index: ExemplarIndex


@dataclass(frozen=True)
class SessionView:
    """Read-only session context handed to the mentee persona."""

    stage: Stage
    round_index: int
    proposal_count: int
    group_label: str | None = None


@dataclass(frozen=True)
class RoundDigest:
    """What one completed (or completing) round taught the mentee."""

    scenario_text: str
    ratings_digest: str
    has_recording: bool
    explanation: str
    prior_summaries: tuple[str, ...] = ()


def _structured_call(llm: LlmClient, kb: KnowledgeBase, request: LlmRequest, schema: str):
    violation: str | None = None
    for _ in range(MAX_RETRIES + 1):
        attempt = request
        if violation is not None:
            attempt = replace(
                request,
                messages=request.messages
                + (("user", _RETRY_INSTRUCTION.format(violation=violation)),),
            )
        response = llm.complete(attempt)
        try:
            return parse_structured_output(response.raw_text, schema, kb)
        except MalformedOutput as exc:
            violation = exc.violation
    raise MalformedOutput(violation or "structured output invalid")


def analyze_intentions(
    llm: LlmClient, kb: KnowledgeBase, scenario: TeachingScenario
) -> list[IntentionFinding]:
    """Run the intention analysis agent over one scenario."""
    request = LlmRequest(
        model_role="reasoning",
        system_prompt=prompts.assemble_system_prompt(kb, "intention_analyzer"),
        messages=(("user", prompts.analyzer_message(scenario)),),
        response_schema="intention_findings",
        temperature=REASONING_TEMPERATURE,
    )
    return _structured_call(llm, kb, request, "intention_findings")


def generate_gesture_proposal(
    llm: LlmClient,
    kb: KnowledgeBase,
    scenario: TeachingScenario,
    finding: IntentionFinding,
    hit: RetrievalHit | None,
    *,
    ordinal: int = 0,
) -> GestureProposal:
    """Run the gesture generation agent for one gesture-requiring finding."""
    if not finding.needs_gesture:
        raise ValueError("finding does not require a gesture")
    intention = kb.intention(finding.intention)
    exemplar_description = (
        kb.exemplar(hit.exemplar_id).gesture_description if hit is not None else None
    )
    request = LlmRequest(
        model_role="reasoning",
        system_prompt=prompts.assemble_system_prompt(kb, "gesture_generator"),
        messages=(
            (
                "user",
                prompts.generator_message(
                    scenario, intention.id, intention.description, exemplar_description
                ),
            ),
        ),
        response_schema="gesture_proposal",
        temperature=REASONING_TEMPERATURE,
    )
    draft = _structured_call(llm, kb, request, "gesture_proposal")
    references: list[str] = []
    for citation in (
        *kb.gesture_type(draft.gesture_type).citations,
        *intention.citations,
    ):
        if citation.key not in references:
            references.append(citation.key)
    return GestureProposal(
        ordinal=ordinal,
        description=draft.description,
        intention=finding.intention,
        gesture_type=draft.gesture_type,
        references=tuple(references),
        few_shot_exemplar_id=hit.exemplar_id if hit is not None else None,
    )


def run_generation_pipeline(
    llm: LlmClient,
    kb: KnowledgeBase,
    index: ExemplarIndex,
    embedder: Embedder,
    scenario: TeachingScenario,
) -> ProposalSet:
    """Analyze, retrieve, and generate -- at most four proposals per scenario.

    Raises NoGestureNeeded when every finding was flagged as not needing a
    gesture; callers surface that as a mentee message, not a fault.
    """
    findings = analyze_intentions(llm, kb, scenario)
    gesture_findings = [f for f in findings if f.needs_gesture]
    if not gesture_findings:
        raise NoGestureNeeded("no finding requires a gesture for this scenario")
    proposals = []
    for ordinal, finding in enumerate(gesture_findings[:MAX_PROPOSALS]):
        query_text = f"{scenario.scenario_text} {kb.intention(finding.intention).description}"
        hit = retrieve_most_similar(index, embed_text(embedder, query_text))
        proposals.append(
            generate_gesture_proposal(llm, kb, scenario, finding, hit, ordinal=ordinal)
        )
    return ProposalSet(proposals=tuple(proposals))


_EVENT_STAGES = {
    MenteeEvent.RATINGS_SUBMITTED: Stage.COMMENTARY,
    MenteeEvent.DEMONSTRATION_ATTACHED: Stage.DEMONSTRATION,
    MenteeEvent.EXPLANATION_SUBMITTED: Stage.EXPLANATION,
}


def mentee_reply(
    llm: LlmClient,
    kb: KnowledgeBase,
    session_view: SessionView,
    event: MenteeEvent,
    payload: str = "",
) -> MenteeMessage:
    """Produce the mentee persona's reply to a session event.

    Always uses the fast chat model role; the reply's stage hint is the stage
    the event belongs to.
    """
    expected = _EVENT_STAGES.get(event)
    if expected is not None and session_view.stage is not expected:
        raise ValueError(
            f"event {event.value} belongs to stage {expected.value}, "
            f"view says {session_view.stage.value}"
        )
    request = LlmRequest(
        model_role="chat",
        system_prompt=prompts.assemble_system_prompt(kb, "mentee_persona"),
        messages=(
            (
                "user",
                prompts.mentee_message_body(event.value, session_view.stage.value, payload),
            ),
        ),
        response_schema="mentee_message",
        temperature=MENTEE_TEMPERATURE,
    )
    text = _structured_call(llm, kb, request, "mentee_message")
    return MenteeMessage(text=text, stage_hint=session_view.stage)


def summarize_principles(llm: LlmClient, kb: KnowledgeBase, digest: RoundDigest) -> str:
    """Summarize the principles the teachers shared during one round."""
    if not digest.ratings_digest.strip():
        raise ValueError("round has no ratings to summarize")
    if not digest.has_recording:
        raise ValueError("round has no demonstration recording")
    if not digest.explanation.strip():
        raise ValueError("round has no explanation")
    request = LlmRequest(
        model_role="reasoning",
        system_prompt=prompts.assemble_system_prompt(kb, "mentee_persona"),
        messages=(
            (
                "user",
                "Summarize the principles and guidelines for using instructional "
                "gestures that your mentors shared this round.\n"
                + prompts.summary_message_body(
                    digest.scenario_text,
                    digest.ratings_digest,
                    digest.explanation,
                    digest.prior_summaries,
                ),
            ),
        ),
        response_schema="round_summary",
        temperature=REASONING_TEMPERATURE,
    )
    return _structured_call(llm, kb, request, "round_summary")
