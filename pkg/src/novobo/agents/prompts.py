"""System prompts and user-message blocks for the three agents.

Prompts embed the taxonomy definitions verbatim so every generation is
grounded in the loaded knowledge, and spell out step-by-step reasoning for
the analytical agents. The mentee persona prompt carries the novice-teacher
framing and never includes exemplar texts.
"""

from __future__ import annotations

from ..knowledge import KnowledgeBase
from .types import TeachingScenario

AGENT_KINDS = ("intention_analyzer", "gesture_generator", "mentee_persona")

_PERSONA_RULES = """\
You are a novice teacher agent: well read in theory but without classroom
experience. The people talking to you are experienced teachers acting as your
mentors. Stay in that role at all times:
- Speak as an eager mentee: curious, grateful, never lecturing your mentors.
- Never claim practical classroom experience of your own.
- Guide the mentors through the current stage with one clear request.
- When they give feedback, say concretely what you take away from it.
- Keep replies short (at most three sentences) and warm in tone."""


def _intention_block(kb: KnowledgeBase) -> str:
    lines = ["Instructional intentions you may use (key: description):"]
    for intention in kb.intentions:
        lines.append(f"- {intention.id}: {intention.description}")
    return "\n".join(lines)


def _gesture_type_block(kb: KnowledgeBase) -> str:
    lines = ["Gesture types you may use (key: definition):"]
    for gesture_type in kb.gesture_types:
        lines.append(f"- {gesture_type.id}: {gesture_type.definition}")
    return "\n".join(lines)


def assemble_system_prompt(kb: KnowledgeBase, agent: str) -> str:
    """Build the system prompt for one of the three agents."""
    if agent == "intention_analyzer":
        return "\n\n".join(
            [
                "You analyze a teaching scenario and decide which instructional "
                "intentions apply and whether each one calls for a gesture.",
                _intention_block(kb),
                "Reason step by step before answering:\n"
                "1. Read the scenario and picture the classroom moment.\n"
                "2. For each intention above, decide whether it applies here.\n"
                "3. For each applicable intention, decide whether a gesture would "
                "serve it, and why.",
                'Answer with only a JSON document: {"findings": [{"intention": '
                '<intention key>, "needs_gesture": <true|false>, "rationale": <one '
                "sentence>}]}. Use only the intention keys listed above.",
            ]
        )
    if agent == "gesture_generator":
        return "\n\n".join(
            [
                "You design one instructional gesture for a teaching scenario and "
                "a given instructional intention.",
                _gesture_type_block(kb),
                "Reason step by step before answering:\n"
                "1. Re-read the scenario and the intention it should serve.\n"
                "2. If an example gesture from a similar scenario is given, study "
                "what makes it work.\n"
                "3. Choose the gesture type that fits best, then describe a "
                "concrete, performable gesture.",
                'Answer with only a JSON document: {"description": <how to perform '
                'the gesture, one or two sentences>, "gesture_type": <gesture type '
                "key>}. Use only the gesture type keys listed above.",
            ]
        )
    if agent == "mentee_persona":
        return "\n\n".join(
            [
                _PERSONA_RULES,
                'Answer with only a JSON document: {"text": <your reply>}.',
            ]
        )
    raise ValueError(f"unknown agent {agent!r}, expected one of {AGENT_KINDS}")


def _one_line(text: str) -> str:
    return " ".join(text.split())


def scenario_block(scenario: TeachingScenario) -> str:
    """Labeled scenario lines shared by the analyzer and generator messages."""
    return "\n".join(
        [
            f"Subject: {_one_line(scenario.subject) or '(unspecified)'}",
            f"Grade level: {_one_line(scenario.grade_level) or '(unspecified)'}",
            f"Lesson topic: {_one_line(scenario.lesson_topic) or '(unspecified)'}",
            f"Scenario text: {_one_line(scenario.scenario_text)}",
        ]
    )


def analyzer_message(scenario: TeachingScenario) -> str:
    return scenario_block(scenario)


def generator_message(
    scenario: TeachingScenario,
    intention_key: str,
    intention_description: str,
    exemplar_description: str | None,
) -> str:
    lines = [
        scenario_block(scenario),
        f"Intention: {intention_key}",
        f"Intention description: {_one_line(intention_description)}",
    ]
    if exemplar_description is not None:
        lines.append(f"Example gesture from a similar scenario: {_one_line(exemplar_description)}")
    else:
        lines.append("Example gesture from a similar scenario: (none available)")
    return "\n".join(lines)


def mentee_message_body(event: str, stage: str, details: str) -> str:
    return "\n".join(
        [
            f"Event: {event}",
            f"Stage: {stage}",
            f"Details: {_one_line(details) if details else '(none)'}",
        ]
    )


def summary_message_body(
    scenario_text: str,
    ratings_digest: str,
    explanation: str,
    prior_summaries: tuple[str, ...],
) -> str:
    lines = [
        f"Scenario text: {_one_line(scenario_text)}",
        f"Ratings digest: {_one_line(ratings_digest)}",
        f"Explanation: {_one_line(explanation)}",
    ]
    if prior_summaries:
        lines.append("Earlier rounds taught you:")
        lines.extend(f"- {_one_line(s)}" for s in prior_summaries)
    return "\n".join(lines)
