"""Chat-provider clients: the live HTTP client and the scripted stub.

The stub implements the same interface as the live client and is a pure
function of (request content, seed): the whole pipeline becomes replayable
byte-for-byte, which the deterministic transcript tests rely on. Tests can
also preload it with scripted raw responses to exercise retry handling.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import threading
from typing import Iterable, Mapping, Protocol, Sequence

import httpx

from ..errors import ProviderError
from .types import LlmRequest, LlmResponse, TokenUsage


class LlmClient(Protocol):
    def complete(self, request: LlmRequest) -> LlmResponse: ...


def _word_count(texts: Iterable[str]) -> int:
    return sum(len(t.split()) for t in texts)


class HttpLlmClient:
    """Client for an HTTP chat endpoint: {model, messages, sampling params} in,
    text out. Model ids per role and the endpoint are configuration; the API
    key comes from the environment only."""

    def __init__(
        self,
        endpoint: str,
        models: Mapping[str, str],
        *,
        api_key_env: str = "NOVOBO_API_KEY",
        timeout_ms: int = 60_000,
        max_inflight: int = 4,
    ) -> None:
        self._endpoint = endpoint
        self._models = dict(models)
        self._api_key = os.environ.get(api_key_env, "")
        self._client = httpx.Client(timeout=timeout_ms / 1000.0)
        self._gate = threading.Semaphore(max_inflight)

    def complete(self, request: LlmRequest) -> LlmResponse:
        model = self._models.get(request.model_role)
        if not model:
            raise ProviderError(f"no model configured for role {request.model_role!r}")
        wire_messages = [{"role": "system", "content": request.system_prompt}]
        for speaker, text in request.messages:
            role = "assistant" if speaker in ("mentee", "assistant") else "user"
            wire_messages.append({"role": role, "content": text})
        payload = {"model": model, "messages": wire_messages, "temperature": request.temperature}
        headers = {"Authorization": f"Bearer {self._api_key}"}
        with self._gate:
            try:
                response = self._client.post(self._endpoint, json=payload, headers=headers)
            except httpx.TimeoutException as exc:
                raise ProviderError(f"chat request timed out: {exc}", retryable=True) from exc
            except httpx.HTTPError as exc:
                raise ProviderError(f"chat request failed: {exc}", retryable=True) from exc
        if response.status_code >= 500:
            raise ProviderError(f"chat provider error {response.status_code}", retryable=True)
        if response.status_code >= 400:
            raise ProviderError(f"chat request rejected {response.status_code}", retryable=False)
        body = response.json()
        text = None
        if isinstance(body, dict):
            try:
                text = body["choices"][0]["message"]["content"]
            except (KeyError, IndexError, TypeError):
                text = body.get("text") or body.get("content")
        if not isinstance(text, str):
            raise ProviderError("chat response carries no text", retryable=False)
        usage = body.get("usage") or {}
        return LlmResponse(
            raw_text=text,
            usage=TokenUsage(
                prompt_tokens=int(usage.get("prompt_tokens", 0)),
                completion_tokens=int(usage.get("completion_tokens", 0)),
            ),
        )


# --- stub provider ----------------------------------------------------------

# scenario keywords -> intention, checked in taxonomy order; single words are
# matched on word boundaries, phrases as plain substrings
_INTENTION_CUES: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("explain_complex", ("fell", "fraction", "cycle", "orbit", "grow", "feel", "imagine", "beauty")),
    ("attract_attention", ("attention", "eyes on me", "look at", "listen", "focus")),
    ("positive_feedback", ("really rich", "great", "well done", "teamwork", "excellent", "proud")),
    ("impart_new_knowledge", ("today we will learn", "once a year", "new")),
    ("role_modeling", ("raise your hand", "sit up straight", "like this", "imitate")),
)

_TYPE_AFFINITY: dict[str, tuple[str, ...]] = {
    "explain_complex": ("iconic", "metaphoric"),
    "attract_attention": ("deictic", "emblematic"),
    "positive_feedback": ("emblematic",),
    "impart_new_knowledge": ("iconic", "metaphoric"),
    "role_modeling": ("emblematic", "iconic"),
}

_DESCRIPTION_TEMPLATES: dict[str, tuple[str, ...]] = {
    "iconic": (
        'While saying "{snippet}", trace the motion the words describe in the air '
        "with both hands, keeping the movement slow and visible.",
        'Act out the scene of "{snippet}" with broad hand movements at chest '
        "height, matching each beat of the sentence.",
    ),
    "metaphoric": (
        'Shape an invisible object between your hands to stand for the idea in '
        '"{snippet}", then move it to show how the idea changes.',
        'Hold both hands as if weighing the thought behind "{snippet}", letting '
        "the distance between them carry the meaning.",
    ),
    "deictic": (
        'Point with an open palm toward what "{snippet}" refers to and hold the '
        "point until every student's gaze has followed it.",
        'Sweep your index finger to the target of "{snippet}" and pause there '
        "while the words land.",
    ),
    "emblematic": (
        'Right after saying "{snippet}", give a clear thumbs-up at chest height '
        "toward the students.",
        'Clap twice, firm and slow, as you say "{snippet}", then hold both hands '
        "still at shoulder height.",
    ),
}

_MENTEE_STAGE_LINES: dict[str, tuple[str, ...]] = {
    "PosingQuestion": (
        "I am ready for a new teaching scenario. Pick one from the catalog or "
        "describe your own, and I will propose gestures for it.",
        "What scenario shall we work on next? I will suggest gestures as soon as "
        "you pose one.",
    ),
    "Commentary": (
        "Here are my gesture ideas for this scenario. Please rate each one with "
        "stars and tell me in a comment what works and what does not.",
        "These are the gestures I would try. Could you star each one and comment "
        "on its strengths and weaknesses?",
    ),
    "Demonstration": (
        "Could you demonstrate a gesture you would actually use here? Press "
        "practice to warm up in the mirror, then record when you are satisfied.",
        "Please show me how you would do it: practice in front of the mirror "
        "first, then record the take you want me to learn from.",
    ),
    "Explanation": (
        "Thank you for the demonstration! Please describe your gesture in words "
        "and explain why it fits this scenario.",
        "I watched carefully. Now, could you put the gesture into words and "
        "explain the reasoning behind it?",
    ),
}


def _find_cues(scenario_text: str) -> list[str]:
    lowered = scenario_text.lower()
    matched = []
    for intention, cues in _INTENTION_CUES:
        for cue in cues:
            hit = (
                re.search(rf"\b{re.escape(cue)}\b", lowered)
                if " " not in cue
                else cue in lowered
            )
            if hit:
                matched.append(intention)
                break
    return matched


class StubLlmClient:
    """Deterministic offline chat provider.

    Responses are synthesized from labeled fields in the last user message
    plus the seed; if ``script`` entries are queued they are returned first,
    verbatim. Every request is recorded for assertions.
    """

    def __init__(self, seed: int = 0, script: Sequence[str] | None = None) -> None:
        self.seed = seed
        self._script: list[str] = list(script) if script else []
        self.requests: list[LlmRequest] = []

    def push_script(self, *responses: str) -> None:
        self._script.extend(responses)

    def complete(self, request: LlmRequest) -> LlmResponse:
        self.requests.append(request)
        if self._script:
            raw = self._script.pop(0)
        else:
            raw = self._synthesize(request)
        prompt_tokens = _word_count(
            [request.system_prompt, *(text for _, text in request.messages)]
        )
        return LlmResponse(
            raw_text=raw,
            usage=TokenUsage(prompt_tokens=prompt_tokens, completion_tokens=len(raw.split())),
        )

    # -- synthesis helpers --

    def _pick(self, options: Sequence[str], *key: str) -> str:
        digest = hashlib.sha256("|".join((str(self.seed), *key)).encode("utf-8")).digest()
        return options[digest[0] % len(options)]

    @staticmethod
    def _field(text: str, label: str) -> str:
        match = re.search(rf"^{re.escape(label)}: (.*)$", text, flags=re.MULTILINE)
        return match.group(1).strip() if match else ""

    def _synthesize(self, request: LlmRequest) -> str:
        body = request.messages[-1][1]
        schema = request.response_schema
        if schema == "intention_findings":
            scenario = self._field(body, "Scenario text")
            intentions = _find_cues(scenario) or ["explain_complex"]
            findings = [
                {
                    "intention": intention,
                    "needs_gesture": True,
                    "rationale": f"The scenario calls for {intention.replace('_', ' ')}, "
                    "and a gesture would make it land.",
                }
                for intention in intentions[:3]
            ]
            return json.dumps({"findings": findings})
        if schema == "gesture_proposal":
            scenario = self._field(body, "Scenario text")
            intention = self._field(body, "Intention")
            gesture_type = self._pick(
                _TYPE_AFFINITY.get(intention, ("iconic",)), "type", scenario, intention
            )
            template = self._pick(
                _DESCRIPTION_TEMPLATES[gesture_type], "description", scenario, intention
            )
            return json.dumps(
                {
                    "description": template.format(snippet=scenario),
                    "gesture_type": gesture_type,
                }
            )
        if schema == "mentee_message":
            event = self._field(body, "Event")
            stage = self._field(body, "Stage")
            details = self._field(body, "Details")
            if event == "stage_entered":
                text = self._pick(_MENTEE_STAGE_LINES[stage], "stage", stage)
            elif event == "ratings_submitted":
                text = (
                    f"Thank you for this round of feedback: {details} I noted which "
                    "moves earned stars and which I should rethink. Now, could you "
                    "demonstrate the gesture you would actually use here?"
                )
            elif event == "demonstration_attached":
                text = (
                    f"I watched your demonstration closely ({details}). Could you now "
                    "describe the gesture and explain why it fits?"
                )
            else:  # explanation_submitted
                text = (
                    "Thank you for explaining your reasoning so carefully. Give me a "
                    "moment to summarize the principles you taught me this round."
                )
            return json.dumps({"text": text})
        if schema == "round_summary":
            digest = self._field(body, "Ratings digest")
            explanation = self._field(body, "Explanation")
            summary = (
                f"This round you taught me: {explanation} From your ratings I took "
                f"away: {digest} I will apply these principles to similar scenarios."
            )
            return json.dumps({"summary": summary})
        return "OK."
