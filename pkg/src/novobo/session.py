"""The four-stage mentoring state machine and session persistence.

One session holds an ordered list of rounds; exactly the last round may be
incomplete, and the stage pointer is always derivable from the last round's
populated fields. Mutating operations are atomic: any failure leaves the
session unchanged.
"""

from __future__ import annotations

import json
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .agents.pipeline import (
    AgentRuntime,
    RoundDigest,
    SessionView,
    mentee_reply,
    run_generation_pipeline,
    summarize_principles,
)
from .agents.types import (
    GestureProposal,
    MenteeEvent,
    MenteeMessage,
    ProposalSet,
    TeachingScenario,
)
from .errors import (
    EmptyComment,
    EmptyExplanation,
    IncompleteRatings,
    InvalidRecording,
    InvalidStars,
    InvariantViolation,
    NoGestureNeeded,
    NotFound,
    ParseError,
    WrongStage,
)
from .stages import Stage

JOINT_SET_NAME = "body13"

# 13 named body joints; facial and hand-finger landmarks are never part of a
# recording (the neck can be rendered as the shoulder midpoint)
BODY13_JOINTS: tuple[str, ...] = (
    "head",
    "l_shoulder",
    "r_shoulder",
    "l_elbow",
    "r_elbow",
    "l_wrist",
    "r_wrist",
    "l_hip",
    "r_hip",
    "l_knee",
    "r_knee",
    "l_ankle",
    "r_ankle",
)

MIN_FRAMES = 2


@dataclass(frozen=True)
class Joint:
    name: str
    x: float
    y: float
    confidence: float


@dataclass(frozen=True)
class Frame:
    t_ms: int
    joints: tuple[Joint, ...]


@dataclass(frozen=True)
class SkeletalRecording:
    fps_nominal: int
    frames: tuple[Frame, ...]
    joint_set: str = JOINT_SET_NAME


def validate_recording(recording: SkeletalRecording) -> None:
    """Check every recording invariant; raises InvalidRecording naming the
    first violated one."""
    if recording.joint_set != JOINT_SET_NAME:
        raise InvalidRecording("BadJointSet", f"joint_set must be {JOINT_SET_NAME!r}")
    if not isinstance(recording.fps_nominal, int) or recording.fps_nominal <= 0:
        raise InvalidRecording("BadFrameRate", "fps_nominal must be a positive integer")
    if len(recording.frames) < MIN_FRAMES:
        raise InvalidRecording("TooFewFrames", f"need at least {MIN_FRAMES} frames")
    expected = set(BODY13_JOINTS)
    previous_t: int | None = None
    for i, frame in enumerate(recording.frames):
        if previous_t is not None and frame.t_ms <= previous_t:
            raise InvalidRecording(
                "NonMonotoneTimestamps", f"frame {i} at {frame.t_ms} ms after {previous_t} ms"
            )
        previous_t = frame.t_ms
        names = [joint.name for joint in frame.joints]
        for name in names:
            if name not in expected:
                raise InvalidRecording("UnknownJoint", f"frame {i} has joint {name!r}")
        if len(set(names)) != len(names):
            raise InvalidRecording("DuplicateJoint", f"frame {i} repeats a joint name")
        missing = expected - set(names)
        if missing:
            raise InvalidRecording("MissingJoint", f"frame {i} lacks {sorted(missing)[0]!r}")
        for joint in frame.joints:
            if not (0.0 <= joint.x <= 1.0 and 0.0 <= joint.y <= 1.0):
                raise InvalidRecording(
                    "CoordinateOutOfRange", f"frame {i} joint {joint.name} at ({joint.x}, {joint.y})"
                )
            if not (0.0 <= joint.confidence <= 1.0):
                raise InvalidRecording(
                    "ConfidenceOutOfRange", f"frame {i} joint {joint.name}: {joint.confidence}"
                )


@dataclass(frozen=True)
class Rating:
    proposal_ordinal: int
    stars: int
    comment: str


@dataclass
class Round:
    index: int
    scenario: TeachingScenario
    proposals: ProposalSet
    mentee_messages: list[MenteeMessage] = field(default_factory=list)
    ratings: list[Rating] = field(default_factory=list)
    recording: SkeletalRecording | None = None
    explanation: str | None = None
    summary: str | None = None

    @property
    def complete(self) -> bool:
        return self.summary is not None


@dataclass
class Session:
    id: str
    created_at: str
    stage: Stage
    rounds: list[Round] = field(default_factory=list)
    group_label: str | None = None


def create_session(group_label: str | None = None) -> Session:
    """Start a fresh session at PosingQuestion with no rounds."""
    return Session(
        id=uuid.uuid4().hex,
        created_at=datetime.now(timezone.utc).isoformat(),
        stage=Stage.POSING_QUESTION,
        group_label=group_label,
    )


def _require_stage(session: Session, expected: Stage) -> None:
    if session.stage is not expected:
        raise WrongStage(expected.value, session.stage.value)


_NO_GESTURE_TEXT = (
    'I thought about "{scenario}" carefully, and none of the intentions I found '
    "seems to need a gesture. Could we try another scenario?"
)


def submit_scenario(
    session: Session, scenario: TeachingScenario, runtime: AgentRuntime
) -> tuple[ProposalSet | None, MenteeMessage]:
    """Pose a scenario: run the generation pipeline and open a new round.

    When no finding requires a gesture the session is left unchanged at
    PosingQuestion and the mentee says so; otherwise the new round starts at
    Commentary with the proposals and the mentee's rating request.
    """
    _require_stage(session, Stage.POSING_QUESTION)
    try:
        proposals = run_generation_pipeline(
            runtime.llm, runtime.kb, runtime.index, runtime.embedder, scenario
        )
    except NoGestureNeeded:
        return None, MenteeMessage(
            text=_NO_GESTURE_TEXT.format(scenario=scenario.scenario_text),
            stage_hint=Stage.POSING_QUESTION,
        )
    message = mentee_reply(
        runtime.llm,
        runtime.kb,
        SessionView(
            stage=Stage.COMMENTARY,
            round_index=len(session.rounds),
            proposal_count=len(proposals),
            group_label=session.group_label,
        ),
        MenteeEvent.STAGE_ENTERED,
        payload=f"{len(proposals)} gesture proposals ready for rating",
    )
    round_ = Round(index=len(session.rounds), scenario=scenario, proposals=proposals)
    round_.mentee_messages.append(message)
    session.rounds.append(round_)
    session.stage = Stage.COMMENTARY
    return proposals, message


def _ratings_digest(ratings: list[Rating]) -> str:
    ordered = sorted(ratings, key=lambda r: r.proposal_ordinal)
    average = sum(r.stars for r in ordered) / len(ordered)
    parts = "; ".join(f"#{r.proposal_ordinal} {r.stars}/5: {r.comment}" for r in ordered)
    noun = "gesture" if len(ordered) == 1 else "gestures"
    return f"{len(ordered)} {noun} rated, average {average:.1f} stars. {parts}"


def submit_commentary(
    session: Session, ratings: list[Rating], runtime: AgentRuntime
) -> MenteeMessage:
    """Store the group's ratings and move to Demonstration.

    Every proposal ordinal must be rated exactly once, stars 1..5, comments
    non-empty.
    """
    _require_stage(session, Stage.COMMENTARY)
    round_ = session.rounds[-1]
    for rating in ratings:
        if not isinstance(rating.stars, int) or not 1 <= rating.stars <= 5:
            raise InvalidStars(f"stars must be 1..5, got {rating.stars!r}")
        if not rating.comment.strip():
            raise EmptyComment(f"rating for proposal {rating.proposal_ordinal} has no comment")
    expected = set(range(len(round_.proposals)))
    seen = [r.proposal_ordinal for r in ratings]
    if sorted(seen) != sorted(expected):
        missing = expected - set(seen)
        if missing:
            raise IncompleteRatings(f"proposal {min(missing)} is unrated")
        raise IncompleteRatings(f"ratings do not match proposal ordinals {sorted(expected)}")
    message = mentee_reply(
        runtime.llm,
        runtime.kb,
        SessionView(
            stage=Stage.COMMENTARY,
            round_index=round_.index,
            proposal_count=len(round_.proposals),
            group_label=session.group_label,
        ),
        MenteeEvent.RATINGS_SUBMITTED,
        payload=_ratings_digest(ratings),
    )
    round_.ratings = list(ratings)
    round_.mentee_messages.append(message)
    session.stage = Stage.DEMONSTRATION
    return message


def attach_demonstration(
    session: Session, recording: SkeletalRecording, runtime: AgentRuntime
) -> MenteeMessage:
    """Attach the final recorded take and move to Explanation."""
    _require_stage(session, Stage.DEMONSTRATION)
    validate_recording(recording)
    round_ = session.rounds[-1]
    duration_s = (recording.frames[-1].t_ms - recording.frames[0].t_ms) / 1000.0
    message = mentee_reply(
        runtime.llm,
        runtime.kb,
        SessionView(
            stage=Stage.DEMONSTRATION,
            round_index=round_.index,
            proposal_count=len(round_.proposals),
            group_label=session.group_label,
        ),
        MenteeEvent.DEMONSTRATION_ATTACHED,
        payload=(
            f"{len(recording.frames)} frames over {duration_s:.1f} s "
            f"at nominal {recording.fps_nominal} fps"
        ),
    )
    round_.recording = recording
    round_.mentee_messages.append(message)
    session.stage = Stage.EXPLANATION
    return message


def submit_explanation(
    session: Session, text: str, runtime: AgentRuntime
) -> tuple[str, MenteeMessage]:
    """Store the explanation, summarize the round, and loop back.

    Completes the round: the summary is generated and stored, and the stage
    returns to PosingQuestion for the next cycle.
    """
    _require_stage(session, Stage.EXPLANATION)
    if not text or not text.strip():
        raise EmptyExplanation("explanation text must be non-empty")
    round_ = session.rounds[-1]
    digest = RoundDigest(
        scenario_text=round_.scenario.scenario_text,
        ratings_digest=_ratings_digest(round_.ratings),
        has_recording=round_.recording is not None,
        explanation=text,
        prior_summaries=tuple(r.summary for r in session.rounds[:-1] if r.summary is not None),
    )
    summary = summarize_principles(runtime.llm, runtime.kb, digest)
    message = mentee_reply(
        runtime.llm,
        runtime.kb,
        SessionView(
            stage=Stage.EXPLANATION,
            round_index=round_.index,
            proposal_count=len(round_.proposals),
            group_label=session.group_label,
        ),
        MenteeEvent.EXPLANATION_SUBMITTED,
        payload=text,
    )
    round_.explanation = text
    round_.summary = summary
    round_.mentee_messages.append(message)
    session.stage = Stage.POSING_QUESTION
    return summary, message


# --- serialization ----------------------------------------------------------

def _scenario_to_doc(scenario: TeachingScenario) -> dict:
    return {
        "subject": scenario.subject,
        "grade_level": scenario.grade_level,
        "lesson_topic": scenario.lesson_topic,
        "scenario_text": scenario.scenario_text,
        "source": scenario.source,
    }


def _proposal_to_doc(proposal: GestureProposal) -> dict:
    return {
        "ordinal": proposal.ordinal,
        "description": proposal.description,
        "intention": proposal.intention,
        "gesture_type": proposal.gesture_type,
        "references": list(proposal.references),
        "few_shot_exemplar_id": proposal.few_shot_exemplar_id,
    }


def _message_to_doc(message: MenteeMessage) -> dict:
    return {"role": message.role, "text": message.text, "stage_hint": message.stage_hint.value}


def recording_to_document(recording: SkeletalRecording) -> dict:
    return {
        "joint_set": recording.joint_set,
        "fps_nominal": recording.fps_nominal,
        "frames": [
            {
                "t_ms": frame.t_ms,
                "joints": [
                    {"name": j.name, "x": j.x, "y": j.y, "confidence": j.confidence}
                    for j in frame.joints
                ],
            }
            for frame in recording.frames
        ],
    }


def export_session(session: Session) -> dict:
    """Serialize a session to its document form (plain JSON-able dict)."""
    rounds = []
    for round_ in session.rounds:
        rounds.append(
            {
                "index": round_.index,
                "scenario": _scenario_to_doc(round_.scenario),
                "proposals": [_proposal_to_doc(p) for p in round_.proposals],
                "mentee_messages": [_message_to_doc(m) for m in round_.mentee_messages],
                "ratings": [
                    {"proposal_ordinal": r.proposal_ordinal, "stars": r.stars, "comment": r.comment}
                    for r in round_.ratings
                ],
                "recording": (
                    recording_to_document(round_.recording) if round_.recording else None
                ),
                "explanation": round_.explanation,
                "summary": round_.summary,
            }
        )
    return {
        "id": session.id,
        "created_at": session.created_at,
        "group_label": session.group_label,
        "stage": session.stage.value,
        "rounds": rounds,
    }


def _doc_get(doc: dict, key: str, kind: type, where: str, optional: bool = False):
    if key not in doc:
        if optional:
            return None
        raise ParseError(f"{where} is missing field {key!r}")
    value = doc[key]
    if value is None and optional:
        return None
    if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        raise ParseError(f"{where}.{key} must be {kind.__name__}")
    return value


def recording_from_document(doc: dict) -> SkeletalRecording:
    """Parse a recording document strictly; unknown fields are rejected so a
    recording can never smuggle image or facial data."""
    if not isinstance(doc, dict):
        raise InvalidRecording("BadJointSet", "recording must be an object")
    unknown = set(doc) - {"joint_set", "fps_nominal", "frames"}
    if unknown:
        raise InvalidRecording("UnexpectedField", f"recording has field {sorted(unknown)[0]!r}")
    joint_set = doc.get("joint_set")
    fps = doc.get("fps_nominal")
    raw_frames = doc.get("frames")
    if not isinstance(raw_frames, list):
        raise InvalidRecording("TooFewFrames", "frames must be a list")
    frames = []
    for i, raw in enumerate(raw_frames):
        if not isinstance(raw, dict):
            raise InvalidRecording("UnexpectedField", f"frames[{i}] must be an object")
        unknown = set(raw) - {"t_ms", "joints"}
        if unknown:
            raise InvalidRecording(
                "UnexpectedField", f"frames[{i}] has field {sorted(unknown)[0]!r}"
            )
        t_ms = raw.get("t_ms")
        if not isinstance(t_ms, int) or isinstance(t_ms, bool):
            raise InvalidRecording("NonMonotoneTimestamps", f"frames[{i}].t_ms must be an integer")
        raw_joints = raw.get("joints")
        if not isinstance(raw_joints, list):
            raise InvalidRecording("MissingJoint", f"frames[{i}].joints must be a list")
        joints = []
        for j, raw_joint in enumerate(raw_joints):
            if not isinstance(raw_joint, dict):
                raise InvalidRecording("UnexpectedField", f"frames[{i}].joints[{j}] must be an object")
            unknown = set(raw_joint) - {"name", "x", "y", "confidence"}
            if unknown:
                raise InvalidRecording(
                    "UnexpectedField", f"frames[{i}].joints[{j}] has field {sorted(unknown)[0]!r}"
                )
            name = raw_joint.get("name")
            if not isinstance(name, str):
                raise InvalidRecording("UnknownJoint", f"frames[{i}].joints[{j}].name must be a string")
            coords = {}
            for axis in ("x", "y", "confidence"):
                value = raw_joint.get(axis)
                if not isinstance(value, (int, float)) or isinstance(value, bool):
                    raise InvalidRecording(
                        "CoordinateOutOfRange", f"frames[{i}].joints[{j}].{axis} must be a number"
                    )
                coords[axis] = float(value)
            joints.append(Joint(name=name, x=coords["x"], y=coords["y"], confidence=coords["confidence"]))
        frames.append(Frame(t_ms=t_ms, joints=tuple(joints)))
    recording = SkeletalRecording(
        fps_nominal=fps if isinstance(fps, int) and not isinstance(fps, bool) else -1,
        frames=tuple(frames),
        joint_set=joint_set if isinstance(joint_set, str) else "",
    )
    validate_recording(recording)
    return recording


def _derive_stage(rounds: list[Round]) -> Stage:
    if not rounds:
        return Stage.POSING_QUESTION
    last = rounds[-1]
    if last.summary is not None:
        return Stage.POSING_QUESTION
    if last.recording is not None:
        return Stage.EXPLANATION
    if last.ratings:
        return Stage.DEMONSTRATION
    return Stage.COMMENTARY


def _check_round_consistency(round_: Round, is_last: bool) -> None:
    where = f"round {round_.index}"
    if round_.recording is not None and not round_.ratings:
        raise InvariantViolation(f"{where} has a recording but no ratings")
    if round_.explanation is not None and round_.recording is None:
        raise InvariantViolation(f"{where} has an explanation but no recording")
    if (round_.summary is None) != (round_.explanation is None):
        raise InvariantViolation(f"{where} must have explanation and summary together")
    if round_.ratings:
        expected = set(range(len(round_.proposals)))
        if sorted(r.proposal_ordinal for r in round_.ratings) != sorted(expected):
            raise InvariantViolation(f"{where} ratings do not cover the proposals")
        for rating in round_.ratings:
            if not 1 <= rating.stars <= 5 or not rating.comment.strip():
                raise InvariantViolation(f"{where} carries an invalid rating")
    if not is_last and not round_.complete:
        raise InvariantViolation(f"{where} is incomplete but not the last round")


def import_session(doc: dict) -> Session:
    """Rebuild a session from its document form, re-checking every invariant."""
    if not isinstance(doc, dict):
        raise ParseError("session document must be an object")
    session_id = _doc_get(doc, "id", str, "session")
    created_at = _doc_get(doc, "created_at", str, "session")
    group_label = _doc_get(doc, "group_label", str, "session", optional=True)
    stage_value = _doc_get(doc, "stage", str, "session")
    try:
        stage = Stage.from_wire(stage_value)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    raw_rounds = _doc_get(doc, "rounds", list, "session")

    rounds: list[Round] = []
    for i, raw in enumerate(raw_rounds):
        where = f"rounds[{i}]"
        if not isinstance(raw, dict):
            raise ParseError(f"{where} must be an object")
        index = _doc_get(raw, "index", int, where)
        if index != i:
            raise InvariantViolation(f"{where} has index {index}, expected {i}")
        raw_scenario = _doc_get(raw, "scenario", dict, where)
        scenario = TeachingScenario(
            subject=_doc_get(raw_scenario, "subject", str, f"{where}.scenario"),
            grade_level=_doc_get(raw_scenario, "grade_level", str, f"{where}.scenario"),
            lesson_topic=_doc_get(raw_scenario, "lesson_topic", str, f"{where}.scenario"),
            scenario_text=_doc_get(raw_scenario, "scenario_text", str, f"{where}.scenario"),
            source=_doc_get(raw_scenario, "source", str, f"{where}.scenario"),
        )
        proposals = []
        for j, raw_proposal in enumerate(_doc_get(raw, "proposals", list, where)):
            pwhere = f"{where}.proposals[{j}]"
            if not isinstance(raw_proposal, dict):
                raise ParseError(f"{pwhere} must be an object")
            proposals.append(
                GestureProposal(
                    ordinal=_doc_get(raw_proposal, "ordinal", int, pwhere),
                    description=_doc_get(raw_proposal, "description", str, pwhere),
                    intention=_doc_get(raw_proposal, "intention", str, pwhere),
                    gesture_type=_doc_get(raw_proposal, "gesture_type", str, pwhere),
                    references=tuple(_doc_get(raw_proposal, "references", list, pwhere)),
                    few_shot_exemplar_id=_doc_get(
                        raw_proposal, "few_shot_exemplar_id", int, pwhere, optional=True
                    ),
                )
            )
        try:
            proposal_set = ProposalSet(proposals=tuple(proposals))
        except ValueError as exc:
            raise InvariantViolation(f"{where}: {exc}") from exc
        messages = []
        for j, raw_message in enumerate(raw.get("mentee_messages") or []):
            mwhere = f"{where}.mentee_messages[{j}]"
            if not isinstance(raw_message, dict):
                raise ParseError(f"{mwhere} must be an object")
            try:
                hint = Stage.from_wire(_doc_get(raw_message, "stage_hint", str, mwhere))
            except ValueError as exc:
                raise ParseError(str(exc)) from exc
            messages.append(
                MenteeMessage(text=_doc_get(raw_message, "text", str, mwhere), stage_hint=hint)
            )
        ratings = []
        for j, raw_rating in enumerate(raw.get("ratings") or []):
            rwhere = f"{where}.ratings[{j}]"
            if not isinstance(raw_rating, dict):
                raise ParseError(f"{rwhere} must be an object")
            ratings.append(
                Rating(
                    proposal_ordinal=_doc_get(raw_rating, "proposal_ordinal", int, rwhere),
                    stars=_doc_get(raw_rating, "stars", int, rwhere),
                    comment=_doc_get(raw_rating, "comment", str, rwhere),
                )
            )
        raw_recording = raw.get("recording")
        recording = None
        if raw_recording is not None:
            try:
                recording = recording_from_document(raw_recording)
            except InvalidRecording as exc:
                raise InvariantViolation(f"{where}: {exc}") from exc
        round_ = Round(
            index=index,
            scenario=scenario,
            proposals=proposal_set,
            mentee_messages=messages,
            ratings=ratings,
            recording=recording,
            explanation=_doc_get(raw, "explanation", str, where, optional=True),
            summary=_doc_get(raw, "summary", str, where, optional=True),
        )
        _check_round_consistency(round_, is_last=(i == len(raw_rounds) - 1))
        rounds.append(round_)

    derived = _derive_stage(rounds)
    if derived is not stage:
        raise InvariantViolation(
            f"stage {stage.value} is inconsistent with round contents "
            f"(expected {derived.value})"
        )
    return Session(
        id=session_id,
        created_at=created_at,
        stage=stage,
        rounds=rounds,
        group_label=group_label,
    )


# --- persistence ------------------------------------------------------------

class SessionStore:
    """Per-session snapshot plus append-only event log under a data directory."""

    def __init__(self, data_dir: str | Path) -> None:
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)

    def _snapshot_path(self, session_id: str) -> Path:
        return self.data_dir / f"{session_id}.json"

    def _events_path(self, session_id: str) -> Path:
        return self.data_dir / f"{session_id}.events.jsonl"

    def save(self, session: Session) -> None:
        document = export_session(session)
        path = self._snapshot_path(session.id)
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(document, indent=2), encoding="utf-8")
        tmp.replace(path)

    def append_event(self, session_id: str, name: str, payload: dict | None = None) -> None:
        record = {
            "at": datetime.now(timezone.utc).isoformat(),
            "event": name,
            "payload": payload or {},
        }
        with self._events_path(session_id).open("a", encoding="utf-8") as handle:
            handle.write(json.dumps(record) + "\n")

    def load(self, session_id: str) -> Session:
        path = self._snapshot_path(session_id)
        if not path.exists():
            raise NotFound(f"no stored session {session_id!r}")
        try:
            document = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ParseError(f"stored session {session_id!r} is corrupt: {exc}") from exc
        return import_session(document)

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in self.data_dir.glob("*.json"))
