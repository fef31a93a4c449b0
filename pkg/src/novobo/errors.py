"""Engine-wide error taxonomy.

Every error exposes a stable machine-readable ``code`` (its class name) so
API bodies and CLI output can carry it unchanged.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all engine errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


# --- knowledge base ---------------------------------------------------------

class ParseError(EngineError):
    """Document could not be parsed or violates the document schema."""


class MissingTaxonomyEntry(EngineError):
    """A required gesture type or instructional intention is absent."""


class DanglingReference(EngineError):
    """A citation key or taxonomy key does not resolve."""


class NotFound(EngineError):
    """Lookup key is not in the requested taxonomy."""


# --- retrieval / providers --------------------------------------------------

class EmptyText(EngineError):
    """Text input is empty after whitespace trim."""


class DimensionMismatch(EngineError):
    """Vectors of different dimensionality were combined."""


class ZeroVector(EngineError):
    """Cosine similarity is undefined for a zero-norm vector."""


class ProviderError(EngineError):
    """A remote provider call failed (network, auth, timeout, bad payload)."""

    def __init__(self, message: str, *, retryable: bool = False) -> None:
        super().__init__(message)
        self.retryable = retryable


# --- agents -----------------------------------------------------------------

class InvalidScenario(EngineError):
    """Teaching scenario fails validation (empty text, bad source, ...)."""


class MalformedOutput(EngineError):
    """Model output failed structured validation after retries.

    ``violation`` holds the first schema violation, reused verbatim in the
    retry prompt.
    """

    def __init__(self, violation: str) -> None:
        super().__init__(violation)
        self.violation = violation


class NoGestureNeeded(EngineError):
    """All intention findings were flagged as not needing a gesture.

    A flow signal, not a fault: callers surface it as a mentee message.
    """


# --- session ----------------------------------------------------------------

class WrongStage(EngineError):
    """Operation invoked outside its designated stage."""

    def __init__(self, expected: str, actual: str) -> None:
        super().__init__(f"operation requires stage {expected}, session is at {actual}")
        self.expected = expected
        self.actual = actual


class IncompleteRatings(EngineError):
    """Ratings do not cover every proposal ordinal exactly once."""


class InvalidStars(EngineError):
    """Star value outside the 1..5 scale."""


class EmptyComment(EngineError):
    """Rating comment is empty."""


class InvalidRecording(EngineError):
    """Recording violates a structural invariant.

    ``violation`` names the first violated invariant, e.g.
    NonMonotoneTimestamps, UnknownJoint, MissingJoint, CoordinateOutOfRange,
    ConfidenceOutOfRange, TooFewFrames, BadJointSet, BadFrameRate.
    """

    def __init__(self, violation: str, detail: str = "") -> None:
        super().__init__(f"{violation}: {detail}" if detail else violation)
        self.violation = violation


class EmptyExplanation(EngineError):
    """Explanation text is empty."""


class InvariantViolation(EngineError):
    """Imported session document is internally inconsistent."""


# --- service ----------------------------------------------------------------

class MissingCredential(EngineError):
    """Live mode requires the API key environment variable."""


class AddressInUse(EngineError):
    """The configured listen port is already bound."""
