"""The four-stage mentoring cycle shared by sessions, agents, and the API."""

from __future__ import annotations

from enum import Enum


class Stage(Enum):
    POSING_QUESTION = "PosingQuestion"
    COMMENTARY = "Commentary"
    DEMONSTRATION = "Demonstration"
    EXPLANATION = "Explanation"

    @classmethod
    def from_wire(cls, value: str) -> "Stage":
        for stage in cls:
            if stage.value == value:
                return stage
        raise ValueError(f"unknown stage {value!r}")


# PosingQuestion -> Commentary -> Demonstration -> Explanation -> PosingQuestion
STAGE_CYCLE: tuple[Stage, ...] = (
    Stage.POSING_QUESTION,
    Stage.COMMENTARY,
    Stage.DEMONSTRATION,
    Stage.EXPLANATION,
)


def next_stage(stage: Stage) -> Stage:
    idx = STAGE_CYCLE.index(stage)
    return STAGE_CYCLE[(idx + 1) % len(STAGE_CYCLE)]
