"""Scripted end-to-end demo: one full mentoring round over the public API.

Everything goes through the HTTP routes (in-process ASGI transport), proving
the API surface alone can drive a round. Output is deterministic for a given
stub seed and prints no ids or timestamps.
"""

from __future__ import annotations

import asyncio
import math
import sys
from typing import TextIO

import httpx

from ..session import (
    BODY13_JOINTS,
    Frame,
    Joint,
    SkeletalRecording,
    export_session,
    import_session,
    recording_to_document,
)
from .app import create_app
from .config import EngineConfig

_COMMENTS = (
    "Clear and easy to follow; the motion matches the words.",
    "A bit small for the back rows; make the movement larger.",
    "Good idea, but hold the gesture a moment longer.",
    "Feels natural; I would use this almost as-is.",
)

_EXPLANATION = (
    "I keep the movement slow and at chest height so every student can follow "
    "it while I speak, and I hold the final position for a beat so the image "
    "settles before moving on."
)


def synthetic_recording(
    frame_count: int = 60, fps: int = 30, seed: int = 0
) -> SkeletalRecording:
    """Deterministic body13 take: smooth sinusoidal joint paths in [0, 1]."""
    frames = []
    for i in range(frame_count):
        t = i / max(frame_count - 1, 1)
        joints = []
        for j, name in enumerate(BODY13_JOINTS):
            phase = seed * 0.1 + j * 0.5
            x = 0.5 + 0.25 * math.sin(2 * math.pi * t + phase)
            y = 0.1 + 0.8 * (j / (len(BODY13_JOINTS) - 1)) + 0.05 * math.cos(
                2 * math.pi * t + phase
            )
            joints.append(
                Joint(
                    name=name,
                    x=min(1.0, max(0.0, x)),
                    y=min(1.0, max(0.0, y)),
                    confidence=0.9,
                )
            )
        frames.append(Frame(t_ms=i * (1000 // fps), joints=tuple(joints)))
    return SkeletalRecording(fps_nominal=fps, frames=tuple(frames))


async def _drive(config: EngineConfig, out: TextIO) -> int:
    app = create_app(config)
    seed = config.stub_seed

    def show(line: str = "") -> None:
        print(line, file=out)

    transport = httpx.ASGITransport(app=app)
    async with httpx.AsyncClient(transport=transport, base_url="http://engine") as client:
        health = (await client.get("/healthz")).json()
        show(f"=== Mentoring demo: one full round ({health['mode']} mode, seed {seed}) ===")
        show(
            f"knowledge: {health['gesture_types']} gesture types, "
            f"{health['intentions']} intentions, {health['exemplars']} exemplars"
        )

        catalog = (await client.get("/scenarios")).json()["scenarios"]
        entry = catalog[0]
        created = await client.post("/sessions", json={"group_label": "demo"})
        session_id = created.json()["id"]

        show()
        show("[Posing Question]")
        show(f"scenario ({entry['id']}): {entry['scenario_text']}")
        answer = await client.post(
            f"/sessions/{session_id}/scenario", json={"catalog_id": entry["id"]}
        )
        answer.raise_for_status()
        posed = answer.json()
        for proposal in posed["proposals"]:
            show(
                f"proposal #{proposal['ordinal']} "
                f"[{proposal['gesture_type']} / {proposal['intention']}]"
            )
            show(f"  {proposal['description']}")
            show(f"  references: {', '.join(proposal['references'])}")
        show(f"mentee> {posed['mentee_message']['text']}")

        show()
        show("[Commentary]")
        ratings = []
        for proposal in posed["proposals"]:
            ordinal = proposal["ordinal"]
            stars = 3 + (ordinal + seed) % 3
            comment = _COMMENTS[ordinal % len(_COMMENTS)]
            ratings.append({"proposal_ordinal": ordinal, "stars": stars, "comment": comment})
            show(f"rating #{ordinal}: {stars}/5 - {comment}")
        rated = await client.post(f"/sessions/{session_id}/ratings", json={"ratings": ratings})
        rated.raise_for_status()
        show(f"mentee> {rated.json()['mentee_message']['text']}")

        show()
        show("[Demonstration]")
        recording = synthetic_recording(frame_count=60, fps=30, seed=seed)
        show(
            f"recording: {len(recording.frames)} frames at nominal "
            f"{recording.fps_nominal} fps (joint set {recording.joint_set})"
        )
        demonstrated = await client.post(
            f"/sessions/{session_id}/demonstration",
            json={"recording": recording_to_document(recording)},
        )
        demonstrated.raise_for_status()
        show(f"mentee> {demonstrated.json()['mentee_message']['text']}")

        show()
        show("[Explanation]")
        show(f"explanation: {_EXPLANATION}")
        explained = await client.post(
            f"/sessions/{session_id}/explanation", json={"text": _EXPLANATION}
        )
        explained.raise_for_status()
        final = explained.json()
        show(f"mentee> {final['mentee_message']['text']}")
        show(f"summary> {final['summary']}")

        show()
        show(f"[{final['stage']}]")
        document = (await client.get(f"/sessions/{session_id}")).json()
        round_trip = export_session(import_session(document))
        if round_trip != document:
            show("session export/import round-trip: MISMATCH")
            return 1
        show("round complete; session is back at the start of the cycle")
        show("session export/import round-trip: ok")
    return 0


def run_demo(config: EngineConfig, out: TextIO | None = None) -> int:
    """Drive scenario -> ratings -> demonstration -> explanation -> summary."""
    return asyncio.run(_drive(config, out if out is not None else sys.stdout))
