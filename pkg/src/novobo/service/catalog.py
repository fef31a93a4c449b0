"""The teaching-scenario catalog served to clients."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import yaml

from ..agents.types import TeachingScenario
from ..errors import NotFound, ParseError


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    scenario: TeachingScenario


@dataclass(frozen=True)
class ScenarioCatalog:
    entries: tuple[CatalogEntry, ...]

    def get(self, entry_id: str) -> TeachingScenario:
        for entry in self.entries:
            if entry.id == entry_id:
                return entry.scenario
        raise NotFound(f"no catalog scenario {entry_id!r}")

    def __len__(self) -> int:
        return len(self.entries)


def load_catalog(path: str | Path) -> ScenarioCatalog:
    """Load the catalog document; ids must be unique and entries valid."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read catalog {path}: {exc}") from exc
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ParseError(f"catalog {path} is not valid YAML/JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("scenarios"), list):
        raise ParseError("catalog document must carry a 'scenarios' list")
    entries: list[CatalogEntry] = []
    seen: set[str] = set()
    for i, raw in enumerate(doc["scenarios"]):
        if not isinstance(raw, dict):
            raise ParseError(f"scenarios[{i}] must be a mapping")
        entry_id = raw.get("id")
        if not isinstance(entry_id, str) or not entry_id.strip():
            raise ParseError(f"scenarios[{i}].id must be a non-empty string")
        if entry_id in seen:
            raise ParseError(f"duplicate catalog id {entry_id!r}")
        seen.add(entry_id)
        entries.append(
            CatalogEntry(
                id=entry_id,
                scenario=TeachingScenario(
                    subject=str(raw.get("subject", "")),
                    grade_level=str(raw.get("grade_level", "")),
                    lesson_topic=str(raw.get("lesson_topic", "")),
                    scenario_text=str(raw.get("scenario_text", "")),
                    source="catalog",
                ),
            )
        )
    return ScenarioCatalog(entries=tuple(entries))
