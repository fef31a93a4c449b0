"""Shared fixtures: the canonical knowledge base, stub providers, and helpers."""

from __future__ import annotations

import copy
from pathlib import Path

import pytest
import yaml

from novobo.agents.pipeline import AgentRuntime
from novobo.agents.providers import StubLlmClient
from novobo.knowledge import KnowledgeBase, load_knowledge_base
from novobo.retrieval import StubEmbedder, build_index
from novobo.service.config import packaged_fixture
from novobo.service.demo import synthetic_recording

CANONICAL_KB_PATH = packaged_fixture("kb.yaml")
CANONICAL_CATALOG_PATH = packaged_fixture("scenarios.yaml")


@pytest.fixture(scope="session")
def kb() -> KnowledgeBase:
    return load_knowledge_base(CANONICAL_KB_PATH)


@pytest.fixture(scope="session")
def kb_doc() -> dict:
    return yaml.safe_load(Path(CANONICAL_KB_PATH).read_text(encoding="utf-8"))


@pytest.fixture
def kb_doc_copy(kb_doc: dict) -> dict:
    return copy.deepcopy(kb_doc)


def write_doc(directory: Path, doc: dict, name: str = "kb.yaml") -> Path:
    path = directory / name
    path.write_text(yaml.safe_dump(doc, sort_keys=False, allow_unicode=True), encoding="utf-8")
    return path


@pytest.fixture
def embedder() -> StubEmbedder:
    return StubEmbedder(dim=64, seed=0)


@pytest.fixture
def index(kb, embedder):
    return build_index(kb, embedder)


@pytest.fixture
def stub_llm() -> StubLlmClient:
    return StubLlmClient(seed=0)


@pytest.fixture
def runtime(kb, stub_llm, embedder, index) -> AgentRuntime:
    return AgentRuntime(kb=kb, llm=stub_llm, embedder=embedder, index=index)


@pytest.fixture
def valid_recording():
    return synthetic_recording(frame_count=60, fps=30, seed=0)
