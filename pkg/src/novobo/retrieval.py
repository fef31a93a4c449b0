"""Text embedding, the exemplar index, and exact nearest-exemplar retrieval.

The index is a plain linear scan: the corpus is tiny (tens of entries), and
exactness lets retrieval be checked against a brute-force oracle. Exactly one
hit (the most similar exemplar) is used as the few-shot example downstream.
"""

from __future__ import annotations

import hashlib
import math
import os
import random
import threading
from dataclasses import dataclass
from typing import Protocol

import httpx

from .errors import DimensionMismatch, EmptyText, ProviderError, ZeroVector
from .knowledge import KnowledgeBase


@dataclass(frozen=True)
class EmbeddingVector:
    values: tuple[float, ...]

    @property
    def dim(self) -> int:
        return len(self.values)

    def __post_init__(self) -> None:
        if not all(math.isfinite(v) for v in self.values):
            raise ValueError("embedding values must be finite")


@dataclass(frozen=True)
class RetrievalHit:
    exemplar_id: int
    score: float


@dataclass(frozen=True)
class ExemplarIndex:
    entries: tuple[tuple[int, EmbeddingVector], ...]
    dim: int

    def __post_init__(self) -> None:
        ids = [exemplar_id for exemplar_id, _ in self.entries]
        if len(ids) != len(set(ids)):
            raise ValueError("exemplar ids in index must be unique")
        for _, vector in self.entries:
            if vector.dim != self.dim:
                raise DimensionMismatch(
                    f"index entry has dim {vector.dim}, index dim is {self.dim}"
                )


class Embedder(Protocol):
    """Embedding provider handle: a fixed output dim and one call."""

    @property
    def dim(self) -> int: ...

    def embed(self, text: str) -> EmbeddingVector: ...


class StubEmbedder:
    """Deterministic offline embedder: seeded hash of the text mapped to a
    unit vector of the configured dim. Pure function of (text, seed, dim)."""

    def __init__(self, dim: int = 64, seed: int = 0) -> None:
        if dim <= 0:
            raise ValueError("dim must be positive")
        self._dim = dim
        self._seed = seed

    @property
    def dim(self) -> int:
        return self._dim

    def embed(self, text: str) -> EmbeddingVector:
        digest = hashlib.sha256(f"{self._seed}:{text}".encode("utf-8")).digest()
        rng = random.Random(int.from_bytes(digest, "big"))
        values = [rng.uniform(-1.0, 1.0) for _ in range(self._dim)]
        norm = math.sqrt(sum(v * v for v in values))
        if norm < 1e-12:  # essentially unreachable for dim >= 1, kept as a guard
            values[0] = 1.0
            norm = 1.0
        return EmbeddingVector(values=tuple(v / norm for v in values))


class HttpEmbedder:
    """Live embedding client for an HTTP provider.

    Sends {model, input} and accepts either a bare {"embedding": [...]} body
    or the common {"data": [{"embedding": [...]}]} envelope. The API key is
    read from the environment, never from configuration files.
    """

    def __init__(
        self,
        endpoint: str,
        model: str,
        *,
        api_key_env: str = "NOVOBO_API_KEY",
        timeout_ms: int = 30_000,
        max_inflight: int = 4,
    ) -> None:
        self._endpoint = endpoint
        self._model = model
        self._api_key = os.environ.get(api_key_env, "")
        self._client = httpx.Client(timeout=timeout_ms / 1000.0)
        self._gate = threading.Semaphore(max_inflight)
        self._dim: int | None = None

    @property
    def dim(self) -> int:
        if self._dim is None:
            raise ProviderError("embedding dim unknown before the first call", retryable=False)
        return self._dim

    def embed(self, text: str) -> EmbeddingVector:
        headers = {"Authorization": f"Bearer {self._api_key}"}
        payload = {"model": self._model, "input": text}
        with self._gate:
            try:
                response = self._client.post(self._endpoint, json=payload, headers=headers)
            except httpx.TimeoutException as exc:
                raise ProviderError(f"embedding request timed out: {exc}", retryable=True) from exc
            except httpx.HTTPError as exc:
                raise ProviderError(f"embedding request failed: {exc}", retryable=True) from exc
        if response.status_code >= 500:
            raise ProviderError(f"embedding provider error {response.status_code}", retryable=True)
        if response.status_code >= 400:
            raise ProviderError(f"embedding request rejected {response.status_code}", retryable=False)
        body = response.json()
        if isinstance(body, dict) and "embedding" in body:
            raw = body["embedding"]
        else:
            try:
                raw = body["data"][0]["embedding"]
            except (KeyError, IndexError, TypeError) as exc:
                raise ProviderError("embedding response has no vector", retryable=False) from exc
        vector = EmbeddingVector(values=tuple(float(v) for v in raw))
        if self._dim is None:
            self._dim = vector.dim
        elif vector.dim != self._dim:
            raise ProviderError(
                f"embedding dim changed from {self._dim} to {vector.dim}", retryable=False
            )
        return vector


def embed_text(embedder: Embedder, text: str) -> EmbeddingVector:
    """Embed one text; rejects inputs that are empty after trimming."""
    if not text or not text.strip():
        raise EmptyText("cannot embed empty text")
    return embedder.embed(text)


def cosine_similarity(a: EmbeddingVector, b: EmbeddingVector) -> float:
    """dot(a,b) / (|a|*|b|), clamped to [-1, 1] against rounding."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"dims differ: {a.dim} vs {b.dim}")
    dot = sum(x * y for x, y in zip(a.values, b.values))
    norm_a = math.sqrt(sum(x * x for x in a.values))
    norm_b = math.sqrt(sum(y * y for y in b.values))
    if norm_a == 0.0 or norm_b == 0.0:
        raise ZeroVector("cosine similarity undefined for zero-norm vectors")
    return max(-1.0, min(1.0, dot / (norm_a * norm_b)))


def build_index(kb: KnowledgeBase, embedder: Embedder) -> ExemplarIndex:
    """Embed every exemplar's scenario text; all-or-nothing on provider errors."""
    entries = tuple(
        (exemplar.id, embed_text(embedder, exemplar.scenario_text)) for exemplar in kb.exemplars
    )
    return ExemplarIndex(entries=entries, dim=embedder.dim)


def retrieve_most_similar(index: ExemplarIndex, query: EmbeddingVector) -> RetrievalHit | None:
    """Exact argmax by cosine score; ties broken by lowest exemplar id.

    Returns None for an empty index.
    """
    if not index.entries:
        return None
    if query.dim != index.dim:
        raise DimensionMismatch(f"query dim {query.dim} vs index dim {index.dim}")
    best: RetrievalHit | None = None
    for exemplar_id, vector in index.entries:
        score = cosine_similarity(query, vector)
        if (
            best is None
            or score > best.score
            or (score == best.score and exemplar_id < best.exemplar_id)
        ):
            best = RetrievalHit(exemplar_id=exemplar_id, score=score)
    return best
