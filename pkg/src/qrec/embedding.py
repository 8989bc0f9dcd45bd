"""Deterministic text embeddings and cosine similarity.

The default provider is a dependency-free hashed character-trigram embedder:
tokens are character-trigrammed, each trigram is FNV-1a-hashed into one of
256 signed buckets, and the bucket vector is L2-normalized.  It is bit-exact
reproducible, which the test oracles rely on.  An external JSON-over-HTTP
service can be plugged in for higher-quality vectors; the rest of the system
only ever sees unit-norm vectors and cached pairwise similarities.
"""

from __future__ import annotations

import math
import re
import threading
import time
from dataclasses import dataclass, field

from .errors import DimensionMismatch, EmbeddingServiceError, EmptyText

DEFAULT_DIMENSION = 256

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1

_NON_ALNUM = re.compile(r"[^0-9A-Za-z]+")
_CAMEL = re.compile(r"(?<=[a-z0-9])(?=[A-Z])|(?<=[A-Z])(?=[A-Z][a-z])")


@dataclass(frozen=True)
class EmbedderConfig:
    provider: str = "lexical_default"
    dimension: int = DEFAULT_DIMENSION
    service_endpoint: str | None = None
    timeout: float = 5.0
    retries: int = 2

    def __post_init__(self):
        if self.provider not in ("lexical_default", "external_service"):
            raise ValueError(f"unknown embedding provider {self.provider!r}")
        if self.dimension <= 0:
            raise ValueError("dimension must be positive")
        if self.provider == "external_service" and not self.service_endpoint:
            raise ValueError("external_service provider requires service_endpoint")

    @classmethod
    def from_dict(cls, data: dict) -> "EmbedderConfig":
        return cls(**{k: v for k, v in data.items() if k in cls.__dataclass_fields__})


@dataclass(frozen=True)
class EmbeddingVector:
    values: tuple[float, ...]

    @property
    def dimension(self) -> int:
        return len(self.values)

    def dot(self, other: "EmbeddingVector") -> float:
        return sum(a * b for a, b in zip(self.values, other.values))

    def norm(self) -> float:
        return math.sqrt(sum(v * v for v in self.values))


def tokenize(text: str) -> list[str]:
    """Split on non-alphanumerics and camelCase boundaries, then lowercase."""
    tokens = []
    for chunk in _NON_ALNUM.split(text):
        if not chunk:
            continue
        for part in _CAMEL.split(chunk):
            if part:
                tokens.append(part.lower())
    return tokens


def _fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & _MASK64
    return h


def lexical_embed(text: str, dimension: int = DEFAULT_DIMENSION) -> EmbeddingVector:
    """Hashed-trigram embedding of non-empty text."""
    tokens = tokenize(text)
    if not tokens:
        raise EmptyText(f"cannot embed {text!r}")
    buckets = [0.0] * dimension
    for token in tokens:
        padded = f"^{token}$"
        for i in range(len(padded) - 2):
            h = _fnv1a64(padded[i : i + 3].encode("utf-8"))
            sign = 1.0 if (h >> 63) & 1 == 0 else -1.0
            buckets[h % dimension] += sign
    norm = math.sqrt(sum(v * v for v in buckets))
    if norm == 0.0:
        raise EmptyText(f"text {text!r} hashed to a zero vector")
    return EmbeddingVector(tuple(v / norm for v in buckets))


def cosine(a: EmbeddingVector, b: EmbeddingVector) -> float:
    """Dot product of two unit vectors; range [-1, 1]."""
    if a.dimension != b.dimension:
        raise DimensionMismatch(f"dimensions differ: {a.dimension} vs {b.dimension}")
    return a.dot(b)


class Embedder:
    """Embedding provider facade with a thread-safe similarity cache."""

    def __init__(self, config: EmbedderConfig | None = None):
        self.config = config or EmbedderConfig()
        self._sim_cache: dict[tuple[str, str], float] = {}
        self._vec_cache: dict[str, EmbeddingVector] = {}
        self._lock = threading.Lock()

    def embed(self, text: str) -> EmbeddingVector:
        if not text or not text.strip():
            raise EmptyText("cannot embed empty text")
        with self._lock:
            hit = self._vec_cache.get(text)
        if hit is not None:
            return hit
        if self.config.provider == "external_service":
            vector = self._embed_external([text])[0]
        else:
            vector = lexical_embed(text, self.config.dimension)
        with self._lock:
            self._vec_cache[text] = vector
        return vector

    def similarity(self, a: str, b: str) -> float:
        """Cosine similarity of two texts, memoized on the unordered pair."""
        if not a or not a.strip() or not b or not b.strip():
            raise EmptyText("cannot compare empty text")
        key = (a, b) if a <= b else (b, a)
        with self._lock:
            hit = self._sim_cache.get(key)
        if hit is not None:
            return hit
        value = cosine(self.embed(a), self.embed(b))
        with self._lock:
            self._sim_cache[key] = value
        return value

    def _embed_external(self, texts: list[str]) -> list[EmbeddingVector]:
        import requests

        last_error: Exception | None = None
        for attempt in range(self.config.retries + 1):
            try:
                response = requests.post(
                    self.config.service_endpoint,
                    json={"texts": texts},
                    timeout=self.config.timeout,
                )
                response.raise_for_status()
                payload = response.json()
                vectors = payload["vectors"]
                if len(vectors) != len(texts):
                    raise EmbeddingServiceError("service returned a wrong number of vectors")
                out = []
                for raw in vectors:
                    norm = math.sqrt(sum(float(v) ** 2 for v in raw))
                    if norm == 0.0:
                        raise EmbeddingServiceError("service returned a zero vector")
                    out.append(EmbeddingVector(tuple(float(v) / norm for v in raw)))
                return out
            except EmbeddingServiceError:
                raise
            except Exception as exc:  # network failures, bad payloads
                last_error = exc
                if attempt < self.config.retries:
                    time.sleep(0.1 * (attempt + 1))
        raise EmbeddingServiceError(f"embedding service failed: {last_error}")


_default_embedder = Embedder()


def default_embedder() -> Embedder:
    return _default_embedder


def embed(text: str) -> EmbeddingVector:
    return _default_embedder.embed(text)


def text_similarity(a: str, b: str, embedder: Embedder | None = None) -> float:
    return (embedder or _default_embedder).similarity(a, b)
