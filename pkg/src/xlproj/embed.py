"""Sentence and token embedding backends behind one provider contract.

Two backends: ``http`` talks to a real encoder service over the wire
protocol below; ``mock`` is a fully deterministic character-trigram feature
hash used for offline tests and end-to-end runs without a model.

Wire protocol (both directions UTF-8 JSON):

    POST /v1/embed/sentences  {"sentences": [str, ...]}
        -> 200 {"dim": int, "vectors": [[float, ...], ...]}
    POST /v1/embed/tokens     {"sentences": [{"tokens": [str, ...]}, ...]}
        -> 200 {"dim": int, "vectors": [[[float, ...], ...], ...]}
    Errors: 400 malformed, 413 batch too large, 503 model loading.
"""

from __future__ import annotations

import functools
import unicodedata
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import requests

from .errors import BackendUnavailable, BatchTooLarge, DimensionMismatch, ProtocolError

Vector = np.ndarray

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


@dataclass(frozen=True)
class EmbedConfig:
    backend: str = "mock"  # mock | http
    endpoint: str = ""
    batch_size: int = 32
    max_concurrent_batches: int = 2
    mock_dim: int = 256


def fnv1a_64(data: bytes) -> int:
    """64-bit FNV-1a hash."""
    h = _FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) & _MASK64
    return h


def _fold(text: str) -> str:
    """Lowercase and strip diacritics so crosslingual cognates collide."""
    decomposed = unicodedata.normalize("NFD", text.lower())
    return "".join(ch for ch in decomposed if unicodedata.category(ch) != "Mn")


def trigrams(text: str) -> list[str]:
    """Character trigrams of the folded string with boundary markers."""
    padded = "^" + _fold(text) + "$"
    if len(padded) < 3:
        return [padded]
    return [padded[i : i + 3] for i in range(len(padded) - 2)]


@functools.lru_cache(maxsize=65536)
def _mock_vector(text: str, dim: int) -> Vector:
    # Signed feature hash: FNV-1a over trigram bytes; sign from the low bit,
    # bucket from the remaining bits mod dim; then L2 normalization.
    vec = np.zeros(dim, dtype=np.float64)
    for gram in trigrams(text):
        h = fnv1a_64(gram.encode("utf-8"))
        sign = 1.0 if (h & 1) == 0 else -1.0
        vec[(h >> 1) % dim] += sign
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        vec[0] = 1.0
        norm = 1.0
    out = vec / norm
    out.setflags(write=False)
    return out


class MockBackend:
    """Deterministic context-free trigram-hash embeddings (tests, dry runs)."""

    def __init__(self, dim: int = 256):
        if dim <= 0:
            raise ValueError("dim must be positive")
        self.dim = dim

    def embed_sentences(self, texts: list[str]) -> list[Vector]:
        return [_mock_vector(t, self.dim) for t in texts]

    def embed_tokens(self, sentences: list[list[str]]) -> list[list[Vector]]:
        return [[_mock_vector(t, self.dim) for t in sent] for sent in sentences]


class HttpBackend:
    """Client for an embedding service speaking the module wire protocol."""

    def __init__(self, endpoint: str, batch_size: int = 32, max_concurrent_batches: int = 2):
        if batch_size <= 0 or max_concurrent_batches < 1:
            raise ValueError("batch_size and max_concurrent_batches must be positive")
        self.endpoint = endpoint.rstrip("/")
        self.batch_size = batch_size
        self.max_concurrent_batches = max_concurrent_batches
        self.dim: int | None = None

    def _post(self, path: str, payload: dict) -> dict:
        try:
            resp = requests.post(self.endpoint + path, json=payload, timeout=120)
        except requests.RequestException as exc:
            raise BackendUnavailable(f"{self.endpoint}{path}: {exc}") from exc
        if resp.status_code == 503:
            raise BackendUnavailable(f"{path}: model loading (503)")
        if resp.status_code == 413:
            raise BatchTooLarge(f"{path}: batch of size {self.batch_size} rejected (413)")
        if resp.status_code != 200:
            raise ProtocolError(f"{path}: HTTP {resp.status_code}: {resp.text[:200]}")
        try:
            body = resp.json()
        except ValueError as exc:
            raise ProtocolError(f"{path}: non-JSON response") from exc
        if "dim" not in body or "vectors" not in body:
            raise ProtocolError(f"{path}: missing dim/vectors in response")
        if self.dim is None:
            self.dim = int(body["dim"])
        elif self.dim != int(body["dim"]):
            raise DimensionMismatch(f"backend dim changed: {self.dim} -> {body['dim']}")
        return body

    def _run_batches(self, fn, batches: list) -> list:
        if len(batches) <= 1:
            return [fn(b) for b in batches]
        with ThreadPoolExecutor(max_workers=self.max_concurrent_batches) as pool:
            return list(pool.map(fn, batches))

    def embed_sentences(self, texts: list[str]) -> list[Vector]:
        if not texts:
            return []
        batches = [texts[i : i + self.batch_size] for i in range(0, len(texts), self.batch_size)]

        def one(batch: list[str]) -> list[Vector]:
            body = self._post("/v1/embed/sentences", {"sentences": batch})
            vectors = body["vectors"]
            if len(vectors) != len(batch):
                raise ProtocolError("sentence count mismatch in response")
            return [np.asarray(v, dtype=np.float64) for v in vectors]

        out: list[Vector] = []
        for part in self._run_batches(one, batches):
            out.extend(part)
        return out

    def embed_tokens(self, sentences: list[list[str]]) -> list[list[Vector]]:
        if not sentences:
            return []
        batches = [
            sentences[i : i + self.batch_size]
            for i in range(0, len(sentences), self.batch_size)
        ]

        def one(batch: list[list[str]]) -> list[list[Vector]]:
            body = self._post(
                "/v1/embed/tokens", {"sentences": [{"tokens": toks} for toks in batch]}
            )
            vectors = body["vectors"]
            if len(vectors) != len(batch):
                raise ProtocolError("sentence count mismatch in response")
            result = []
            for toks, vecs in zip(batch, vectors):
                if len(vecs) != len(toks):
                    raise ProtocolError("token count mismatch in response")
                result.append([np.asarray(v, dtype=np.float64) for v in vecs])
            return result

        out: list[list[Vector]] = []
        for part in self._run_batches(one, batches):
            out.extend(part)
        return out


def make_backend(cfg: EmbedConfig):
    if cfg.backend == "mock":
        return MockBackend(cfg.mock_dim)
    if cfg.backend == "http":
        if not cfg.endpoint:
            raise ValueError("http backend requires an endpoint")
        return HttpBackend(cfg.endpoint, cfg.batch_size, cfg.max_concurrent_batches)
    raise ValueError(f"unknown backend {cfg.backend!r}")


def cosine(a: Vector, b: Vector) -> float:
    """Cosine similarity; raises DimensionMismatch on incompatible shapes."""
    if a.shape != b.shape:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return min(1.0, max(-1.0, float(np.dot(a, b) / (na * nb))))
