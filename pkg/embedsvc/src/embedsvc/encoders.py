"""Sentence and token encoders behind one small interface.

Two families are provided: pretrained transformer encoders (LaBSE-style
sentence models via sentence-transformers, BERT-style token models with
subword mean-pooling via transformers) and a dependency-light deterministic
hash encoder. The hash encoder keeps the service runnable and testable on
machines without model weights; select it with the model id ``"hash"``.

All encoders return unit-normalized float vectors and are deterministic:
identical input yields an identical response.
"""

from __future__ import annotations

import threading
import unicodedata

import numpy as np

from .config import HASH_MODEL


class ModelUnavailable(Exception):
    """The requested model cannot be loaded (missing weights, no network)."""


class SentenceEncoder:
    dim: int

    def encode_sentences(self, sentences: list[str]) -> np.ndarray:
        raise NotImplementedError


class TokenEncoder:
    dim: int

    def encode_tokens(self, sentences: list[list[str]]) -> list[np.ndarray]:
        raise NotImplementedError


# --------------------------------------------------------------------------
# Hash fallback: signed feature hashing of character trigrams.


_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1


def _fnv1a_64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) & _MASK64
    return h


def _fold(text: str) -> str:
    decomposed = unicodedata.normalize("NFD", text.lower())
    return "".join(c for c in decomposed if unicodedata.category(c) != "Mn")


def _hash_vector(text: str, dim: int) -> np.ndarray:
    marked = f"^{_fold(text)}$"
    vec = np.zeros(dim, dtype=np.float64)
    for k in range(len(marked) - 2):
        h = _fnv1a_64(marked[k : k + 3].encode("utf-8"))
        sign = 1.0 if h & 1 else -1.0
        vec[(h >> 1) % dim] += sign
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        vec[0] = 1.0
        return vec
    return vec / norm


class HashSentenceEncoder(SentenceEncoder):
    def __init__(self, dim: int = 256):
        self.dim = dim

    def encode_sentences(self, sentences: list[str]) -> np.ndarray:
        if not sentences:
            return np.zeros((0, self.dim))
        return np.stack([_hash_vector(s, self.dim) for s in sentences])


class HashTokenEncoder(TokenEncoder):
    def __init__(self, dim: int = 256):
        self.dim = dim

    def encode_tokens(self, sentences: list[list[str]]) -> list[np.ndarray]:
        return [
            np.stack([_hash_vector(t, self.dim) for t in tokens])
            if tokens
            else np.zeros((0, self.dim))
            for tokens in sentences
        ]


# --------------------------------------------------------------------------
# Pretrained encoders. Imports are deferred so the hash service works on
# hosts without torch; inference runs single-threaded under a lock for
# deterministic, stateless request handling.


class TransformerSentenceEncoder(SentenceEncoder):
    def __init__(self, model_id: str):
        try:
            from sentence_transformers import SentenceTransformer
        except ImportError as exc:  # pragma: no cover - depends on host
            raise ModelUnavailable(f"sentence-transformers not installed: {exc}")
        try:
            self._model = SentenceTransformer(model_id)
        except Exception as exc:
            raise ModelUnavailable(f"cannot load sentence model {model_id!r}: {exc}")
        self._lock = threading.Lock()
        self.dim = int(self._model.get_sentence_embedding_dimension())

    def encode_sentences(self, sentences: list[str]) -> np.ndarray:
        if not sentences:
            return np.zeros((0, self.dim))
        with self._lock:
            vectors = self._model.encode(
                sentences, convert_to_numpy=True, normalize_embeddings=True
            )
        return np.asarray(vectors, dtype=np.float64)


class TransformerTokenEncoder(TokenEncoder):
    """Contextual word vectors: subword pieces of each word mean-pooled."""

    def __init__(self, model_id: str):
        try:
            import torch
            from transformers import AutoModel, AutoTokenizer
        except ImportError as exc:  # pragma: no cover - depends on host
            raise ModelUnavailable(f"transformers/torch not installed: {exc}")
        try:
            self._tokenizer = AutoTokenizer.from_pretrained(model_id)
            self._model = AutoModel.from_pretrained(model_id)
        except Exception as exc:
            raise ModelUnavailable(f"cannot load token model {model_id!r}: {exc}")
        self._torch = torch
        self._model.eval()
        self._lock = threading.Lock()
        self.dim = int(self._model.config.hidden_size)

    def encode_tokens(self, sentences: list[list[str]]) -> list[np.ndarray]:
        out: list[np.ndarray] = []
        for tokens in sentences:
            if not tokens:
                out.append(np.zeros((0, self.dim)))
                continue
            with self._lock, self._torch.no_grad():
                batch = self._tokenizer(
                    tokens,
                    is_split_into_words=True,
                    return_tensors="pt",
                    truncation=True,
                )
                hidden = self._model(**batch).last_hidden_state[0].numpy()
            word_ids = batch.word_ids(0)
            vectors = np.zeros((len(tokens), self.dim))
            counts = np.zeros(len(tokens))
            for piece_idx, word_idx in enumerate(word_ids):
                if word_idx is None:
                    continue
                vectors[word_idx] += hidden[piece_idx]
                counts[word_idx] += 1
            counts = np.maximum(counts, 1)
            vectors /= counts[:, None]
            norms = np.maximum(np.linalg.norm(vectors, axis=1, keepdims=True), 1e-12)
            out.append(vectors / norms)
        return out


def make_sentence_encoder(model_id: str) -> SentenceEncoder:
    if model_id == HASH_MODEL:
        return HashSentenceEncoder()
    return TransformerSentenceEncoder(model_id)


def make_token_encoder(model_id: str) -> TokenEncoder:
    if model_id == HASH_MODEL:
        return HashTokenEncoder()
    return TransformerTokenEncoder(model_id)
