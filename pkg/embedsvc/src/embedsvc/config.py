"""Service configuration from environment variables or keyword overrides."""

from __future__ import annotations

import os
from dataclasses import dataclass

HASH_MODEL = "hash"

DEFAULT_SENTENCE_MODEL = "sentence-transformers/LaBSE"
DEFAULT_TOKEN_MODEL = "bert-base-multilingual-cased"
DEFAULT_PORT = 8041
DEFAULT_MAX_BATCH = 256


@dataclass(frozen=True)
class ServiceConfig:
    """Runtime knobs; model ids may be Hugging Face ids, local paths, or "hash"."""

    sentence_model_id: str = DEFAULT_SENTENCE_MODEL
    token_model_id: str = DEFAULT_TOKEN_MODEL
    port: int = DEFAULT_PORT
    max_batch: int = DEFAULT_MAX_BATCH

    def __post_init__(self) -> None:
        if self.max_batch <= 0:
            raise ValueError(f"max_batch must be positive, got {self.max_batch}")


def from_env() -> ServiceConfig:
    """Read SENTENCE_MODEL, TOKEN_MODEL, PORT, MAX_BATCH from the environment."""
    return ServiceConfig(
        sentence_model_id=os.environ.get("SENTENCE_MODEL", DEFAULT_SENTENCE_MODEL),
        token_model_id=os.environ.get("TOKEN_MODEL", DEFAULT_TOKEN_MODEL),
        port=int(os.environ.get("PORT", str(DEFAULT_PORT))),
        max_batch=int(os.environ.get("MAX_BATCH", str(DEFAULT_MAX_BATCH))),
    )
