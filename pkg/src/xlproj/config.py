"""Pipeline configuration: one flat key/value YAML file for every stage."""

from __future__ import annotations

from dataclasses import dataclass, field

import yaml

from .audit import DEFAULT_STOPLIST, AuditConfig, load_stoplist
from .embed import EmbedConfig
from .errors import ConfigError
from .sentalign import AlignParams
from .segment import DEFAULT_ABBREVIATIONS, load_abbreviations

KNOWN_KEYS = {
    "embed.backend": str,
    "embed.endpoint": str,
    "embed.batch_size": int,
    "embed.max_concurrent_batches": int,
    "embed.mock_dim": int,
    "align.max_bead": int,
    "align.null_penalty": float,
    "align.size_penalty": float,
    "align.min_edge_score": float,
    "audit.stoplist": str,  # path to a stoplist file
    "audit.min_target_len": int,
    "audit.inflation_abs": int,
    "audit.inflation_ratio": float,
    "segment.abbreviations": str,  # path to an abbreviation file
    "label_sensitive": bool,
    "scheme.default": str,
}


@dataclass
class PipelineConfig:
    embed: EmbedConfig = field(default_factory=EmbedConfig)
    align: AlignParams = field(default_factory=AlignParams)
    audit: AuditConfig = field(default_factory=AuditConfig)
    abbreviations: frozenset[str] = frozenset(DEFAULT_ABBREVIATIONS)
    min_edge_score: float = -1.0
    label_sensitive: bool = True
    default_scheme: str = "ICD-O"


def load_config(path: str | None = None, endpoint_override: str | None = None) -> PipelineConfig:
    """Build a pipeline config from an optional YAML file of flat keys.

    Unknown keys are rejected. ``endpoint_override`` (e.g. from the
    XLPROJ_ENDPOINT env var) wins over the file and switches the backend to
    http.
    """
    raw: dict = {}
    if path is not None:
        with open(path, encoding="utf-8") as f:
            loaded = yaml.safe_load(f) or {}
        if not isinstance(loaded, dict):
            raise ConfigError(f"{path}: expected a flat key/value mapping")
        raw = loaded
    unknown = set(raw) - set(KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for key, value in raw.items():
        expected = KNOWN_KEYS[key]
        if expected is float and isinstance(value, int) and not isinstance(value, bool):
            continue
        if not isinstance(value, expected) or (expected is int and isinstance(value, bool)):
            raise ConfigError(f"{key}: expected {expected.__name__}, got {value!r}")

    embed = EmbedConfig(
        backend=raw.get("embed.backend", "mock"),
        endpoint=raw.get("embed.endpoint", ""),
        batch_size=raw.get("embed.batch_size", 32),
        max_concurrent_batches=raw.get("embed.max_concurrent_batches", 2),
        mock_dim=raw.get("embed.mock_dim", 256),
    )
    if endpoint_override:
        embed = EmbedConfig(
            backend="http",
            endpoint=endpoint_override,
            batch_size=embed.batch_size,
            max_concurrent_batches=embed.max_concurrent_batches,
            mock_dim=embed.mock_dim,
        )
    if embed.backend not in ("mock", "http"):
        raise ConfigError(f"embed.backend must be mock or http, got {embed.backend!r}")
    if embed.batch_size <= 0 or embed.max_concurrent_batches < 1 or embed.mock_dim <= 0:
        raise ConfigError("embed sizes must be positive")

    try:
        align = AlignParams(
            max_bead=raw.get("align.max_bead", 2),
            null_penalty=float(raw.get("align.null_penalty", 0.3)),
            size_penalty=float(raw.get("align.size_penalty", 0.05)),
        )
        audit_cfg = AuditConfig(
            stoplist=(
                load_stoplist(raw["audit.stoplist"])
                if "audit.stoplist" in raw
                else DEFAULT_STOPLIST
            ),
            min_target_len=raw.get("audit.min_target_len", 3),
            inflation_abs=raw.get("audit.inflation_abs", 2),
            inflation_ratio=float(raw.get("audit.inflation_ratio", 1.5)),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    abbreviations = (
        load_abbreviations(raw["segment.abbreviations"])
        if "segment.abbreviations" in raw
        else frozenset(DEFAULT_ABBREVIATIONS)
    )
    return PipelineConfig(
        embed=embed,
        align=align,
        audit=audit_cfg,
        abbreviations=abbreviations,
        min_edge_score=float(raw.get("align.min_edge_score", -1.0)),
        label_sensitive=raw.get("label_sensitive", True),
        default_scheme=raw.get("scheme.default", "ICD-O"),
    )
