"""Pipeline configuration and its YAML file form.

Example file::

    similarity:
      min_title_similarity: 70
    cascade:
      enable_web_search: true
      crossref_confidence_gate: 75
    thresholds: {tau_m: 1.25, tau_e: 7.25}
    suspicion_similarity_gate: 70
    verifier: {backend: rule_based, model: claude-sonnet-4-6, temperature: 0.0}
    sources: {timeout: 10, retries: 2}
    workers: 4
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Optional

import yaml

from .cascade import CascadeConfig
from .models import Thresholds
from .textsim import SimilarityConfig


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class VerifierSettings:
    backend: str = "rule_based"
    model: str = "claude-sonnet-4-6"
    temperature: float = 0.0
    base_url: Optional[str] = None
    retries: int = 1

    def __post_init__(self):
        if self.backend not in ("rule_based", "chat"):
            raise ValueError(f"unknown verifier backend: {self.backend!r}")


@dataclass(frozen=True)
class SourceSettings:
    timeout: float = 10.0
    retries: int = 2
    rate_limits: dict = field(default_factory=dict)
    web_endpoint: Optional[str] = None


@dataclass(frozen=True)
class PipelineConfig:
    similarity: SimilarityConfig = SimilarityConfig()
    cascade: CascadeConfig = CascadeConfig()
    thresholds: Thresholds = Thresholds()
    suspicion_similarity_gate: float = 70.0
    enable_reviewer: bool = True
    verifier: VerifierSettings = VerifierSettings()
    sources: SourceSettings = SourceSettings()
    cache_path: Optional[str] = None
    workers: int = 4

    def __post_init__(self):
        if self.cascade.min_title_similarity != self.similarity.min_title_similarity:
            raise ValueError("cascade and similarity disagree on min_title_similarity")
        if not 0.0 <= self.suspicion_similarity_gate <= 100.0:
            raise ValueError("suspicion_similarity_gate must be in [0, 100]")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    def to_dict(self) -> dict:
        return asdict(self)

    def with_overrides(self, *, no_web_search=False, no_reviewer=False, workers=None,
                       cache_path=None) -> "PipelineConfig":
        cfg = self
        if no_web_search:
            cfg = replace(cfg, cascade=replace(cfg.cascade, enable_web_search=False))
        if no_reviewer:
            cfg = replace(cfg, enable_reviewer=False)
        if workers is not None:
            cfg = replace(cfg, workers=workers)
        if cache_path is not None:
            cfg = replace(cfg, cache_path=str(cache_path))
        return cfg


_SECTIONS = {"similarity": SimilarityConfig, "cascade": CascadeConfig, "thresholds": Thresholds,
             "verifier": VerifierSettings, "sources": SourceSettings}


def _build(cls, data, section):
    if not isinstance(data, dict):
        raise ConfigError(f"section {section!r} must be a mapping")
    known = {f.name for f in fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown keys in {section!r}: {sorted(unknown)}")
    return cls(**data)


def config_from_dict(data: Optional[dict]) -> PipelineConfig:
    """Build a config; ``min_title_similarity`` may appear in either section."""
    data = dict(data or {})
    top = {f.name for f in fields(PipelineConfig)}
    unknown = set(data) - top
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    sections = {}
    for name in _SECTIONS:
        if name not in data:
            continue
        section = data.pop(name) or {}
        if not isinstance(section, dict):
            raise ConfigError(f"section {name!r} must be a mapping")
        sections[name] = dict(section)
    gates = {sections[n]["min_title_similarity"] for n in ("similarity", "cascade")
             if "min_title_similarity" in sections.get(n, {})}
    if len(gates) > 1:
        raise ConfigError("similarity and cascade set different min_title_similarity values")
    if gates:
        gate = gates.pop()
        sections.setdefault("similarity", {})["min_title_similarity"] = gate
        sections.setdefault("cascade", {})["min_title_similarity"] = gate
    try:
        parts = {name: _build(_SECTIONS[name], section, name)
                 for name, section in sections.items()}
        return PipelineConfig(**parts, **data)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path=None) -> PipelineConfig:
    if path is None:
        return PipelineConfig()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML in {path}: {exc}") from exc
    if data is not None and not isinstance(data, dict):
        raise ConfigError("config file must hold a mapping")
    return config_from_dict(data)
