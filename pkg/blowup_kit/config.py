"""Run configuration shared by every command: defaults < config file < command-line flags."""

from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, FrozenSet, Mapping, Optional, Sequence, Union

import yaml

from blowup_kit.serialization import (
    FieldDeserializeFail,
    MissingRequired,
    UnknownField,
    deserialize,
)
from blowup_kit.series import Mode
from blowup_kit.wedge import EpsSequence, WedgeSettings

__all__: Sequence[str] = (
    "ConfigError",
    "RunConfig",
    "chosen_settings",
    "load_config",
    "resolve_config",
)


@dataclass(frozen=True)
class ConfigError(ValueError):
    source: str
    problem: str

    def __str__(self) -> str:
        return f"Invalid configuration ({self.source}): {self.problem}"


@dataclass(frozen=True)
class RunConfig:
    """Every knob a command may read. Embedded verbatim in every report."""

    mode: Mode = Mode.exact
    truncation: int = 8
    residual_tolerance: float = 1e-10
    tau_bv: float = 1e-8
    tau_glue: float = 1e-8
    rank_threshold: float = 1e-10
    quadrature_order: int = 64
    grid_density: int = 64
    eps0: float = 1e-2
    eps_ratio: float = 0.5
    eps_levels: int = 6
    fit_degree: int = 12
    seed: int = 0

    def __post_init__(self) -> None:
        if self.truncation < 1:
            raise ConfigError("values", f"truncation must be >= 1, not {self.truncation}")
        for name in ("residual_tolerance", "tau_bv", "tau_glue", "rank_threshold", "eps0"):
            if not getattr(self, name) > 0:
                raise ConfigError("values", f"{name} must be positive, not {getattr(self, name)}")
        for name in ("quadrature_order", "grid_density", "fit_degree"):
            if getattr(self, name) < 1:
                raise ConfigError("values", f"{name} must be at least 1, not {getattr(self, name)}")
        if not 0 < self.eps_ratio < 1:
            raise ConfigError("values", f"eps_ratio must lie in (0, 1), not {self.eps_ratio}")
        if self.eps_levels < 3:
            raise ConfigError("values", f"eps_levels must be at least 3, not {self.eps_levels}")
        if self.seed < 0:
            raise ConfigError("values", f"seed must be non-negative, not {self.seed}")

    def wedge_settings(self) -> WedgeSettings:
        return WedgeSettings(
            truncation=self.truncation,
            tau_bv=self.tau_bv,
            tau_glue=self.tau_glue,
            quadrature_order=self.quadrature_order,
            eps=EpsSequence(self.eps0, self.eps_ratio, self.eps_levels),
            fit_degree=self.fit_degree,
            seed=self.seed,
        )


def _read_document(path: Union[str, Path]) -> Dict[str, Any]:
    source = str(path)
    try:
        with open(path, "rt") as handle:
            document = yaml.safe_load(handle)
    except (OSError, yaml.YAMLError) as e:
        raise ConfigError(source, str(e)) from e
    if document is None:
        return {}
    if not isinstance(document, Mapping):
        raise ConfigError(source, f"expected a mapping, found {type(document).__name__}")
    return dict(document)


def load_config(path: Union[str, Path]) -> RunConfig:
    """Reads a YAML (or JSON) mapping of RunConfig fields; absent fields keep their defaults.

    :raises ConfigError If the file is unreadable, not a mapping, or has bad fields.
    """
    source = str(path)
    document = _read_document(path)
    try:
        return deserialize(RunConfig, document)
    except ConfigError as e:
        raise ConfigError(source, e.problem) from e
    except (FieldDeserializeFail, MissingRequired, UnknownField) as e:
        raise ConfigError(source, str(e)) from e


def resolve_config(
    path: Optional[Union[str, Path]] = None, overrides: Optional[Mapping[str, Any]] = None
) -> RunConfig:
    """Defaults, then the file at `path`, then every non-None entry of `overrides`."""
    config = load_config(path) if path is not None else RunConfig()
    if overrides:
        known = {f.name: f.type for f in fields(RunConfig)}
        unknown = sorted(set(overrides) - set(known))
        if unknown:
            raise ConfigError("flags", f"unknown settings {unknown}")
        try:
            chosen = {
                k: deserialize(known[k], v.name if isinstance(v, Mode) else v)
                for k, v in overrides.items()
                if v is not None
            }
        except FieldDeserializeFail as e:
            raise ConfigError("flags", str(e)) from e
        if chosen:
            config = replace(config, **chosen)
    return config


def chosen_settings(
    path: Optional[Union[str, Path]] = None, overrides: Optional[Mapping[str, Any]] = None
) -> FrozenSet[str]:
    """Names of the settings that the file at `path` or a non-None override set explicitly.

    :raises ConfigError If the file is unreadable or not a mapping.
    """
    named = set(_read_document(path)) if path is not None else set()
    named.update(k for k, v in (overrides or {}).items() if v is not None)
    return frozenset(named)
