#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

"""Experiment configuration and input resolution.

Values are layered: dataclass defaults, then a JSON config file mirroring the
CLI flags, then ``BMT_*`` environment variables, then flags given on the
command line.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, fields, replace
from typing import Any, Mapping

from Boltzmann.presets import preset
from Boltzmann.weights import WeightSequence
from Branching.offspring_law import OffspringLaw
from Harness.result_cache import get_cached_value_or_set
from InfiniteMap import config as window_config
from Periodicity.lattice import SizeVector, default_period_budget
from Periodicity.map_periods import MAP_SIZE_VECTORS
from Sampler.galton_watson import default_attempt_cap, default_vertex_cap
from example_data_provider import get_example_data

_logger = logging.getLogger(__name__)

OUTPUT_FORMATS = ("json", "csv")
PRESET_NAMES = ("even", "odd", "uipm")

_environment = {
    "BMT_SEED": ("seed", int),
    "BMT_THREADS": ("threads", int),
    "BMT_OUT": ("out", str),
    "BMT_FORMAT": ("format", str),
}


class InvalidConfigError(ValueError):
    """Raised on unknown keys or out-of-range values in an experiment config."""


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int = 0
    """Master seed; job streams are split off it."""

    threads: int = 1
    """Worker processes for the sampling jobs."""

    out: str | None = None
    """Report path; a petname is generated when unset."""

    format: str = "json"
    """Report format, json or csv."""

    samples: int = 1000
    """Samples per grid point (or objects emitted by ``sample``)."""

    radius: int = 1
    """Truncation height for trees, ball radius for maps."""

    sizes: tuple[int, ...] = ()
    """Conditioning sizes; empty means unconditioned where that makes sense."""

    size_functional: str = "F"
    """V, E or F for maps; comma separated type weights such as 1,0 for trees."""

    law: str | None = None
    """Offspring law: a JSON file or the name of an example law."""

    weights: str | None = None
    """Face weights: a JSON file, an example name or a preset such as even:p=2."""

    period_budget: int = default_period_budget
    """Size budget of the period search."""

    vertex_cap: int = default_vertex_cap
    """Vertices after which a sample is abandoned."""

    attempt_cap: int = default_attempt_cap
    """Rejection attempts before a conditioned sampler gives up."""

    window_height: int = window_config.initial_window_height
    """First spine height of infinite-map windows."""

    window_cap: int = window_config.window_height_cap
    """Largest spine height tried before a ball is declared unstable."""

    verify: bool = window_config.verify_stabilization
    """Recheck every certified ball on a window twice as high."""

    tail_range: tuple[int, int] = (5, 25)
    """Range of n for survival fits of the root degree."""

    def __post_init__(self):
        if self.format not in OUTPUT_FORMATS:
            raise InvalidConfigError(f"Format must be one of {OUTPUT_FORMATS}, got {self.format!r}.")
        if self.threads < 1:
            raise InvalidConfigError(f"Threads must be >= 1, got {self.threads}.")
        if self.samples < 1:
            raise InvalidConfigError(f"Samples must be >= 1, got {self.samples}.")
        if self.seed < 0:
            raise InvalidConfigError(f"Seed must be >= 0, got {self.seed}.")
        if self.radius < 0:
            raise InvalidConfigError(f"Radius must be >= 0, got {self.radius}.")
        if any(n < 0 for n in self.sizes):
            raise InvalidConfigError(f"Sizes must be nonnegative, got {self.sizes}.")
        low, high = self.tail_range
        if low > high:
            raise InvalidConfigError(f"Tail range {self.tail_range} is empty.")

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise InvalidConfigError(f"Unknown config keys: {', '.join(unknown)}.")
        return cls()._merge(data)

    def _merge(self, data: Mapping[str, Any]) -> "ExperimentConfig":
        values = {key: value for key, value in data.items() if value is not None}
        if "sizes" in values:
            values["sizes"] = tuple(int(n) for n in values["sizes"])
        if "tail_range" in values:
            values["tail_range"] = tuple(int(n) for n in values["tail_range"])
        return replace(self, **values)

    def with_environment(self, environ: Mapping[str, str] = os.environ) -> "ExperimentConfig":
        values = {}
        for variable, (name, convert) in _environment.items():
            if variable in environ:
                try:
                    values[name] = convert(environ[variable])
                except ValueError as exc:
                    raise InvalidConfigError(f"Cannot read {variable}={environ[variable]!r}.") from exc
        return self._merge(values)

    def with_overrides(self, overrides: Mapping[str, Any]) -> "ExperimentConfig":
        return self._merge(overrides)

    def to_json(self) -> dict[str, Any]:
        data = {f.name: getattr(self, f.name) for f in fields(self)}
        data["sizes"] = list(self.sizes)
        data["tail_range"] = list(self.tail_range)
        return data

    def reproducible_json(self) -> dict[str, Any]:
        """The config as echoed in reports: without the fields that cannot change results."""
        data = self.to_json()
        for name in ("threads", "out", "format"):
            data.pop(name)
        return data


def load_config(path: str | None = None, overrides: Mapping[str, Any] | None = None,
                environ: Mapping[str, str] = os.environ) -> ExperimentConfig:
    config = ExperimentConfig()
    if path is not None:
        with open(path, 'r') as file:
            config = ExperimentConfig.from_mapping(json.load(file))
        _logger.debug("Loaded config file %s", path)
    config = config.with_environment(environ)
    return config.with_overrides(overrides or {})


# --- inputs ------------------------------------------------------------------------


def _load_json_reference(reference: str) -> Any:
    if os.path.exists(reference):
        with open(reference, 'r') as file:
            return json.load(file)
    return get_example_data(reference)


def load_law(reference: str | None) -> OffspringLaw:
    if reference is None:
        raise InvalidConfigError("This command needs --law.")
    return OffspringLaw.from_json(_load_json_reference(reference))


def parse_preset(reference: str) -> tuple[str, dict[str, int]] | None:
    """``even:p=2`` gives ("even", {"p": 2}); anything that is not a preset name gives None."""
    name, _, rest = reference.partition(":")
    if name not in PRESET_NAMES:
        return None
    params = {}
    for item in filter(None, rest.split(",")):
        key, _, value = item.partition("=")
        try:
            params[key.strip()] = int(value)
        except ValueError as exc:
            raise InvalidConfigError(f"Cannot read preset parameter {item!r}.") from exc
    return name, params


def load_weights(reference: str | None) -> WeightSequence:
    if reference is None:
        raise InvalidConfigError("This command needs --weights.")
    parsed = parse_preset(reference)
    if parsed is None:
        return WeightSequence.from_json(_load_json_reference(reference))
    name, params = parsed
    key = "preset:" + name + "".join(f":{k}={v}" for k, v in sorted(params.items()))
    # critical presets cost a bisection; their weights are kept across runs
    data = get_cached_value_or_set(key, lambda: preset(name, params).to_json())
    return WeightSequence.from_json(data)


def parse_tree_functional(text: str, law: OffspringLaw) -> SizeVector:
    """Comma separated type weights, or V/E/F projected onto a mobile law."""
    if text in MAP_SIZE_VECTORS:
        return MAP_SIZE_VECTORS[text].for_law(law)
    try:
        weights = tuple(int(w) for w in text.split(","))
    except ValueError as exc:
        raise InvalidConfigError(f"Cannot read size functional {text!r}.") from exc
    if len(weights) != law.K:
        raise InvalidConfigError(f"Size functional {weights} needs one weight per type, the law has {law.K}.")
    return SizeVector(weights, law.labels)


def map_size_kind(text: str) -> str:
    if text not in MAP_SIZE_VECTORS:
        raise InvalidConfigError(f"Map sizes are counted in V, E or F, got {text!r}.")
    return text
