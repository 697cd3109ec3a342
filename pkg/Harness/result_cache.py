#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

"""JSON cache of solved inputs.

Entries live under a fingerprint of the solver tolerances, so changing a
tolerance in ``Boltzmann.config`` makes older entries invisible instead of
serving weights solved under other settings.
"""

import json
import logging
import os
import tempfile
from typing import Any, Callable

from Boltzmann import config as solver_config

CACHE_FILE = 'bmt_cache.json'

_logger = logging.getLogger(__name__)


class CacheFileError(RuntimeError):
    """Raised when the cache file exists but cannot be parsed."""


def solver_fingerprint() -> str:
    return "residual={:g};criticality={:g};search={:g}".format(
        solver_config.residual_tolerance, solver_config.criticality_tolerance,
        solver_config.criticality_search_tolerance)


def get_cached_value_or_set(name: str, generator: Callable[[], Any]) -> Any:
    existing_value = get_cached_value(name)
    if existing_value is not None:
        _logger.debug("Cache hit for %s", name)
        return existing_value

    value = generator()
    set_cached_value(name, value)
    return value


def get_cached_value(name: str) -> Any:
    try:
        entries = _read_entries(_get_cache_file())
    except CacheFileError as exc:
        _logger.warning("%s Ignoring the cache.", exc)
        return None
    return entries.get(solver_fingerprint(), {}).get(name)


def set_cached_value(name: str, value: Any):
    cache_file = _get_cache_file()
    entries = _read_entries(cache_file)
    entries.setdefault(solver_fingerprint(), {})[name] = value

    directory = os.path.dirname(os.path.abspath(cache_file))
    # write then rename, so parallel runs never see half a file
    handle, temporary = tempfile.mkstemp(dir=directory, suffix='.tmp')
    try:
        with os.fdopen(handle, 'w') as file:
            json.dump(entries, file, sort_keys=True)
        os.replace(temporary, cache_file)
    except OSError:
        if os.path.exists(temporary):
            os.remove(temporary)
        raise


def _read_entries(cache_file: str) -> dict[str, dict[str, Any]]:
    if not os.path.exists(cache_file):
        return {}
    with open(cache_file, 'r') as file:
        try:
            data = json.load(file)
        except json.JSONDecodeError:
            raise CacheFileError(f"Could not read cache file {cache_file}.")
    if not isinstance(data, dict):
        raise CacheFileError(f"Cache file {cache_file} does not hold a JSON object.")
    return data


def _get_cache_file() -> str:
    override = os.environ.get("BMT_CACHE_FILE")
    if override:
        return override
    script_dir = os.path.dirname(os.path.abspath(__file__))
    return os.path.join(script_dir, CACHE_FILE)
