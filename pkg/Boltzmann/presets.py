#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

"""Named weight sequences.

``even`` puts a single weight on faces of degree 2p, ``odd`` on faces of
degree 2p + 1; in both cases the weight is the unique critical one, located
by bisection on admissibility and then refined by Newton on the system that
adds det(I - A) = 0 to the admissibility equations. ``uipm`` is the geometric
sequence lambda^n with lambda = 1 / (2 sqrt(3)).
"""

from __future__ import annotations

import logging
import math
from typing import Any, Callable

import numpy as np
from scipy import optimize
from scipy.special import comb

from Boltzmann.admissibility import (
    BoltzmannSolution,
    residuals,
    solve_admissibility,
    stability_matrix,
)
from Boltzmann.config import criticality_search_tolerance
from Boltzmann.generating_functions import DivergenceError, f_bullet_partials
from Boltzmann.weights import InvalidWeightsError, WeightSequence
from Branching.perron import ConvergenceError

_logger = logging.getLogger(__name__)

UIPM_LAMBDA = 1.0 / (2.0 * math.sqrt(3.0))

# the upper end is never admissible; the lower end shrinks by _bracket_shrink
# until it is, and stops before x - 1 stops being representable
_bracket = (0.1, 1.0)
_bracket_shrink = 10.0
_bracket_floor = 1e-10


class SearchBracketError(ValueError):
    """Raised when the criticality search cannot bracket the critical weight."""


def preset(name: str, params: dict[str, Any] | None = None) -> WeightSequence:
    params = params or {}
    if name == "uipm":
        return WeightSequence.geometric(UIPM_LAMBDA)
    if name == "even":
        p = int(params.get("p", 2))
        if p < 2:
            raise InvalidWeightsError(f"Even presets need p >= 2, got {p}.")
        return critical_single_weight(2 * p)
    if name == "odd":
        p = int(params.get("p", 1))
        if p < 1:
            raise InvalidWeightsError(f"Odd presets need p >= 1, got {p}.")
        return critical_single_weight(2 * p + 1)
    raise InvalidWeightsError(f"Unknown preset {name!r}; choose from even, odd, uipm.")


def printed_even_constant(p: int) -> float:
    """The closed-form 2p-angulation constant (p-1)^(p-1) / (p^p C(2p-2, p-1)).

    Only reported next to the searched weight; at p = 2 it gives 1/8, which
    is not admissible, while the critical weight is 1/12.
    """
    return (p - 1) ** (p - 1) / (p ** p * comb(2 * p - 2, p - 1, exact=True))


def critical_single_weight(degree: int) -> WeightSequence:
    def build(weight: float) -> WeightSequence:
        return WeightSequence.from_table({degree: weight})

    weight, solution = _bisect_critical(build)
    refined = _refine_critical(build, weight, solution)
    if refined is not None:
        weight = refined

    _logger.info("Critical weight for faces of degree %d: %.15g", degree, weight)
    return build(weight)


def _bisect_critical(build: Callable[[float], WeightSequence]) -> tuple[float, BoltzmannSolution]:
    last_admissible: dict[float, BoltzmannSolution] = {}

    def signed_gap(weight: float) -> float:
        try:
            solution = solve_admissibility(build(weight))
        except ConvergenceError as exc:
            _logger.warning("Treating weight %.15g as not admissible: %s", weight, exc)
            return 1.0
        if not solution.admissible:
            return 1.0
        last_admissible[weight] = solution
        return solution.spectral_radius - 1.0

    low, high = _bracket
    if signed_gap(high) <= 0:
        raise SearchBracketError(f"Weight {high} is admissible and subcritical; no critical weight below it.")
    while signed_gap(low) >= 0:
        if low / _bracket_shrink < _bracket_floor:
            raise SearchBracketError(
                f"Criticality search could not bracket the weight in ({_bracket_floor}, {high}).")
        high, low = low, low / _bracket_shrink
    _logger.debug("Critical weight bracketed in (%g, %g)", low, high)

    weight = optimize.bisect(signed_gap, low, high, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=400)
    admissible = [w for w in last_admissible if w <= weight]
    best = max(admissible)
    solution = last_admissible[best]
    if abs(solution.spectral_radius - 1.0) > criticality_search_tolerance:
        _logger.debug("Bisection ended at radius %.12g; Newton refinement follows", solution.spectral_radius)
    return best, solution


def _refine_critical(build, weight: float, solution: BoltzmannSolution) -> float | None:
    """Newton on (weight, x, y) for the admissibility equations plus det(I - A) = 0."""
    bipartite = solution.bipartite

    def system(v):
        try:
            q = build(v[0])
            if bipartite:
                x = v[1]
                return [residuals(x, 0.0, q)[0], 1.0 - x * x * f_bullet_partials(x, 0.0, q).dx]
            x, y = v[1], v[2]
            first, second = residuals(x, y, q)
            return [first, second, float(np.linalg.det(np.eye(3) - stability_matrix(x, y, q)))]
        except (DivergenceError, InvalidWeightsError, ZeroDivisionError):
            return [float("inf")] * (2 if bipartite else 3)

    start = [weight, solution.x] if bipartite else [weight, solution.x, solution.y]
    result = optimize.root(system, start, method="hybr")
    if not result.success or abs(result.x[0] - weight) > 1e-6 * max(weight, 1e-12):
        _logger.debug("Newton refinement rejected: %s", result.message)
        return None

    candidate = float(result.x[0])
    check = solve_admissibility(build(candidate))
    if not check.critical:
        _logger.debug("Refined weight %.15g classified %s, keeping bisection", candidate, check.classification.value)
        return None
    return candidate
