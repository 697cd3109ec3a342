#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

"""Admissibility and criticality of weight sequences.

The system 1 - 1/x = f_bullet(x, y), y = f_diamond(x, y) is solved by
monotone fixed-point iteration from (1 + eps, eps) followed by a Newton
polish. At a critical sequence the root is a tangency and Newton only reaches
sqrt(machine eps); there the solver switches to the regular system
{y = f_diamond, det(I - A) = 0} and keeps its root if it satisfies the first
equation to the residual tolerance.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import TYPE_CHECKING, Any

import numpy as np
from scipy import optimize

from Boltzmann.config import (
    admissibility_slack,
    criticality_tolerance,
    fixed_point_iteration_cap,
    fixed_point_step_tolerance,
    residual_tolerance,
    start_offset,
    tangency_window,
)
from Boltzmann.generating_functions import (
    DivergenceError,
    diamond_dx_over_y,
    f_bullet_partials,
    f_diamond_partials,
)
from Boltzmann.weights import WeightSequence
from Branching.perron import ConvergenceError, spectral_radius

if TYPE_CHECKING:
    from Boltzmann.mobile_law import MobileLaw

_logger = logging.getLogger(__name__)


class NotAdmissibleError(ValueError):
    """Raised when an operation needs an admissible (or critical) weight sequence."""


class MapClassification(Enum):
    NOT_ADMISSIBLE = "not_admissible"
    ADMISSIBLE_SUBCRITICAL = "admissible_subcritical"
    CRITICAL = "critical"
    REGULAR_CRITICAL = "regular_critical"


@dataclass(frozen=True)
class BoltzmannSolution:
    weights: WeightSequence
    classification: MapClassification
    x: float | None = None
    """Z+ (positive pointed maps)."""

    y: float | None = None
    """Z diamond, the square root of Z0 (null pointed maps)."""

    stability_matrix: np.ndarray | None = field(default=None, compare=False)
    spectral_radius: float | None = None
    residuals: tuple[float, float] | None = None
    tangency_refined: bool = False
    iterations: int = 0

    @property
    def admissible(self) -> bool:
        return self.classification is not MapClassification.NOT_ADMISSIBLE

    @property
    def critical(self) -> bool:
        return self.classification in (MapClassification.CRITICAL, MapClassification.REGULAR_CRITICAL)

    @property
    def bipartite(self) -> bool:
        return self.weights.bipartite

    @property
    def z_plus(self) -> float:
        self.require_admissible()
        return self.x

    @property
    def z_diamond(self) -> float:
        self.require_admissible()
        return self.y

    @property
    def z_null(self) -> float:
        return self.z_diamond ** 2

    @cached_property
    def mobile_law(self) -> "MobileLaw":
        from Boltzmann.mobile_law import derive_mobile_law
        return derive_mobile_law(self)

    def require_admissible(self):
        if not self.admissible:
            raise NotAdmissibleError(f"Weight sequence {self.weights.to_json()} is not admissible.")

    def require_critical(self):
        if not self.critical:
            raise NotAdmissibleError(
                f"Weight sequence {self.weights.to_json()} is {self.classification.value}, not critical."
            )

    def to_report(self) -> dict[str, Any]:
        return {
            "weights": self.weights.to_json(),
            "classification": self.classification.value,
            "admissible": self.admissible,
            "critical": self.critical,
            "Zplus": self.x,
            "Zdiamond": self.y,
            "spectral_radius": self.spectral_radius,
            "stability_matrix": None if self.stability_matrix is None else self.stability_matrix.tolist(),
            "residuals": None if self.residuals is None else list(self.residuals),
            "tangency_refined": self.tangency_refined,
            "iterations": self.iterations,
        }


def stability_matrix(x: float, y: float, q: WeightSequence) -> np.ndarray:
    bullet = f_bullet_partials(x, y, q)
    diamond = f_diamond_partials(x, y, q)
    return np.array([
        [0.0, 0.0, x - 1.0],
        [x * diamond_dx_over_y(x, y, q), diamond.dy, 0.0],
        [x * x / (x - 1.0) * bullet.dx, x * y / (x - 1.0) * bullet.dy, 0.0],
    ])


def residuals(x: float, y: float, q: WeightSequence) -> tuple[float, float]:
    bullet = f_bullet_partials(x, y, q).value
    diamond = 0.0 if q.bipartite else f_diamond_partials(x, y, q).value
    return 1.0 - 1.0 / x - bullet, y - diamond


def solve_admissibility(q: WeightSequence) -> BoltzmannSolution:
    bipartite = q.bipartite
    x, y = 1.0 + start_offset, 0.0 if bipartite else start_offset

    iterations = 0
    for iterations in range(1, fixed_point_iteration_cap + 1):
        try:
            bullet = f_bullet_partials(x, y, q).value
            if bullet >= 1.0:
                return _not_admissible(q, iterations, "f_bullet reached 1")
            x_new = 1.0 / (1.0 - bullet)
            y_new = 0.0 if bipartite else f_diamond_partials(x, y, q).value
        except DivergenceError as exc:
            return _not_admissible(q, iterations, str(exc))
        step = max(abs(x_new - x), abs(y_new - y))
        x, y = x_new, y_new
        if step <= fixed_point_step_tolerance * max(1.0, x):
            break

    _logger.debug("Fixed-point iteration stopped after %d steps at x=%.15g y=%.15g", iterations, x, y)

    polished = _newton_polish(x, y, q)
    if polished is not None:
        x, y = polished

    radius = _radius_or_none(x, y, q)
    refined = False
    if radius is None or abs(radius - 1.0) <= tangency_window or max(map(abs, _safe_residuals(x, y, q))) > residual_tolerance:
        tangency = _tangency_point(x, y, q)
        if tangency is not None:
            tx, ty = tangency
            gap = _safe_residuals(tx, ty, q)[0]
            if abs(gap) <= residual_tolerance:
                x, y, refined = tx, ty, True
                radius = _radius_or_none(x, y, q)
            elif gap < 0 and max(map(abs, _safe_residuals(x, y, q))) > residual_tolerance:
                # the curves no longer touch: no root with x > 1
                return _not_admissible(q, iterations, "no tangency root")

    final = _safe_residuals(x, y, q)
    if max(map(abs, final)) > residual_tolerance or radius is None:
        raise ConvergenceError(
            f"Admissibility solver did not converge for {q.to_json()}: residuals {final}."
        )

    matrix = stability_matrix(x, y, q)
    if radius > 1.0 + admissibility_slack:
        classification = MapClassification.NOT_ADMISSIBLE
    elif abs(radius - 1.0) <= criticality_tolerance:
        classification = MapClassification.REGULAR_CRITICAL if _regular(x, y, q) else MapClassification.CRITICAL
    else:
        classification = MapClassification.ADMISSIBLE_SUBCRITICAL

    _logger.info("Weights %s: x=%.15g y=%.15g radius=%.12g -> %s", q.to_json(), x, y, radius,
                 classification.value)
    return BoltzmannSolution(
        weights=q,
        classification=classification,
        x=x,
        y=y,
        stability_matrix=matrix,
        spectral_radius=radius,
        residuals=final,
        tangency_refined=refined,
        iterations=iterations,
    )


def _not_admissible(q: WeightSequence, iterations: int, reason: str) -> BoltzmannSolution:
    _logger.info("Weights %s are not admissible (%s)", q.to_json(), reason)
    return BoltzmannSolution(weights=q, classification=MapClassification.NOT_ADMISSIBLE, iterations=iterations)


def _safe_residuals(x: float, y: float, q: WeightSequence) -> tuple[float, float]:
    try:
        if x <= 1.0 or y < 0:
            return float("inf"), float("inf")
        return residuals(x, y, q)
    except DivergenceError:
        return float("inf"), float("inf")


def _radius_or_none(x: float, y: float, q: WeightSequence) -> float | None:
    try:
        matrix = stability_matrix(x, y, q)
    except (DivergenceError, ZeroDivisionError):
        # x rounds to 1 when every weight is tiny
        return None
    if not np.all(np.isfinite(matrix)):
        return None
    return spectral_radius(matrix)


def _newton_polish(x: float, y: float, q: WeightSequence) -> tuple[float, float] | None:
    before = max(map(abs, _safe_residuals(x, y, q)))

    if q.bipartite:
        result = optimize.root(lambda v: [_safe_residuals(v[0], 0.0, q)[0]], [x], method="hybr")
        candidate = (float(result.x[0]), 0.0)
    else:
        result = optimize.root(lambda v: list(_safe_residuals(v[0], v[1], q)), [x, y], method="hybr")
        candidate = (float(result.x[0]), float(result.x[1]))

    after = max(map(abs, _safe_residuals(*candidate, q)))
    if not result.success or after > before:
        return None

    # past the tangency Newton may land on the upper, non-admissible root
    radius = _radius_or_none(*candidate, q)
    if radius is None or radius > 1.0 + admissibility_slack:
        return None
    return candidate


def _tangency_point(x: float, y: float, q: WeightSequence) -> tuple[float, float] | None:
    if q.bipartite:
        def tangency(v):
            try:
                return [1.0 - v[0] ** 2 * f_bullet_partials(v[0], 0.0, q).dx]
            except DivergenceError:
                return [float("inf")]

        result = optimize.root(tangency, [x], method="hybr")
        candidate = (float(result.x[0]), 0.0)
    else:
        def tangency(v):
            try:
                A = stability_matrix(v[0], v[1], q)
                return [v[1] - f_diamond_partials(v[0], v[1], q).value, float(np.linalg.det(np.eye(3) - A))]
            except (DivergenceError, ZeroDivisionError):
                return [float("inf"), float("inf")]

        result = optimize.root(tangency, [x, y], method="hybr")
        candidate = (float(result.x[0]), float(result.x[1]))

    if not result.success or candidate[0] <= 1.0 or candidate[1] < 0:
        return None
    return candidate


def _regular(x: float, y: float, q: WeightSequence) -> bool:
    if not q.is_geometric:
        return True
    lam = q.geometric_lambda
    base = 1.0 - lam * y
    z = lam * lam * x / (base * base)
    # strictly inside the domain leaves room for a small epsilon
    return z < 0.25 - 1e-12 and lam * y < 1.0
