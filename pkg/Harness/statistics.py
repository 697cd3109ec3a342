#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

"""Distances and goodness-of-fit tests between histograms and laws.

Histograms are mappings from a hashable class key (usually a canonical
encoding in hex) to a count; laws map the same keys to probabilities.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np
from scipy import stats

minimum_expected_count = 5.0
_rest = "<rest>"


class StatisticsError(ValueError):
    """Raised on empty histograms or too little data for a test."""


def histogram(keys: Iterable[Hashable]) -> Counter:
    return Counter(keys)


def merge_histograms(parts: Iterable[Mapping[Hashable, int]]) -> Counter:
    total: Counter = Counter()
    for part in parts:
        total.update(part)
    return total


def _normalized(hist: Mapping[Hashable, float], name: str) -> dict[Hashable, float]:
    total = float(sum(hist.values()))
    if total <= 0:
        raise StatisticsError(f"Histogram {name} is empty.")
    if any(v < 0 for v in hist.values()):
        raise StatisticsError(f"Histogram {name} has negative entries.")
    return {key: value / total for key, value in hist.items()}


def tv_distance(hist_a: Mapping[Hashable, float], hist_b: Mapping[Hashable, float]) -> float:
    """Total variation distance between two histograms, each normalized to mass 1."""
    a = _normalized(hist_a, "A")
    b = _normalized(hist_b, "B")
    keys = set(a) | set(b)
    return 0.5 * sum(abs(a.get(key, 0.0) - b.get(key, 0.0)) for key in keys)


def tv_to_law(hist: Mapping[Hashable, int], law: Mapping[Hashable, float]) -> float:
    """TV between a histogram and a sub-probability law; missing law mass counts as distance."""
    p = _normalized(hist, "A")
    keys = set(p) | set(law)
    inside = sum(abs(p.get(key, 0.0) - float(law.get(key, 0.0))) for key in keys)
    missing = max(0.0, 1.0 - sum(float(v) for v in law.values()))
    return 0.5 * (inside + missing)


def sampling_noise_bound(classes: int, samples: int) -> float:
    """2 sqrt(classes / samples), the TV level reached by sampling noise alone."""
    if samples <= 0:
        raise StatisticsError("The noise bound needs at least one sample.")
    return 2.0 * math.sqrt(classes / samples)


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    p_value: float
    dof: int
    cells: int
    pooled: int
    """Number of original cells merged into pooled cells."""

    def to_json(self) -> dict:
        return {"statistic": self.statistic, "p_value": self.p_value, "dof": self.dof,
                "cells": self.cells, "pooled": self.pooled}


def chi_square(hist: Mapping[Hashable, int], law: Mapping[Hashable, float], ddof: int = 0,
               min_expected: float = minimum_expected_count) -> ChiSquareResult:
    """Pearson chi-square of observed counts against a law.

    Observed keys outside the law and the mass the law leaves unassigned form
    one extra cell. Cells with expected count below ``min_expected`` are
    pooled together, and the pool joins the smallest regular cell while it
    is still too small.
    """
    total = sum(hist.values())
    if total <= 0:
        raise StatisticsError("Chi-square needs a nonempty histogram.")
    mass = sum(float(p) for p in law.values())
    if mass > 1.0 + 1e-9:
        raise StatisticsError(f"Law probabilities sum to {mass}, more than 1.")

    observed: dict[Hashable, float] = {key: 0.0 for key in law}
    expected: dict[Hashable, float] = {key: total * float(p) for key, p in law.items()}
    observed[_rest] = 0.0
    expected[_rest] = total * (1.0 - mass) if mass < 1.0 - 1e-9 else 0.0
    for key, count in hist.items():
        observed[key if key in law else _rest] += count
    # drop cells with nothing expected and nothing observed
    for key in [key for key in expected if expected[key] == 0.0 and observed[key] == 0]:
        del expected[key], observed[key]

    small = [key for key in expected if expected[key] < min_expected]
    large = sorted((key for key in expected if expected[key] >= min_expected), key=lambda key: expected[key])
    pooled_obs = sum(observed[key] for key in small)
    pooled_exp = sum(expected[key] for key in small)
    f_obs = [observed[key] for key in large]
    f_exp = [expected[key] for key in large]
    if small:
        if pooled_exp < min_expected and f_obs:
            f_obs[0] += pooled_obs
            f_exp[0] += pooled_exp
        else:
            f_obs.append(pooled_obs)
            f_exp.append(pooled_exp)

    if any(e <= 0 < o for o, e in zip(f_obs, f_exp)):
        return ChiSquareResult(math.inf, 0.0, len(f_obs) - 1 - ddof, len(f_obs), len(small))
    kept = [(o, e) for o, e in zip(f_obs, f_exp) if e > 0]
    dof = len(kept) - 1 - ddof
    if dof < 1:
        raise StatisticsError(f"Only {len(kept)} cells remain after pooling; no degrees of freedom left.")

    obs = np.array([o for o, _ in kept])
    exp = np.array([e for _, e in kept])
    exp *= obs.sum() / exp.sum()
    result = stats.chisquare(obs, exp, ddof=ddof)
    return ChiSquareResult(float(result.statistic), float(result.pvalue), dof, len(kept), len(small))


def geometric_law(success: float, support: int) -> dict[int, float]:
    """P(N = k) = (1 - success)^k success for k < support."""
    return {k: (1.0 - success) ** k * success for k in range(support)}


def empirical_survival(samples: Sequence[int], low: int, high: int) -> list[tuple[int, float]]:
    """Points (n, P(X >= n)) for n in [low, high]."""
    values = np.asarray(samples)
    if values.size == 0:
        raise StatisticsError("Survival needs at least one sample.")
    return [(n, float(np.mean(values >= n))) for n in range(low, high + 1)]


@dataclass(frozen=True)
class TailFit:
    slope: float
    intercept: float
    r_squared: float
    points: int

    def to_json(self) -> dict:
        return {"slope": self.slope, "intercept": self.intercept, "r_squared": self.r_squared, "points": self.points}


def tail_fit(points: Sequence[tuple[float, float]]) -> TailFit:
    """Least squares line through (n, log S(n)) over the points with S(n) > 0."""
    usable = [(n, s) for n, s in points if s > 0]
    if len(usable) < 3:
        raise StatisticsError(f"A tail fit needs at least 3 points with positive survival, got {len(usable)}.")
    x = np.array([n for n, _ in usable], dtype=float)
    y = np.log(np.array([s for _, s in usable], dtype=float))
    if np.ptp(y) == 0:
        return TailFit(0.0, float(y[0]), 1.0, len(usable))
    fit = stats.linregress(x, y)
    return TailFit(float(fit.slope), float(fit.intercept), float(fit.rvalue ** 2), len(usable))


def correlation(x: Sequence[float], y: Sequence[float]) -> float:
    if len(x) < 2:
        raise StatisticsError("Correlation needs at least two samples.")
    result = stats.pearsonr(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    return float(result[0])


def mean_with_error(values: Sequence[float]) -> tuple[float, float]:
    """Sample mean and its standard error."""
    array = np.asarray(values, dtype=float)
    if array.size == 0:
        raise StatisticsError("No values to average.")
    error = float(array.std(ddof=1) / math.sqrt(array.size)) if array.size > 1 else 0.0
    return float(array.mean()), error
