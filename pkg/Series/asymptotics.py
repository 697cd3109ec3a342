#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

"""Numeric checks of the size asymptotics of critical multi-type trees and forests."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

from Branching.offspring_law import OffspringLaw
from Branching.perron import PerronData, classify
from Periodicity.lattice import SizeVector, period
from Series.power_series import SeriesError
from Series.random_walk import step_law, walk_dist
from Series.size_distribution import forest_size_dist, size_dist

_logger = logging.getLogger(__name__)


def forest_weight(law: OffspringLaw, perron: PerronData, word: Sequence[int]) -> float:
    """Z_w = sum of b over the letters of ``word``."""
    return sum(perron.b_of(law, letter) for letter in word)


def hw_ratio(law: OffspringLaw, gamma: SizeVector, word: Sequence[int], n: int, exact: bool = False) -> float:
    """P^(w)(|F| = alpha_w + dn) / P^(1)(|T| = alpha_1 + dn); tends to Z_w / b_1."""
    lattice = period(law, gamma)
    first = law.labels[0]
    forest_index = lattice.word_residue(word) + lattice.d * n
    tree_index = lattice.alpha_of(first) + lattice.d * n

    single = size_dist(law, gamma, max(forest_index, tree_index), exact)
    forest = forest_size_dist(law, gamma, word, forest_index, single=single)
    denominator = single.probability(first, tree_index)
    if denominator == 0:
        raise SeriesError(f"P(|T| = {tree_index}) vanishes; {n} is below the first realized size.")
    return float(forest[forest_index] / denominator)


@dataclass(frozen=True)
class HPrimeCheck:
    n: int
    size: int
    measured: float
    predicted: float

    @property
    def relative_error(self) -> float:
        return abs(self.measured - self.predicted) / self.predicted


def hprime_check(law: OffspringLaw, gamma: SizeVector, word: Sequence[int], n: int) -> HPrimeCheck:
    """Measured P^(w)(|F| = alpha_w + dn) against Z_w sqrt(gamma.a / (2 pi d sigma^2 n^3))."""
    criticality = classify(law)
    if not criticality.regular:
        raise SeriesError("The local size asymptotics need a regular critical law.")
    data = criticality.perron
    lattice = period(law, gamma)

    index = lattice.word_residue(word) + lattice.d * n
    measured = float(forest_size_dist(law, gamma, word, index, exact=False)[index])
    gamma_a = gamma.dot(data.a, law)
    predicted = forest_weight(law, data, word) * math.sqrt(
        gamma_a / (2.0 * math.pi * lattice.d * data.sigma2 * n ** 3)
    )
    _logger.debug("Size %d of root word %s: measured %.6g, predicted %.6g", index, tuple(word), measured, predicted)
    return HPrimeCheck(n=n, size=index, measured=measured, predicted=predicted)


def strong_ratio(law: OffspringLaw, n: int) -> float:
    """P(S_{dn} = 0) / P(S_{d(n+1)} = 0), with d the period of mu_{1,1}."""
    first = law.labels[0]
    gamma = SizeVector(tuple(1 if label == first else 0 for label in law.labels), law.labels)
    d = period(law, gamma).d
    N = d * (n + 1)
    steps = step_law(law, N, exact=False)
    here = walk_dist(law, d * n, N, steps=steps).probability(0)
    there = walk_dist(law, d * (n + 1), N, steps=steps).probability(0)
    if there == 0:
        raise SeriesError(f"P(S_{d * (n + 1)} = 0) vanishes.")
    return float(here / there)


def partial_mean_growth(law: OffspringLaw, low: int, high: int, gamma: SizeVector | None = None) -> float:
    """Ratio of the partial means sum_{n <= N} n P(|T| = n) at N = high and N = low."""
    if not 0 < low < high:
        raise SeriesError("Partial means need 0 < low < high.")
    gamma = gamma or SizeVector((1,) * law.K, law.labels)
    distribution = size_dist(law, gamma, high, exact=False)
    first = law.labels[0]
    base = distribution.partial_mean(first, low)
    if base == 0:
        raise SeriesError(f"No realized size up to {low}.")
    return float(distribution.partial_mean(first, high) / base)
