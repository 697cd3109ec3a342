#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

"""The left-continuous walk S_n whose steps are mu_{1,1} - 1, and the cyclic lemma."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from Branching.offspring_law import OffspringLaw
from Periodicity.lattice import SizeVector, period
from Series.power_series import Number, SeriesError
from Series.size_distribution import first_gen_dist, size_dist, truncated_product


@dataclass(frozen=True)
class WalkDistribution:
    """P(S_n = k) for -n <= k <= N - n, stored from k = -n."""

    n: int
    coefficients: tuple[Number, ...]

    def probability(self, k: int) -> Number:
        index = k + self.n
        if index < 0:
            return self.coefficients[0] * 0
        if index >= len(self.coefficients):
            raise SeriesError(f"P(S_{self.n} = {k}) lies beyond the truncation.")
        return self.coefficients[index]


def step_law(law: OffspringLaw, N: int, exact: bool | None = None) -> tuple[Number, ...]:
    """mu_{1,1} truncated at N, with type 1 the first type of the law."""
    first = law.labels[0]
    return first_gen_dist(law, first, first, N, exact)


def walk_dist(law: OffspringLaw, n: int, N: int, exact: bool | None = None,
              steps: Sequence[Number] | None = None) -> WalkDistribution:
    """Law of S_n through coefficients 0..N of the n-fold convolution of mu_{1,1}."""
    if n < 0:
        raise SeriesError(f"Walk length must be >= 0, got {n}.")
    steps = tuple(steps) if steps is not None else step_law(law, N, exact)
    exact = isinstance(steps[0], Fraction)
    zero, one = (Fraction(0), Fraction(1)) if exact else (0.0, 1.0)

    result: list[Number] = [one] + [zero] * N
    power = list(steps[:N + 1]) + [zero] * max(0, N + 1 - len(steps))
    remaining = n
    while remaining:
        if remaining & 1:
            result = truncated_product(result, power, N, exact)
        remaining >>= 1
        if remaining:
            power = truncated_product(power, power, N, exact)
    return WalkDistribution(n=n, coefficients=tuple(result[:N + 1]))


@dataclass(frozen=True)
class CyclicCheck:
    size: int
    lhs: Number
    rhs: Number

    @property
    def difference(self) -> Number:
        return abs(self.lhs - self.rhs)


def cyclic_check(law: OffspringLaw, n: int, exact: bool | None = None) -> CyclicCheck:
    """P(#_1 T = 1 + d n) against P(S_{1 + d n} = -1) / (1 + d n)."""
    first = law.labels[0]
    gamma = SizeVector(tuple(1 if label == first else 0 for label in law.labels), law.labels)
    d = period(law, gamma).d
    m = 1 + d * n

    lhs = size_dist(law, gamma, m, exact).probability(first, m)
    walk = walk_dist(law, m, m, exact)
    rhs = walk.probability(-1) / m
    return CyclicCheck(size=m, lhs=lhs, rhs=rhs)
