#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from Branching.offspring_law import GeometricOffspring, OffspringLaw, TableOffspring
from Periodicity.lattice import SizeVector
from Series.power_series import Number, SeriesError, SeriesSystem

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SizeDistribution:
    """c[label][n] = P(|T|_gamma = n) for a tree rooted at ``label``, for n <= N."""

    labels: tuple[int, ...]
    gamma: SizeVector
    N: int
    exact: bool
    coefficients: tuple[tuple[Number, ...], ...]

    def of(self, label: int) -> tuple[Number, ...]:
        return self.coefficients[self.labels.index(label)]

    def probability(self, label: int, n: int) -> Number:
        if n > self.N:
            raise SeriesError(f"Size {n} lies beyond the truncation degree {self.N}.")
        if n < 0:
            return Fraction(0) if self.exact else 0.0
        return self.of(label)[n]

    def mass(self, label: int) -> Number:
        return sum(self.of(label), Fraction(0) if self.exact else 0.0)

    def support(self, label: int) -> list[int]:
        return [n for n, c in enumerate(self.of(label)) if c != 0]

    def partial_mean(self, label: int, cutoff: int | None = None) -> Number:
        """sum_{n <= cutoff} n c[n]."""
        cutoff = self.N if cutoff is None else min(cutoff, self.N)
        coefficients = self.of(label)
        return sum((n * coefficients[n] for n in range(cutoff + 1)), Fraction(0) if self.exact else 0.0)

    def to_json(self) -> dict[str, Any]:
        return {
            "gamma": list(self.gamma.weights),
            "N": self.N,
            "exact": self.exact,
            "coefficients": {
                str(label): [str(c) if self.exact else float(c) for c in values]
                for label, values in zip(self.labels, self.coefficients)
            },
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def build_system(law: OffspringLaw, N: int, exact: bool, shifts: Sequence[int],
                 frozen: int | None = None) -> tuple[SeriesSystem, list]:
    """The system psi_i = z^{shifts_i} F_i(psi); a ``frozen`` law index is pinned to psi = z.

    Returns the system with the F_i nodes in law order.
    """
    system = SeriesSystem(law.K, N, exact)
    right_sides = []
    for i, offspring in enumerate(law.types):
        right_sides.append(_generating_function(system, law, offspring, exact))
    for i in range(law.K):
        if i == frozen:
            system.define(i, system.constant(1), shift=1)
        else:
            system.define(i, right_sides[i], shift=shifts[i])
    return system, right_sides


def _generating_function(system: SeriesSystem, law: OffspringLaw, offspring, exact: bool):
    if isinstance(offspring, TableOffspring):
        terms = [(_number(prob, exact), system.monomial(counts)) for counts, prob in offspring.entries if prob != 0]
        return system.linear(terms)
    if isinstance(offspring, GeometricOffspring):
        p = _number(offspring.p, exact)
        child = law.index_of(offspring.child_type)
        return system.geometric(p, 1 - p, system.variable(child))
    raise SeriesError(f"No generating function for {type(offspring).__name__} offspring.")


def _number(value, exact: bool) -> Number:
    if exact:
        if not isinstance(value, Fraction):
            raise SeriesError("Exact series need a law with Fraction probabilities.")
        return value
    return float(value)


def size_dist(law: OffspringLaw, gamma: SizeVector, N: int, exact: bool | None = None) -> SizeDistribution:
    exact = law.exact if exact is None else exact
    weights = gamma.for_law(law).weights
    system, _ = build_system(law, N, exact, weights)
    coefficients = system.solve()
    _logger.debug("Solved size series of types %s up to degree %d (%s)", law.labels, N,
                  "exact" if exact else "float")
    return SizeDistribution(
        labels=law.labels,
        gamma=gamma.for_law(law),
        N=N,
        exact=exact,
        coefficients=tuple(_freeze(values, exact) for values in coefficients),
    )


def forest_size_dist(law: OffspringLaw, gamma: SizeVector, word: Sequence[int], N: int,
                     exact: bool | None = None, single: SizeDistribution | None = None) -> tuple[Number, ...]:
    """Size distribution of independent trees rooted at the letters of ``word``."""
    single = single if single is not None else size_dist(law, gamma, N, exact)
    if single.N < N:
        raise SeriesError(f"Component distributions reach degree {single.N}, {N} is needed.")
    result: list[Number] = [Fraction(1) if single.exact else 1.0] + [Fraction(0) if single.exact else 0.0] * N
    for letter in word:
        result = truncated_product(result, single.of(letter)[:N + 1], N, single.exact)
    return _freeze(result, single.exact)


def truncated_product(a: Sequence[Number], b: Sequence[Number], N: int, exact: bool) -> list[Number]:
    if not exact:
        return list(np.convolve(np.asarray(a, dtype=float), np.asarray(b, dtype=float))[:N + 1]) + \
            [0.0] * max(0, N + 1 - (len(a) + len(b) - 1))
    out = [Fraction(0)] * (N + 1)
    for i, x in enumerate(a):
        if x == 0 or i > N:
            continue
        for j in range(min(len(b), N + 1 - i)):
            out[i + j] += x * b[j]
    return out


def first_gen_dist(law: OffspringLaw, i: int, j: int, N: int, exact: bool | None = None) -> tuple[Number, ...]:
    """mu_{i,j}: the size of the first type-j generation of a type-i root, up to N."""
    exact = law.exact if exact is None else exact
    source, frozen = law.index_of(i), law.index_of(j)
    system, right_sides = build_system(law, N, exact, [0] * law.K, frozen=frozen)
    system.solve()
    node = right_sides[frozen] if source == frozen else system.variable(source)
    return _freeze(node.coeffs, exact)


def _freeze(values, exact: bool) -> tuple[Number, ...]:
    if exact:
        return tuple(values)
    return tuple(float(v) for v in values)
