#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

"""Degree-by-degree solver for systems of truncated power series.

The unknown series psi_1..psi_K satisfy psi_i = z^{g_i} F_i(psi) where each
F_i is a probability generating function built from products, powers, sums
and the geometric form p / (1 - q S). Coefficients are produced online: the
degree-n coefficient of every node only needs degree-n coefficients of its
inputs besides committed lower ones, so a whole system is solved in one
pass over the degrees.

Types with g_i >= 1 read psi_i[n] off F_i[n - g_i]. Types with g_i = 0 enter
the degree-n equations affinely for n >= 1 and are solved by a small linear
system; degree 0 is a nonlinear fixed point iterated from zero.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

_logger = logging.getLogger(__name__)

Number = Union[float, Fraction]

# exact degree-0 iteration must settle within this many sweeps
exact_constant_iteration_cap = 500
float_constant_iteration_cap = 10 ** 6
float_constant_tolerance = 1e-16


class SeriesError(RuntimeError):
    """Raised for iteration caps and zero denominators in series arithmetic."""


class _Node:
    def __init__(self, engine: "SeriesSystem"):
        self.engine = engine
        self.coeffs = engine.storage()
        self._pass = -1
        self._value: Number = 0
        engine.nodes.append(self)

    def at(self, n: int) -> Number:
        """Coefficient ``n`` in the current pass (committed below ``n``)."""
        engine = self.engine
        if self._pass != engine.pass_id:
            self._value = self._compute(n)
            self._pass = engine.pass_id
        return self._value

    def commit(self, n: int):
        self.coeffs[n] = self.at(n)

    def _compute(self, n: int) -> Number:
        raise NotImplementedError


class _Constant(_Node):
    def __init__(self, engine, value: Number):
        self.value = value
        super().__init__(engine)

    def _compute(self, n):
        return self.value if n == 0 else self.engine.zero


class _Variable(_Node):
    def __init__(self, engine, index: int):
        self.index = index
        super().__init__(engine)

    def _compute(self, n):
        return self.engine.trial[self.index]


class _Product(_Node):
    def __init__(self, engine, left: _Node, right: _Node):
        self.left = left
        self.right = right
        super().__init__(engine)

    def _compute(self, n):
        a, b = self.left, self.right
        if n == 0:
            return a.at(0) * b.at(0)
        total = a.coeffs[0] * b.at(n) + a.at(n) * b.coeffs[0]
        if n > 1:
            total += self.engine.convolve(a.coeffs, b.coeffs, n)
        return total


class _Geometric(_Node):
    """p / (1 - q S)."""

    def __init__(self, engine, p: Number, q: Number, series: _Node):
        self.p = p
        self.q = q
        self.series = series
        super().__init__(engine)

    def _compute(self, n):
        s0 = self.series.at(0) if n == 0 else self.series.coeffs[0]
        denominator = 1 - self.q * s0
        if denominator == 0:
            raise SeriesError("Geometric composition divides by a series with zero constant term.")
        if n == 0:
            return self.p / denominator
        total = self.series.at(n) * self.coeffs[0]
        if n > 1:
            total += self.engine.convolve(self.series.coeffs, self.coeffs, n)
        return self.q * total / denominator


class _Sum(_Node):
    def __init__(self, engine, terms: Sequence[tuple[Number, _Node]]):
        self.terms = tuple(terms)
        super().__init__(engine)

    def _compute(self, n):
        total = self.engine.zero
        for weight, node in self.terms:
            total += weight * node.at(n)
        return total


class SeriesSystem:
    """A system psi_i = z^{shift_i} F_i(psi) truncated at degree ``N``.

    Build it with :meth:`variable`, :meth:`product`, :meth:`power`,
    :meth:`monomial`, :meth:`geometric` and :meth:`linear`, set the right-hand
    sides with :meth:`define` and call :meth:`solve`.
    """

    def __init__(self, size: int, N: int, exact: bool):
        if N < 0:
            raise SeriesError(f"Truncation degree must be >= 0, got {N}.")
        self.size = size
        self.N = N
        self.exact = exact
        self.zero: Number = Fraction(0) if exact else 0.0
        self.one: Number = Fraction(1) if exact else 1.0
        self.nodes: list[_Node] = []
        self.pass_id = 0
        self.trial: list[Number] = [self.zero] * size
        self.variables = [_Variable(self, i) for i in range(size)]
        self.right_sides: list[_Node | None] = [None] * size
        self.shifts: list[int] = [0] * size
        self._powers: dict[tuple[int, int], _Node] = {}
        self._monomials: dict[tuple[int, ...], _Node] = {}
        self._unit = _Constant(self, self.one)

    # --- arithmetic backend ---------------------------------------------------

    def storage(self):
        if self.exact:
            return [Fraction(0)] * (self.N + 1)
        return np.zeros(self.N + 1)

    def convolve(self, a, b, n: int) -> Number:
        """sum_{k=1}^{n-1} a[k] b[n-k]."""
        if self.exact:
            return sum((a[k] * b[n - k] for k in range(1, n)), Fraction(0))
        return float(np.dot(a[1:n], b[n - 1:0:-1]))

    # --- construction -----------------------------------------------------------

    def variable(self, index: int) -> _Node:
        return self.variables[index]

    def constant(self, value: Number) -> _Node:
        return self._unit if value == 1 else _Constant(self, value)

    def product(self, left: _Node, right: _Node) -> _Node:
        return _Product(self, left, right)

    def power(self, index: int, exponent: int) -> _Node:
        if exponent == 0:
            return self._unit
        if exponent == 1:
            return self.variables[index]
        key = (index, exponent)
        if key not in self._powers:
            self._powers[key] = _Product(self, self.power(index, exponent - 1), self.variables[index])
        return self._powers[key]

    def monomial(self, counts: Sequence[int]) -> _Node:
        """prod_j psi_j^{counts_j}, sharing prefixes between monomials."""
        counts = tuple(counts)
        if counts in self._monomials:
            return self._monomials[counts]
        last = max((j for j, c in enumerate(counts) if c), default=None)
        if last is None:
            node = self._unit
        else:
            head = counts[:last] + (0,) * (len(counts) - last)
            rest = self.monomial(head)
            factor = self.power(last, counts[last])
            node = factor if rest is self._unit else _Product(self, rest, factor)
        self._monomials[counts] = node
        return node

    def geometric(self, p: Number, q: Number, series: _Node) -> _Node:
        return _Geometric(self, p, q, series)

    def linear(self, terms: Sequence[tuple[Number, _Node]]) -> _Node:
        return _Sum(self, terms)

    def define(self, index: int, right_side: _Node, shift: int):
        if shift < 0:
            raise SeriesError("Size weights are nonnegative.")
        self.right_sides[index] = right_side
        self.shifts[index] = shift

    # --- solving ------------------------------------------------------------------

    def solve(self) -> list:
        if any(side is None for side in self.right_sides):
            raise SeriesError("Every series of the system needs a right-hand side.")
        free = [i for i in range(self.size) if self.shifts[i] == 0]

        for n in range(self.N + 1):
            for i in range(self.size):
                shift = self.shifts[i]
                if shift:
                    self.trial[i] = self.right_sides[i].coeffs[n - shift] if n >= shift else self.zero
            if free:
                values = self._solve_constant(free) if n == 0 else self._solve_affine(free, n)
                for i, value in zip(free, values):
                    self.trial[i] = value
            self._new_pass()
            for node in self.nodes:
                node.commit(n)

        return [variable.coeffs for variable in self.variables]

    def _new_pass(self):
        self.pass_id += 1

    def _evaluate_free(self, free: list[int], n: int, values: Sequence[Number]) -> list[Number]:
        for i, value in zip(free, values):
            self.trial[i] = value
        self._new_pass()
        return [self.right_sides[i].at(n) for i in free]

    def _solve_constant(self, free: list[int]) -> list[Number]:
        values = [self.zero] * len(free)
        cap = exact_constant_iteration_cap if self.exact else float_constant_iteration_cap
        for sweep in range(cap):
            updated = self._evaluate_free(free, 0, values)
            if self.exact:
                if updated == values:
                    return values
            elif max(abs(u - v) for u, v in zip(updated, values)) < float_constant_tolerance:
                return updated
            values = updated
        raise SeriesError(
            f"Constant terms of the zero-weight types {free} did not settle within {cap} sweeps; "
            "use float mode or give those types positive weight."
        )

    def _solve_affine(self, free: list[int], n: int) -> list[Number]:
        size = len(free)
        base = self._evaluate_free(free, n, [self.zero] * size)
        columns = []
        for k in range(size):
            unit = [self.zero] * size
            unit[k] = self.one
            shifted = self._evaluate_free(free, n, unit)
            columns.append([shifted[r] - base[r] for r in range(size)])

        # (I - J) u = base with J[r][k] = columns[k][r]
        matrix = [[(self.one if r == k else self.zero) - columns[k][r] for k in range(size)] for r in range(size)]
        if self.exact:
            return _solve_exact(matrix, base)
        try:
            return list(np.linalg.solve(np.array(matrix, dtype=float), np.array(base, dtype=float)))
        except np.linalg.LinAlgError as exc:
            raise SeriesError(f"Singular degree-{n} system for the zero-weight types {free}.") from exc


def _solve_exact(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    size = len(rhs)
    rows = [list(row) + [value] for row, value in zip(matrix, rhs)]
    for column in range(size):
        pivot = next((r for r in range(column, size) if rows[r][column] != 0), None)
        if pivot is None:
            raise SeriesError("Singular system for the zero-weight types.")
        rows[column], rows[pivot] = rows[pivot], rows[column]
        for r in range(size):
            if r != column and rows[r][column] != 0:
                factor = rows[r][column] / rows[column][column]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[column])]
    return [rows[r][size] / rows[r][r] for r in range(size)]
