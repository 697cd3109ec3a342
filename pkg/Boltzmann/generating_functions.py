#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

"""The generating functions f_bullet and f_diamond and their first partials.

Finite tables are summed term by term. The geometric tag q_n = lambda^n uses
closed forms in z = lambda^2 x / (1 - lambda y)^2:

    f_bullet  = lambda^2 / (1 - lambda y)^2 * g(z),  g(z) = (1 - s) / (2 z s)
    f_diamond = lambda / (1 - lambda y) * h(z),      h(z) = 1 / s

with s = sqrt(1 - 4 z).
"""

from __future__ import annotations

import math
from typing import Iterator, NamedTuple

from scipy.special import comb

from Boltzmann.weights import WeightSequence


class DivergenceError(ArithmeticError):
    """Raised when a generating function is evaluated outside its domain."""


class Partials(NamedTuple):
    value: float
    dx: float
    dy: float


def bullet_terms(q: WeightSequence, degree: int) -> Iterator[tuple[int, int, int]]:
    """(k, k', coefficient without q) of the f_bullet terms with 2 + 2k + k' = degree."""
    for k in range(0, (degree - 2) // 2 + 1):
        k_prime = degree - 2 - 2 * k
        if k_prime < 0:
            continue
        yield k, k_prime, comb(2 * k + k_prime + 1, k + 1, exact=True) * comb(k + k_prime, k, exact=True)


def diamond_terms(q: WeightSequence, degree: int) -> Iterator[tuple[int, int, int]]:
    """(k, k', coefficient without q) of the f_diamond terms with 1 + 2k + k' = degree."""
    for k in range(0, (degree - 1) // 2 + 1):
        k_prime = degree - 1 - 2 * k
        if k_prime < 0:
            continue
        yield k, k_prime, comb(2 * k + k_prime, k, exact=True) * comb(k + k_prime, k, exact=True)


def f_bullet(x: float, y: float, q: WeightSequence, tol: float = 0.0) -> float:
    """f_bullet at (x, y).

    Finite tables are summed exactly. For geometric sequences ``tol`` is the
    smallest accepted distance 1 - 4z to the singularity of the closed form;
    closer points raise :class:`DivergenceError`.
    """
    return f_bullet_partials(x, y, q, tol).value


def f_diamond(x: float, y: float, q: WeightSequence, tol: float = 0.0) -> float:
    return f_diamond_partials(x, y, q, tol).value


def f_bullet_partials(x: float, y: float, q: WeightSequence, tol: float = 0.0) -> Partials:
    _check_point(x, y, tol)
    if q.is_geometric:
        return _geometric_bullet(x, y, q.geometric_lambda, tol)
    return _table_partials(x, y, q, bullet_terms, offset=2)


def f_diamond_partials(x: float, y: float, q: WeightSequence, tol: float = 0.0) -> Partials:
    _check_point(x, y, tol)
    if q.is_geometric:
        return _geometric_diamond(x, y, q.geometric_lambda, tol)
    return _table_partials(x, y, q, diamond_terms, offset=1)


def diamond_dx_over_y(x: float, y: float, q: WeightSequence) -> float:
    """(1 / y) * d f_diamond / dx, continued to y = 0 for bipartite sequences."""
    if y > 0:
        return f_diamond_partials(x, y, q).dx / y
    if q.is_geometric:
        raise DivergenceError("Geometric sequences have y > 0 at any admissible point.")
    total = 0.0
    for degree in q.support():
        for k, k_prime, coefficient in diamond_terms(q, degree):
            # only the y-linear terms survive the division at y = 0
            if k_prime == 1 and k > 0:
                total += coefficient * q.q(degree) * k * x ** (k - 1)
    return total


def _table_partials(x, y, q, terms, offset) -> Partials:
    value = dx = dy = 0.0
    for degree in q.support():
        weight = q.q(degree)
        for k, k_prime, coefficient in terms(q, degree):
            c = coefficient * weight
            value += c * x ** k * y ** k_prime
            if k:
                dx += c * k * x ** (k - 1) * y ** k_prime
            if k_prime:
                dy += c * k_prime * x ** k * y ** (k_prime - 1)
    return Partials(value, dx, dy)


def _geometric_point(x: float, y: float, lam: float, tol: float = 0.0):
    base = 1.0 - lam * y
    if base <= 0:
        raise DivergenceError(f"lambda * y = {lam * y} >= 1, geometric series diverges.")
    z = lam * lam * x / (base * base)
    if 1.0 - 4.0 * z <= tol:
        raise DivergenceError(f"z = {z} is within {tol} of 1/4, geometric closed form diverges.")
    dz_dx = lam * lam / (base * base)
    dz_dy = 2.0 * lam ** 3 * x / base ** 3
    return base, z, dz_dx, dz_dy


def _g(z: float) -> tuple[float, float]:
    """g(z) = sum C(2k+1, k) z^k and its derivative."""
    if z < 1e-8:
        return 1.0 + 3.0 * z + 10.0 * z * z, 3.0 + 20.0 * z
    s = math.sqrt(1.0 - 4.0 * z)
    g = (1.0 - s) / (2.0 * z * s)
    dg = -(1.0 / s - 1.0) / (2.0 * z * z) + 1.0 / (z * s ** 3)
    return g, dg


def _h(z: float) -> tuple[float, float]:
    s = math.sqrt(1.0 - 4.0 * z)
    return 1.0 / s, 2.0 / s ** 3


def _geometric_bullet(x, y, lam, tol=0.0) -> Partials:
    base, z, dz_dx, dz_dy = _geometric_point(x, y, lam, tol)
    prefactor = lam * lam / (base * base)
    dprefactor_dy = 2.0 * lam ** 3 / base ** 3
    g, dg = _g(z)
    return Partials(
        prefactor * g,
        prefactor * dg * dz_dx,
        dprefactor_dy * g + prefactor * dg * dz_dy,
    )


def _geometric_diamond(x, y, lam, tol=0.0) -> Partials:
    base, z, dz_dx, dz_dy = _geometric_point(x, y, lam, tol)
    prefactor = lam / base
    dprefactor_dy = lam * lam / (base * base)
    h, dh = _h(z)
    return Partials(
        prefactor * h,
        prefactor * dh * dz_dx,
        dprefactor_dy * h + prefactor * dh * dz_dy,
    )


def _check_point(x: float, y: float, tol: float):
    if not tol >= 0:
        raise ValueError(f"tol must be a non-negative number, got {tol}.")
    if x < 0 or y < 0:
        raise DivergenceError(f"Generating functions are evaluated at x, y >= 0, got ({x}, {y}).")
