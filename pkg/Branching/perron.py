#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np

from Branching.config import (
    criticality_tolerance,
    eigen_check_tolerance,
    eigen_residual_tolerance,
    power_iteration_cap,
)
from Branching.offspring_law import (
    GeometricOffspring,
    InvalidLawError,
    OffspringLaw,
    SizeBiasedGeometricOffspring,
    TableOffspring,
)
from Trees.typed_tree import TypedTree

_logger = logging.getLogger(__name__)


class ReducibleMatrixError(ValueError):
    """Raised when the mean matrix is not irreducible."""


class ConvergenceError(RuntimeError):
    """Raised when an iterative solver hits its iteration cap."""


class Classification(Enum):
    SUBCRITICAL = "subcritical"
    CRITICAL = "critical"
    SUPERCRITICAL = "supercritical"


@dataclass(frozen=True)
class PerronData:
    M: np.ndarray
    rho: float
    a: np.ndarray
    """Left eigenvector, normalized so that its entries sum to 1."""

    b: np.ndarray
    """Right eigenvector, normalized so that a . b = 1."""

    sigma2: float | None = None
    classification: Classification | None = None
    regular: bool = False

    def b_of(self, law: OffspringLaw, label: int) -> float:
        return float(self.b[law.index_of(label)])

    def a_of(self, law: OffspringLaw, label: int) -> float:
        return float(self.a[law.index_of(label)])


def mean_matrix(law: OffspringLaw) -> np.ndarray:
    """Entry (i, j) is the expected number of type-j children of a type-i vertex."""
    return np.array([[float(x) for x in row] for row in _mean_rows(law)], dtype=float)


def exact_mean_matrix(law: OffspringLaw) -> list[list[Fraction]]:
    if not law.exact:
        raise InvalidLawError("The exact mean matrix needs a law with rational probabilities.")
    return [[Fraction(x) for x in row] for row in _mean_rows(law)]


def _mean_rows(law: OffspringLaw) -> list[list]:
    rows = []
    for offspring in law.types:
        row = [0] * law.K
        if isinstance(offspring, TableOffspring):
            for counts, prob in offspring.entries:
                for j, count in enumerate(counts):
                    row[j] += prob * count
        else:
            child = law.index_of(offspring.child_type)
            row[child] = _count_mean(offspring)
        rows.append(row)
    return rows


def _count_mean(offspring):
    p = offspring.p
    if isinstance(offspring, GeometricOffspring):
        return (1 - p) / p
    # size-biased geometric: 1 + 2 (1-p)/p
    return 1 + 2 * (1 - p) / p


def is_irreducible(M: np.ndarray) -> bool:
    k = M.shape[0]
    reach = (M > 0).astype(int) + np.eye(k, dtype=int)
    # transitive closure by repeated squaring
    for _ in range(max(1, int(np.ceil(np.log2(max(k, 2)))) + 1)):
        reach = np.minimum(reach @ reach, 1)
    return bool(np.all(reach > 0))


def perron(M: np.ndarray) -> PerronData:
    """Spectral radius and Perron eigenvectors by damped power iteration.

    Iterating on (M + I) / 2 keeps period-2 matrices from oscillating; its
    dominant eigenvalue is (rho + 1) / 2.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("Mean matrix must be square.")
    if np.any(M < 0):
        raise ValueError("Mean matrix must be nonnegative.")
    if not is_irreducible(M):
        raise ReducibleMatrixError(f"Mean matrix is reducible:\n{M}")

    damped = (M + np.eye(M.shape[0])) / 2.0
    right, right_value = _power_iteration(damped)
    left, _ = _power_iteration(damped.T)

    rho = 2.0 * right_value - 1.0
    a = left / left.sum()
    b = right / float(a @ right)

    if np.max(np.abs(a @ M - rho * a)) > eigen_check_tolerance * max(1.0, rho) or \
            np.max(np.abs(M @ b - rho * b)) > eigen_check_tolerance * max(1.0, rho) * max(1.0, np.max(b)):
        raise ConvergenceError(f"Perron vectors failed the eigen check for rho={rho}.")

    return PerronData(M=M, rho=rho, a=a, b=b)


def spectral_radius(A: np.ndarray) -> float:
    """Spectral radius of a square matrix, read off its eigenvalues.

    Stability matrices can be defective at criticality (a Jordan block at 1),
    where power iteration only converges sublinearly.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("Matrix must be square.")
    if not np.all(np.isfinite(A)):
        raise ValueError(f"Matrix has non-finite entries:\n{A}")
    return float(np.max(np.abs(np.linalg.eigvals(A))))


def _power_iteration(B: np.ndarray) -> tuple[np.ndarray, float]:
    v = np.full(B.shape[0], 1.0 / B.shape[0])
    value = 0.0
    for iteration in range(power_iteration_cap):
        w = B @ v
        value = float(w.sum())
        if value == 0.0:
            return v, 0.0
        w /= value
        if np.max(np.abs(w - v)) <= eigen_residual_tolerance:
            _logger.debug("Power iteration converged after %d steps (value %.15g)", iteration + 1, value)
            return w, value
        v = w
    raise ConvergenceError(f"Power iteration did not converge within {power_iteration_cap} steps.")


def exact_critical_perron(law: OffspringLaw) -> tuple[list[Fraction], list[Fraction]]:
    """Exact (a, b) of a critical rational law, from the kernels of M - I."""
    M = exact_mean_matrix(law)
    k = len(M)
    shifted = [[M[i][j] - (1 if i == j else 0) for j in range(k)] for i in range(k)]
    b = _kernel_vector(shifted)
    a = _kernel_vector([list(col) for col in zip(*shifted)])
    if b is None or a is None:
        raise InvalidLawError("Law is not exactly critical: 1 is not an eigenvalue of M.")
    a_total = sum(a)
    a = [x / a_total for x in a]
    scale = sum(x * y for x, y in zip(a, b))
    b = [y / scale for y in b]
    return a, b


def _kernel_vector(A: list[list[Fraction]]) -> list[Fraction] | None:
    # Gauss-Jordan elimination over the rationals
    rows = [list(r) for r in A]
    k = len(rows)
    pivots = []
    r = 0
    for c in range(k):
        pivot = next((i for i in range(r, k) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        lead = rows[r][c]
        rows[r] = [x / lead for x in rows[r]]
        for i in range(k):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(k) if c not in pivots]
    if not free:
        return None
    vector = [Fraction(0)] * k
    vector[free[0]] = Fraction(1)
    for row_index, c in enumerate(pivots):
        vector[c] = -rows[row_index][free[0]]
    return vector


def sigma2(law: OffspringLaw, a: Sequence, b: Sequence):
    """Variance constant: sum over i, j, k of a_i b_j b_k Q^(i)_{j,k}.

    Q^(i)_{j,k} = E[z_j z_k] off the diagonal and E[z_j (z_j - 1)] on it.
    Exact when the law and the vectors are rational.
    """
    total = 0
    for i, offspring in enumerate(law.types):
        if isinstance(offspring, TableOffspring):
            for counts, prob in offspring.entries:
                weighted = sum(b[j] * z for j, z in enumerate(counts))
                diagonal = sum(b[j] * b[j] * z for j, z in enumerate(counts))
                # sum_{j,k} b_j b_k z_j z_k minus the diagonal correction
                total += a[i] * prob * (weighted * weighted - diagonal)
        else:
            child = law.index_of(offspring.child_type)
            p = offspring.p
            if isinstance(offspring, GeometricOffspring):
                factorial_moment = 2 * (1 - p) ** 2 / p ** 2
            elif isinstance(offspring, SizeBiasedGeometricOffspring):
                # E[k(k-1)] of k = 1 + G1 + G2
                factorial_moment = 6 * (1 - p) ** 2 / p ** 2 + 4 * (1 - p) / p
            else:
                raise InvalidLawError(f"Unsupported offspring kind {type(offspring).__name__}.")
            total += a[i] * b[child] * b[child] * factorial_moment
    return total


@dataclass(frozen=True)
class Criticality:
    classification: Classification
    regular: bool
    perron: PerronData

    @property
    def critical(self) -> bool:
        return self.classification is Classification.CRITICAL


def classify(law: OffspringLaw) -> Criticality:
    data = perron(mean_matrix(law))

    if abs(data.rho - 1.0) <= criticality_tolerance:
        classification = Classification.CRITICAL
    elif data.rho < 1.0:
        classification = Classification.SUBCRITICAL
    else:
        classification = Classification.SUPERCRITICAL

    # finite tables and geometric tails both have small exponential moments
    regular = classification is Classification.CRITICAL and all(
        isinstance(o, (TableOffspring, GeometricOffspring)) for o in law.types
    )

    variance = float(sigma2(law, data.a, data.b))
    data = PerronData(
        M=data.M, rho=data.rho, a=data.a, b=data.b,
        sigma2=variance, classification=classification, regular=regular,
    )
    _logger.info("Law with types %s: rho=%.12g, %s%s", law.labels, data.rho,
                 classification.value, " (regular)" if regular else "")
    return Criticality(classification, regular, data)


def generation_profile(t: TypedTree, law: OffspringLaw, generations: int | None = None) -> np.ndarray:
    """Row n holds the type counts Z_n of generation n."""
    height = t.height if generations is None else generations
    profile = np.zeros((height + 1, law.K), dtype=np.int64)
    for v, depth in enumerate(t.depth):
        if depth <= height:
            profile[depth, law.index_of(t.types[v])] += 1
    return profile
