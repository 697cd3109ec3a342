#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

from __future__ import annotations

import bisect
from fractions import Fraction
from typing import Sequence

import numpy as np

from Branching.config import size_bias_tolerance
from Branching.offspring_law import (
    GeometricOffspring,
    OffspringLaw,
    SizeBiasedGeometricOffspring,
    TableOffspring,
)


class NotCriticalError(ValueError):
    """Raised when an operation needs a critical law."""


def size_bias(law: OffspringLaw, b: Sequence) -> OffspringLaw:
    """Spine offspring law: zeta_hat(x) = (1 / b_j) * sum_l b_{x_l} * zeta(x).

    The bias only depends on the count vector, so uniform ordering carries
    over. Geometric families become the closed-form size-biased family.
    """
    exact = law.exact and all(isinstance(x, Fraction) for x in b)
    types = []
    for index, offspring in enumerate(law.types):
        label = law.labels[index]
        if isinstance(offspring, TableOffspring):
            entries = []
            total = 0
            for counts, prob in offspring.entries:
                weight = sum(b[j] * z for j, z in enumerate(counts))
                biased = prob * weight / b[index]
                if biased != 0:
                    entries.append((counts, biased))
                    total += biased
            _check_total(label, total, exact)
            if not exact:
                entries = [(counts, p / total) for counts, p in entries]
            types.append(TableOffspring(tuple(entries)))

        elif isinstance(offspring, GeometricOffspring):
            child = law.index_of(offspring.child_type)
            # k p (1-p)^k b_child / b_j sums to mean * b_child / b_j
            _check_total(label, offspring.mean() * b[child] / b[index], exact)
            types.append(SizeBiasedGeometricOffspring(offspring.child_type, offspring.p))

        else:
            raise NotCriticalError(f"Type {label} is already size-biased.")

    return OffspringLaw(tuple(types), law.labels, check_degeneracy=False)


def _check_total(label: int, total, exact: bool):
    if exact:
        if total != 1:
            raise NotCriticalError(f"Size-biased mass of type {label} is {total}; the law is not critical.")
    elif abs(float(total) - 1.0) > size_bias_tolerance:
        raise NotCriticalError(f"Size-biased mass of type {label} is {float(total)}; the law is not critical.")


def spine_child_index(rng: np.random.Generator, word: Sequence[int], b: Sequence, law: OffspringLaw) -> int:
    """Index j (0-based) of the next spine vertex, with probability b_{w_j} / sum_l b_{w_l}."""
    if not word:
        raise ValueError("The spine cannot continue through an empty offspring word.")
    cumulative = []
    total = 0.0
    for letter in word:
        total += float(b[law.index_of(letter)])
        cumulative.append(total)
    index = bisect.bisect_right(cumulative, rng.random() * total)
    return min(index, len(word) - 1)
