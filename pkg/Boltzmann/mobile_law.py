#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

"""The four-type mobile law attached to an admissible weight sequence.

Type 1 (labelled vertices) has a geometric number of type-3 children, type 2
(flagged edges) has one type-4 child, and types 3 and 4 (faces) have ``k``
type-1 and ``k'`` type-2 children with binomial weights normalised by
f_bullet and f_diamond. Bipartite sequences only reach types 1 and 3.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

from Boltzmann.config import truncation_bound, truncation_degree_cap
from Boltzmann.generating_functions import bullet_terms, diamond_terms
from Boltzmann.weights import WeightSequence
from Branching.offspring_law import GeometricOffspring, OffspringLaw, TableOffspring

if TYPE_CHECKING:
    from Boltzmann.admissibility import BoltzmannSolution

_logger = logging.getLogger(__name__)

MOBILE_LABELS = (1, 2, 3, 4)
BIPARTITE_MOBILE_LABELS = (1, 3)


@dataclass(frozen=True)
class MobileLaw:
    law: OffspringLaw
    bipartite: bool
    truncation_bound: float = 0.0
    """Mass dropped from the face tables of a geometric sequence before renormalising."""

    truncation_degree: int | None = None


def derive_mobile_law(solution: "BoltzmannSolution") -> MobileLaw:
    solution.require_admissible()
    q = solution.weights
    x, y = solution.x, solution.y

    labels = BIPARTITE_MOBILE_LABELS if solution.bipartite else MOBILE_LABELS
    width = len(labels)

    bullet, bullet_dropped, degree = _face_table(q, x, y, bullet_terms, offset=2)
    face_entries = tuple((_counts(width, k, k_prime), weight) for (k, k_prime), weight in bullet)

    types = [GeometricOffspring(3, 1.0 / x)]
    dropped = bullet_dropped
    if solution.bipartite:
        types.append(TableOffspring(face_entries))
    else:
        diamond, diamond_dropped, diamond_degree = _face_table(q, x, y, diamond_terms, offset=1)
        types.append(TableOffspring((((0, 0, 0, 1), 1.0),)))
        types.append(TableOffspring(face_entries))
        types.append(TableOffspring(tuple((_counts(width, k, k_prime), weight) for (k, k_prime), weight in diamond)))
        dropped = max(dropped, diamond_dropped)
        degree = None if degree is None else max(degree, diamond_degree)

    law = OffspringLaw(tuple(types), labels)
    if dropped:
        _logger.info("Mobile law of %s truncated at face degree %s, dropped mass %.3g", q.to_json(), degree, dropped)
    return MobileLaw(law=law, bipartite=solution.bipartite, truncation_bound=dropped, truncation_degree=degree)


def _counts(width: int, k: int, k_prime: int) -> tuple[int, ...]:
    if width == 2:
        return k, 0
    return k, k_prime, 0, 0


def _face_table(q: WeightSequence, x: float, y: float, terms, offset: int):
    """Normalised {(k, k'): probability} for one face type, with the dropped mass and cut degree."""
    weights: dict[tuple[int, int], float] = {}
    dropped = 0.0
    cut = None

    if q.is_geometric:
        total = 0.0
        previous = None
        for degree in range(offset, truncation_degree_cap + 1):
            layer = 0.0
            for k, k_prime, _ in terms(q, degree):
                weight = math.exp(_log_term(k, k_prime, offset) + k * math.log(x)
                                  + k_prime * math.log(y) + degree * math.log(q.geometric_lambda))
                if weight > 0:
                    weights[(k, k_prime)] = weight
                    layer += weight
            total += layer
            if previous and layer > 0 and layer < truncation_bound * total:
                ratio = layer / previous
                if ratio < 1:
                    dropped = layer * ratio / (1.0 - ratio) / total
                    cut = degree
                    break
            previous = layer
        else:
            cut = truncation_degree_cap
            dropped = previous / total if previous else 0.0
    else:
        for degree in q.support():
            weight_q = q.q(degree)
            for k, k_prime, coefficient in terms(q, degree):
                if k_prime and y == 0:
                    continue
                weights[(k, k_prime)] = weights.get((k, k_prime), 0.0) + coefficient * weight_q * x ** k * y ** k_prime

    total = sum(weights.values())
    table = sorted((key, weight / total) for key, weight in weights.items() if weight > 0)
    return table, dropped, cut


def _log_term(k: int, k_prime: int, offset: int) -> float:
    if offset == 2:
        return _log_comb(2 * k + k_prime + 1, k + 1) + _log_comb(k + k_prime, k)
    return _log_comb(2 * k + k_prime, k) + _log_comb(k + k_prime, k)


def _log_comb(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
