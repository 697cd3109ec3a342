#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

from __future__ import annotations

import math
from dataclasses import dataclass

from Boltzmann.admissibility import BoltzmannSolution
from Boltzmann.weights import InvalidWeightsError, WeightSequence
from Periodicity.lattice import SizeVector, default_period_budget, period

# size functionals on mobile types (1, 2, 3, 4) counting vertices, edges and faces
MAP_SIZE_VECTORS = {
    "V": SizeVector((1, 0, 0, 0)),
    "E": SizeVector((1, 0, 1, 1)),
    "F": SizeVector((0, 0, 1, 1)),
}

# geometric sequences have full support; their gcds are settled far below this
_geometric_support_limit = 64


@dataclass(frozen=True)
class MapPeriods:
    d_V: int
    d_E: int
    d_F: int
    alpha_V: int = 2
    alpha_E: int = 0
    alpha_F: int = 0

    def d(self, kind: str) -> int:
        return {"V": self.d_V, "E": self.d_E, "F": self.d_F}[kind]

    def alpha(self, kind: str) -> int:
        return {"V": self.alpha_V, "E": self.alpha_E, "F": self.alpha_F}[kind]


def map_periods(q: WeightSequence) -> MapPeriods:
    support = set(q.support(_geometric_support_limit if q.is_geometric else None))
    if not support:
        raise InvalidWeightsError("Empty weight support.")

    odd_m = {m for m in range(1, max(support) + 1, 2)}
    d_V = _gcd_of({n for n in range(0, max(support)) if 2 * n + 2 in support}
                  | {m for m in odd_m if m + 2 in support})
    d_E = _gcd_of({n for n in range(1, max(support) + 1) if 2 * n in support}
                  | {m for m in odd_m if m in support})
    d_F = 1 if any(n % 2 == 0 for n in support) else 2
    return MapPeriods(d_V=d_V, d_E=d_E, d_F=d_F)


def _gcd_of(values: set[int]) -> int:
    d = 0
    for value in values:
        d = math.gcd(d, value)
    if d == 0:
        raise InvalidWeightsError("The gcd set is empty or {0}; no map lattice is defined.")
    return d


@dataclass(frozen=True)
class MapLatticeCheck:
    kind: str
    d_tree: int
    d_map: int
    alpha_1: int
    gamma_1: int
    alpha_2: int | None

    @property
    def periods_agree(self) -> bool:
        return self.d_tree == self.d_map

    @property
    def root_residue_agrees(self) -> bool:
        return (self.alpha_1 - self.gamma_1) % self.d_tree == 0

    @property
    def null_residue_agrees(self) -> bool:
        if self.alpha_2 is None:
            return True
        return (2 * self.alpha_2 - self.alpha_1) % self.d_tree == 0

    @property
    def ok(self) -> bool:
        return self.periods_agree and self.root_residue_agrees and self.null_residue_agrees


def check_map_lattice(solution: BoltzmannSolution, budget: int = default_period_budget) -> list[MapLatticeCheck]:
    """Compares the tree lattice of the mobile law with the map periods, per size kind."""
    law = solution.mobile_law.law
    periods = map_periods(solution.weights)
    checks = []
    for kind, gamma in MAP_SIZE_VECTORS.items():
        data = period(law, gamma, budget)
        checks.append(MapLatticeCheck(
            kind=kind,
            d_tree=data.d,
            d_map=periods.d(kind),
            alpha_1=data.alpha_of(1),
            gamma_1=gamma.weight(1),
            alpha_2=None if 2 not in law.labels else data.alpha_of(2),
        ))
    return checks
