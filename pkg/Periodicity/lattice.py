#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

"""Size functionals and the lattice (d, alpha) of reachable tree sizes.

Reachable sizes are computed per root type as a monotone fixpoint of capped
sumsets over the offspring supports. Sets of sizes are Python integers used
as bitmasks (bit n set when size n is reachable), capped at the budget.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

from Branching.offspring_law import OffspringLaw, TableOffspring
from Trees.typed_tree import Forest, TypedTree

_logger = logging.getLogger(__name__)

default_period_budget = 24


class PeriodError(RuntimeError):
    """Raised when the enumeration budget yields no lattice information."""


class LatticeError(ValueError):
    """Raised for sizes outside the lattice of realizable sizes."""


@dataclass(frozen=True)
class SizeVector:
    """Nonnegative integer weights gamma per type label."""

    weights: tuple[int, ...]
    labels: tuple[int, ...] = ()

    def __post_init__(self):
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(1, len(self.weights) + 1)))
        if len(self.weights) != len(self.labels):
            raise ValueError("One weight per type label is needed.")
        if any(w < 0 for w in self.weights) or not any(self.weights):
            raise ValueError(f"Size weights must be nonnegative and not all zero, got {self.weights}.")

    def weight(self, label: int) -> int:
        try:
            return self.weights[self.labels.index(label)]
        except ValueError:
            return 0

    def for_law(self, law: OffspringLaw) -> "SizeVector":
        """Projection onto the types the law carries, in law order."""
        return SizeVector(tuple(self.weight(label) for label in law.labels), law.labels)

    def dot(self, values: Sequence[float], law: OffspringLaw) -> float:
        return sum(self.weight(label) * values[i] for i, label in enumerate(law.labels))

    @property
    def single_type(self) -> int | None:
        nonzero = [label for w, label in zip(self.weights, self.labels) if w]
        if len(nonzero) == 1 and self.weight(nonzero[0]) == 1:
            return nonzero[0]
        return None


def size(t: TypedTree | Forest, gamma: SizeVector) -> int:
    if isinstance(t, Forest):
        return sum(size(tree, gamma) for tree in t.trees)
    return sum(gamma.weight(label) * count for label, count in t.count_types().items())


@dataclass(frozen=True)
class PeriodData:
    d: int
    alpha: tuple[int, ...]
    """Residue per law type, in law order."""

    labels: tuple[int, ...]
    first_sizes: tuple[int, ...]
    """Smallest realized size per root type."""

    missing: tuple[tuple[int, ...], ...]
    """Lattice points within the budget that are not realized, per root type."""

    budget: int

    def alpha_of(self, label: int) -> int:
        return self.alpha[self.labels.index(label)]

    def word_residue(self, word: Sequence[int]) -> int:
        return sum(self.alpha_of(letter) for letter in word) % self.d

    def check_target(self, word: Sequence[int], target: int):
        residue = self.word_residue(word)
        if target < 0 or target % self.d != residue:
            raise LatticeError(
                f"Size {target} is off the lattice {residue} + {self.d}Z for root word {tuple(word)}."
            )


def period(law: OffspringLaw, gamma: SizeVector, budget: int = default_period_budget) -> PeriodData:
    weights = gamma.for_law(law).weights
    reach = _reachable_sizes(law, weights, budget)

    empty = [law.labels[i] for i, mask in enumerate(reach) if mask == 0]
    if empty:
        raise PeriodError(
            f"No complete tree of size <= {budget} from root types {empty}; increase the period budget."
        )

    sizes = [_bits(mask) for mask in reach]
    d = 0
    for values in sizes:
        for s in values[1:]:
            d = math.gcd(d, s - values[0])
    if d == 0:
        raise PeriodError(f"Every root type has a single size below {budget}; increase the period budget.")

    alpha = tuple(values[0] % d for values in sizes)
    missing = tuple(
        tuple(n for n in range(values[0], budget + 1, d) if n not in set(values)) for values in sizes
    )

    single = gamma.single_type
    if single is not None and single in law.labels:
        expected = first_generation_period(law, single, budget)
        if expected and expected != d:
            _logger.warning("Enumerated period %d differs from the first-generation period %d of type %d "
                            "(budget %d).", d, expected, single, budget)

    return PeriodData(
        d=d,
        alpha=alpha,
        labels=law.labels,
        first_sizes=tuple(values[0] for values in sizes),
        missing=missing,
        budget=budget,
    )


def first_generation_period(law: OffspringLaw, label: int, budget: int = default_period_budget) -> int:
    """gcd of the support of the first-generation law of ``label`` from a ``label`` root.

    Counts the first descendants of type ``label`` along every line, the other
    types being expanded.
    """
    frozen = law.index_of(label)
    weights = [0] * law.K
    # frozen type contributes 1 and stops
    reach = _reachable_sizes(law, weights, budget, frozen=frozen)
    root = _expand(law, frozen, reach, budget, frozen=frozen)
    support = _bits(root)
    d = 0
    for s in support:
        d = math.gcd(d, s)
    return d


def _reachable_sizes(law: OffspringLaw, weights: Sequence[int], budget: int,
                     frozen: int | None = None) -> list[int]:
    mask = (1 << (budget + 1)) - 1
    reach = [0] * law.K
    if frozen is not None:
        reach[frozen] = 0b10

    changed = True
    while changed:
        changed = False
        for i in range(law.K):
            if i == frozen:
                continue
            grown = _shift(_expand(law, i, reach, budget, frozen), weights[i], mask)
            grown |= reach[i]
            if grown != reach[i]:
                reach[i] = grown
                changed = True
    return reach


def _expand(law: OffspringLaw, i: int, reach: list[int], budget: int, frozen: int | None) -> int:
    """Sizes of the children forests of a type-i vertex."""
    mask = (1 << (budget + 1)) - 1
    offspring = law.types[i]
    result = 0

    if isinstance(offspring, TableOffspring):
        for counts, prob in offspring.entries:
            if prob == 0:
                continue
            acc = 1
            for j, count in enumerate(counts):
                for _ in range(count):
                    acc = _sumset(acc, reach[j], mask)
                    if acc == 0:
                        break
            result |= acc
        return result

    # geometric counts capped at the budget
    child = law.index_of(offspring.child_type)
    acc = 1
    result = 1
    for _ in range(budget):
        acc = _sumset(acc, reach[child], mask)
        if acc == 0:
            break
        result |= acc
    return result


def _sumset(a: int, b: int, mask: int) -> int:
    result = 0
    shift = 0
    while b:
        if b & 1:
            result |= a << shift
        b >>= 1
        shift += 1
    return result & mask


def _shift(a: int, amount: int, mask: int) -> int:
    return (a << amount) & mask


def _bits(mask: int) -> list[int]:
    values = []
    n = 0
    while mask:
        if mask & 1:
            values.append(n)
        mask >>= 1
        n += 1
    return values


def frobenius_representable(n_list: Sequence[int], target: int) -> bool:
    """Whether target is a nonnegative integer combination of n_list."""
    if target < 0:
        return False
    reachable = [False] * (target + 1)
    reachable[0] = True
    for n in range(1, target + 1):
        reachable[n] = any(c <= n and reachable[n - c] for c in n_list)
    return reachable[target]
