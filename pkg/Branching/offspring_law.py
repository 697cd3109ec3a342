#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

"""Multi-type offspring laws with uniform ordering.

A law gives, for each type, a distribution over offspring count vectors
``z`` (indexed like ``labels``); the ordered offspring word is a uniformly
shuffled arrangement of the multiset described by ``z``. Probabilities are
either all ``Fraction`` (exact mode) or floats.
"""

from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterator, Sequence, Union

import numpy as np

from Branching.config import probability_sum_tolerance

Number = Union[float, Fraction]


class InvalidLawError(ValueError):
    """Raised for inconsistent offspring laws or law files."""


@dataclass(frozen=True)
class TableOffspring:
    """Finite table of (count vector, probability) pairs."""

    entries: tuple[tuple[tuple[int, ...], Number], ...]

    @cached_property
    def _cumulative(self) -> list[float]:
        total = 0.0
        cumulative = []
        for _, prob in self.entries:
            total += float(prob)
            cumulative.append(total)
        return cumulative

    def draw_counts(self, rng: np.random.Generator) -> tuple[int, ...]:
        cumulative = self._cumulative
        index = bisect.bisect_right(cumulative, rng.random() * cumulative[-1])
        return self.entries[min(index, len(self.entries) - 1)][0]


@dataclass(frozen=True)
class GeometricOffspring:
    """``k`` children of ``child_type`` with probability p(1-p)^k."""

    child_type: int
    p: Number

    def draw_count(self, rng: np.random.Generator) -> int:
        # inversion: floor(log U / log(1-p)) with U uniform on (0, 1]
        if self.p == 1:
            return 0
        u = 1.0 - rng.random()
        return int(math.floor(math.log(u) / math.log1p(-float(self.p))))

    def probability(self, k: int) -> Number:
        return self.p * (1 - self.p) ** k

    def mean(self) -> Number:
        return (1 - self.p) / self.p


@dataclass(frozen=True)
class SizeBiasedGeometricOffspring:
    """Size-biased geometric family: k children with probability k p^2 (1-p)^(k-1).

    Equivalently k = 1 + G1 + G2 with G1, G2 independent geometric(p).
    """

    child_type: int
    p: Number

    def draw_count(self, rng: np.random.Generator) -> int:
        geometric = GeometricOffspring(self.child_type, self.p)
        return 1 + geometric.draw_count(rng) + geometric.draw_count(rng)

    def probability(self, k: int) -> Number:
        if k < 1:
            return 0 * self.p
        return k * self.p ** 2 * (1 - self.p) ** (k - 1)


Offspring = Union[TableOffspring, GeometricOffspring, SizeBiasedGeometricOffspring]


@dataclass(frozen=True)
class OffspringLaw:
    """Per-type offspring distributions.

    ``labels[i]`` is the external type name of law index ``i``; count vectors
    and matrices are indexed by law index, trees carry the labels.
    """

    types: tuple[Offspring, ...]
    labels: tuple[int, ...] = ()
    check_degeneracy: bool = field(default=True, compare=False)

    def __post_init__(self):
        if not self.types:
            raise InvalidLawError("A law needs at least one type.")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(1, len(self.types) + 1)))
        if len(self.labels) != len(self.types) or len(set(self.labels)) != len(self.labels):
            raise InvalidLawError("Type labels must be distinct, one per type.")

        for index, offspring in enumerate(self.types):
            self._validate(index, offspring)

        if self.check_degeneracy and not any(self._moves_off_one(o) for o in self.types):
            raise InvalidLawError(
                "Degenerate law: every type has exactly one child almost surely."
            )

    # --- structure --------------------------------------------------------

    @property
    def K(self) -> int:
        return len(self.types)

    @cached_property
    def _index(self) -> dict[int, int]:
        return {label: i for i, label in enumerate(self.labels)}

    def index_of(self, label: int) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise InvalidLawError(f"Type {label} is not part of this law {self.labels}.") from None

    def offspring(self, label: int) -> Offspring:
        return self.types[self.index_of(label)]

    @property
    def exact(self) -> bool:
        for offspring in self.types:
            if isinstance(offspring, TableOffspring):
                if not all(isinstance(prob, Fraction) for _, prob in offspring.entries):
                    return False
            elif not isinstance(offspring.p, Fraction):
                return False
        return True

    @property
    def finite_support(self) -> bool:
        return all(isinstance(o, TableOffspring) for o in self.types)

    def support_counts(self, label: int, cap: int | None = None) -> Iterator[tuple[tuple[int, ...], Number]]:
        """(count vector, probability) pairs; geometric families stop at ``cap`` children."""
        offspring = self.offspring(label)
        if isinstance(offspring, TableOffspring):
            yield from offspring.entries
            return
        if cap is None:
            raise InvalidLawError("A cap is needed to list a geometric support.")
        child = self.index_of(offspring.child_type)
        for k in range(cap + 1):
            prob = offspring.probability(k)
            if prob == 0:
                continue
            counts = [0] * self.K
            counts[child] = k
            yield tuple(counts), prob

    def ordered_words(self, label: int) -> list[tuple[tuple[int, ...], Number]]:
        """Every ordered offspring word with its probability under uniform ordering."""
        offspring = self.offspring(label)
        if not isinstance(offspring, TableOffspring):
            raise InvalidLawError("Ordered words are only listed for finite tables.")
        words = []
        for counts, prob in offspring.entries:
            arrangements = _distinct_arrangements(self.word_of(counts))
            share = Fraction(1, len(arrangements)) if isinstance(prob, Fraction) else 1.0 / len(arrangements)
            words.extend((word, prob * share) for word in arrangements)
        return words

    def word_of(self, counts: Sequence[int]) -> list[int]:
        word = []
        for index, count in enumerate(counts):
            word.extend([self.labels[index]] * count)
        return word

    # --- sampling -----------------------------------------------------------

    def sample_word(self, rng: np.random.Generator, label: int) -> list[int]:
        """Ordered offspring word of a ``label`` vertex (Fisher-Yates over the multiset)."""
        offspring = self.types[self._index[label]]
        if isinstance(offspring, TableOffspring):
            word = self.word_of(offspring.draw_counts(rng))
            if len(word) > 1 and len(set(word)) > 1:
                rng.shuffle(word)
            return word
        return [offspring.child_type] * offspring.draw_count(rng)

    # --- serialization --------------------------------------------------------

    @classmethod
    def from_json(cls, data: dict[str, Any] | str) -> "OffspringLaw":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            k = int(data["K"])
            raw_types = data["types"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidLawError("Law JSON needs the keys 'K' and 'types'.") from exc
        if len(raw_types) != k:
            raise InvalidLawError(f"Law JSON declares K={k} but lists {len(raw_types)} types.")
        labels = tuple(data.get("labels", range(1, k + 1)))

        types: list[Offspring] = []
        for raw in raw_types:
            if "table" in raw:
                entries = tuple((tuple(int(c) for c in z), _parse_probability(p)) for z, p in raw["table"])
                types.append(TableOffspring(entries))
            elif "geometric" in raw:
                geometric = raw["geometric"]
                types.append(GeometricOffspring(int(geometric["child_type"]), _parse_probability(geometric["p"])))
            else:
                raise InvalidLawError(f"Unknown offspring kind in {raw!r}.")
        return cls(tuple(types), labels)

    def to_json(self) -> dict[str, Any]:
        types = []
        for offspring in self.types:
            if isinstance(offspring, TableOffspring):
                types.append({"table": [[list(z), _format_probability(p)] for z, p in offspring.entries]})
            elif isinstance(offspring, GeometricOffspring):
                types.append({"geometric": {"child_type": offspring.child_type, "p": _format_probability(offspring.p)}})
            else:
                raise InvalidLawError("Size-biased laws are derived objects and are not serialized.")
        return {"K": self.K, "labels": list(self.labels), "types": types}

    # --- validation -------------------------------------------------------------

    def _validate(self, index: int, offspring: Offspring):
        label = self.labels[index]
        if isinstance(offspring, TableOffspring):
            if not offspring.entries:
                raise InvalidLawError(f"Type {label} has an empty offspring table.")
            total = 0
            for counts, prob in offspring.entries:
                if len(counts) != self.K or any(c < 0 for c in counts):
                    raise InvalidLawError(f"Type {label}: bad count vector {counts}.")
                if prob < 0:
                    raise InvalidLawError(f"Type {label}: negative probability {prob}.")
                total += prob
            exact = all(isinstance(p, Fraction) for _, p in offspring.entries)
            if (exact and total != 1) or (not exact and abs(total - 1) > probability_sum_tolerance):
                raise InvalidLawError(f"Type {label}: probabilities sum to {total}, not 1.")
        else:
            if offspring.child_type not in self.labels:
                raise InvalidLawError(f"Type {label}: geometric child type {offspring.child_type} is unknown.")
            if not 0 < offspring.p <= 1:
                raise InvalidLawError(f"Type {label}: geometric parameter {offspring.p} outside (0, 1].")

    @staticmethod
    def _moves_off_one(offspring: Offspring) -> bool:
        if isinstance(offspring, TableOffspring):
            return any(sum(z) != 1 and p > 0 for z, p in offspring.entries)
        return True


def _distinct_arrangements(word: list[int]) -> list[tuple[int, ...]]:
    if not word:
        return [()]
    result = []
    for letter in sorted(set(word)):
        rest = list(word)
        rest.remove(letter)
        result.extend((letter, *tail) for tail in _distinct_arrangements(rest))
    return result


def _parse_probability(value: Any) -> Number:
    if isinstance(value, str):
        try:
            return Fraction(value)
        except ValueError as exc:
            raise InvalidLawError(f"Cannot read probability {value!r}.") from exc
    if isinstance(value, (int, float)):
        return float(value)
    raise InvalidLawError(f"Cannot read probability {value!r}.")


def _format_probability(value: Number) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    return float(value)
