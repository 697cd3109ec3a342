#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Iterator


class InvalidWeightsError(ValueError):
    """Raised for weight sequences without any face of degree >= 3."""


@dataclass(frozen=True)
class WeightSequence:
    """Face weights q_n, either a finite table or the geometric tag q_n = lambda^n (n >= 1)."""

    table: tuple[tuple[int, float], ...] = ()
    geometric_lambda: float | None = None

    def __post_init__(self):
        if self.geometric_lambda is not None:
            if self.table:
                raise InvalidWeightsError("A weight sequence is either a table or geometric, not both.")
            if not 0 < self.geometric_lambda < 0.5:
                raise InvalidWeightsError(f"Geometric weights need 0 < lambda < 1/2, got {self.geometric_lambda}.")
            return

        cleaned = tuple(sorted((int(n), float(q)) for n, q in self.table if q != 0))
        if any(n < 1 or q < 0 for n, q in cleaned):
            raise InvalidWeightsError("Weights are nonnegative and indexed by face degrees >= 1.")
        if len({n for n, _ in cleaned}) != len(cleaned):
            raise InvalidWeightsError("Face degrees appear twice in the weight table.")
        if not any(n >= 3 for n, _ in cleaned):
            raise InvalidWeightsError("Some face degree >= 3 must carry positive weight.")
        object.__setattr__(self, "table", cleaned)

    @classmethod
    def from_table(cls, weights: dict[int, float]) -> "WeightSequence":
        return cls(table=tuple(weights.items()))

    @classmethod
    def geometric(cls, lam: float) -> "WeightSequence":
        return cls(geometric_lambda=lam)

    @property
    def is_geometric(self) -> bool:
        return self.geometric_lambda is not None

    @property
    def bipartite(self) -> bool:
        return not self.is_geometric and all(n % 2 == 0 for n, _ in self.table)

    @property
    def max_degree(self) -> int | None:
        return None if self.is_geometric else self.table[-1][0]

    def q(self, n: int) -> float:
        if n < 1:
            return 0.0
        if self.is_geometric:
            return self.geometric_lambda ** n
        for degree, weight in self.table:
            if degree == n:
                return weight
        return 0.0

    def support(self, limit: int | None = None) -> Iterator[int]:
        """Face degrees with positive weight; geometric sequences stop at ``limit``."""
        if self.is_geometric:
            if limit is None:
                raise InvalidWeightsError("Geometric weights need a limit to list their support.")
            yield from range(1, limit + 1)
            return
        for degree, _ in self.table:
            if limit is None or degree <= limit:
                yield degree

    @classmethod
    def from_json(cls, data: dict[str, Any] | str) -> "WeightSequence":
        if isinstance(data, str):
            data = json.loads(data)
        if "geometric_lambda" in data:
            return cls.geometric(float(data["geometric_lambda"]))
        if "table" in data:
            return cls.from_table({int(n): float(q) for n, q in data["table"].items()})
        raise InvalidWeightsError("Weight JSON needs a 'table' or a 'geometric_lambda' entry.")

    def to_json(self) -> dict[str, Any]:
        if self.is_geometric:
            return {"geometric_lambda": self.geometric_lambda}
        return {"table": {str(n): q for n, q in self.table}}
