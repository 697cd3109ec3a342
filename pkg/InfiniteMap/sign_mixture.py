#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

"""Weights of the positive, negative and null parts of the infinite map.

Conditioned on size n, the null and positive parts weigh
Z0 P^(2,2)(|F| = n') and Z+ P^(1)(|T| = n'). The ratio of the two
probabilities tends to b_1 / (2 b_2), so the limit has
w+ / w0 = b_1 / (2 b_2) * Z+ / Z0 with 2 w+ + w0 = 1.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from Boltzmann.admissibility import BoltzmannSolution
from Branching.perron import PerronData, mean_matrix, perron
from PlanarMaps.finite_maps import ConditionedMapSampler, MapSign

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SignMixture:
    positive: float
    null: float
    ratio: float | None = None
    """w+ / w0, ``None`` for bipartite sequences."""

    @property
    def negative(self) -> float:
        return self.positive

    def as_dict(self) -> dict[MapSign, float]:
        return {MapSign.POSITIVE: self.positive, MapSign.NEGATIVE: self.positive, MapSign.NULL: self.null}

    def to_json(self) -> dict:
        return {"positive": self.positive, "negative": self.negative, "null": self.null, "ratio": self.ratio}


def sign_mixture(solution: BoltzmannSolution, data: PerronData | None = None) -> SignMixture:
    solution.require_critical()
    if solution.bipartite:
        return SignMixture(positive=0.5, null=0.0)
    law = solution.mobile_law.law
    data = data if data is not None else perron(mean_matrix(law))
    b1 = float(data.b[law.index_of(1)])
    b2 = float(data.b[law.index_of(2)])
    ratio = b1 / (2 * b2) * solution.z_plus / solution.z_null
    mixture = SignMixture(positive=ratio / (1 + 2 * ratio), null=1 / (1 + 2 * ratio), ratio=ratio)
    _logger.info("Sign mixture of %s: w+ = %.6g, w0 = %.6g", solution.weights.to_json(), mixture.positive,
                 mixture.null)
    return mixture


def finite_sign_weights(solution: BoltzmannSolution, kind: str, n: int) -> SignMixture:
    """Exact sign probabilities of pointed maps conditioned on n vertices, edges or faces."""
    weights = ConditionedMapSampler(solution, kind, n).sign_probabilities
    positive, null = weights[MapSign.POSITIVE], weights[MapSign.NULL]
    return SignMixture(positive=positive, null=null, ratio=positive / null if null > 0 else None)


@dataclass(frozen=True)
class SignFrequencies:
    counts: dict[MapSign, int]
    samples: int

    def frequency(self, sign: MapSign) -> float:
        return self.counts.get(sign, 0) / self.samples

    def standard_error(self, sign: MapSign) -> float:
        p = self.frequency(sign)
        return float(np.sqrt(p * (1 - p) / self.samples))


def sign_frequencies(rng: np.random.Generator, solution: BoltzmannSolution, kind: str, n: int,
                     samples: int) -> SignFrequencies:
    """Monte Carlo sign counts of conditioned finite maps."""
    sampler = ConditionedMapSampler(solution, kind, n)
    counts = {sign: 0 for sign in MapSign}
    for _ in range(samples):
        counts[sampler.sample(rng).sign] += 1
    return SignFrequencies(counts, samples)
