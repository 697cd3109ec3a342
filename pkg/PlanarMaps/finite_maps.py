#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

"""Finite q-Boltzmann maps sampled through their mobiles.

A pointed rooted map is positive, null or negative when d(r, e+) is
d(r, e-) + 1, d(r, e-) or d(r, e-) - 1. Positive maps come from mobiles with
a type-1 root, null maps from two type-2 rooted trees merged at their roots,
and negative maps are positive maps with the root reversed.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from Boltzmann.admissibility import BoltzmannSolution
from Periodicity.lattice import LatticeError
from Periodicity.map_periods import MAP_SIZE_VECTORS
from PlanarMaps.bdfg import bdfg
from PlanarMaps.planar_map import PlanarMap, reverse_root
from Sampler.galton_watson import (ConditionedSampler, ConditioningFailure, Overflow, SamplingOverflow,
                                   default_attempt_cap, default_vertex_cap, sample_forest, sample_tree)
from Sampler.labels import assign_labels, sample_labels
from Trees.typed_tree import Forest, InvalidTreeError, LabeledMobile, TypedTree

_logger = logging.getLogger(__name__)

NULL_ROOT_WORD = (2, 2)


class MapSign(Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NULL = "null"


def map_sign(m: PlanarMap) -> MapSign:
    """Sign of a pointed rooted map."""
    if m.point is None or m.root is None:
        raise ValueError("Only pointed maps with a root edge carry a sign.")
    distances = m.distances_from(m.point)
    step = distances[m.root_head] - distances[m.root_tail]
    return {1: MapSign.POSITIVE, 0: MapSign.NULL, -1: MapSign.NEGATIVE}[step]


def map_size(m: PlanarMap, kind: str) -> int:
    stats = m.stats()
    return {"V": stats.vertices, "E": stats.edges, "F": stats.faces}[kind]


def mobile_target(kind: str, n: int) -> int:
    """|T|_gamma of the mobiles whose maps have n vertices, edges or faces."""
    try:
        return {"V": n - 1, "E": n + 1, "F": n}[kind]
    except KeyError:
        raise ValueError(f"Map size kind must be one of V, E, F, got {kind!r}.") from None


def merge_roots(t1: TypedTree, t2: TypedTree) -> LabeledMobile:
    """Glues two type-2 rooted labelled trees at their roots into a null mobile."""
    for t in (t1, t2):
        if t.labels is None:
            raise InvalidTreeError("Merged trees must carry labels.")
        if t.root_type != 2 or t.child_word(0) != (4,):
            raise InvalidTreeError(f"Merged trees need a type-2 root with one type-4 child, got {t.child_word(0)}.")
        if t.labels[0] != 1:
            raise InvalidTreeError(f"Merged roots carry label2 1, got {t.labels[0]}.")
    left, right = t1.to_nested(), t2.to_nested()
    merged = {"type": 2, "label2": 1, "children": [left["children"][0], right["children"][0]]}
    return LabeledMobile.from_tree(TypedTree.from_nested(merged))


def label_mobile(rng: np.random.Generator, skeleton: TypedTree | Forest) -> LabeledMobile:
    """Uniform labels on a positive tree or on a (2, 2) forest, merged."""
    if isinstance(skeleton, Forest):
        first, second = (t.with_labels(assign_labels(rng, t, 1)) for t in skeleton.trees)
        return merge_roots(first, second)
    return sample_labels(rng, skeleton)


def sign_weights(solution: BoltzmannSolution) -> dict[MapSign, float]:
    """Probabilities of the three signs under the unconditioned Boltzmann law."""
    z_plus, z_null = solution.z_plus, solution.z_null
    total = 2 * z_plus + z_null
    return {MapSign.POSITIVE: z_plus / total, MapSign.NEGATIVE: z_plus / total, MapSign.NULL: z_null / total}


def draw_sign(rng: np.random.Generator, weights: dict[MapSign, float]) -> MapSign:
    u = rng.random()
    for sign in (MapSign.POSITIVE, MapSign.NEGATIVE):
        if u < weights[sign]:
            return sign
        u -= weights[sign]
    return MapSign.NULL if weights[MapSign.NULL] > 0 else MapSign.NEGATIVE


@dataclass(frozen=True)
class SampledMap:
    map: PlanarMap
    sign: MapSign
    mobile: LabeledMobile
    attempts: int = 1


def sample_boltzmann_map(rng: np.random.Generator, solution: BoltzmannSolution,
                         vertex_cap: int = default_vertex_cap) -> SampledMap:
    """A pointed rooted map with the unconditioned q-Boltzmann law."""
    law = solution.mobile_law.law
    sign = draw_sign(rng, sign_weights(solution))
    if sign is MapSign.NULL:
        skeleton = sample_forest(rng, law, NULL_ROOT_WORD, vertex_cap)
    else:
        skeleton = sample_tree(rng, law, 1, vertex_cap)
    if isinstance(skeleton, Overflow):
        raise SamplingOverflow(f"Boltzmann mobile exceeded {vertex_cap} vertices.")
    mobile = label_mobile(rng, skeleton)
    m = bdfg(mobile)
    return SampledMap(reverse_root(m) if sign is MapSign.NEGATIVE else m, sign, mobile)


class ConditionedMapSampler:
    """q-Boltzmann maps conditioned on their number of vertices, edges or faces.

    The sign is drawn with weight Z_s P_s(|T| = target), then the mobile of
    that sign by rejection. Unpointed maps are obtained by accepting a pointed
    sample with probability 1/#V.
    """

    def __init__(self, solution: BoltzmannSolution, kind: str, n: int, pointed: bool = True,
                 attempt_cap: int = default_attempt_cap, vertex_cap: int = default_vertex_cap):
        solution.require_admissible()
        if kind not in MAP_SIZE_VECTORS:
            raise ValueError(f"Map size kind must be one of V, E, F, got {kind!r}.")
        self.kind = kind
        self.n = n
        self.pointed = pointed
        self.attempt_cap = attempt_cap
        law = solution.mobile_law.law
        gamma = MAP_SIZE_VECTORS[kind]
        target = mobile_target(kind, n)

        self.samplers: dict[MapSign, ConditionedSampler] = {}
        weight = {MapSign.POSITIVE: 0.0, MapSign.NULL: 0.0}
        for sign, word, z in ((MapSign.POSITIVE, (1,), solution.z_plus),
                              (MapSign.NULL, NULL_ROOT_WORD, solution.z_null)):
            if z <= 0 or any(letter not in law.labels for letter in word):
                continue
            try:
                sampler = ConditionedSampler(law, gamma, target, word, attempt_cap, vertex_cap)
            except LatticeError as exc:
                _logger.debug("No %s maps with %d %s: %s", sign.value, n, kind, exc)
                continue
            self.samplers[sign] = sampler
            weight[sign] = z * sampler.target_probability

        total = 2 * weight[MapSign.POSITIVE] + weight[MapSign.NULL]
        if total <= 0:
            raise LatticeError(f"No pointed map has {n} {kind}; mobile size {target} is unreachable.")
        self.sign_probabilities = {
            MapSign.POSITIVE: weight[MapSign.POSITIVE] / total,
            MapSign.NEGATIVE: weight[MapSign.POSITIVE] / total,
            MapSign.NULL: weight[MapSign.NULL] / total,
        }

    def sample(self, rng: np.random.Generator) -> SampledMap:
        for attempt in range(1, self.attempt_cap + 1):
            sign = draw_sign(rng, self.sign_probabilities)
            sampler = self.samplers[MapSign.NULL if sign is MapSign.NULL else MapSign.POSITIVE]
            mobile = label_mobile(rng, sampler.sample(rng))
            m = bdfg(mobile)
            if map_size(m, self.kind) != self.n:
                # the lone-vertex mobile maps to the vertex map, outside the count identities
                continue
            if sign is MapSign.NEGATIVE:
                m = reverse_root(m)
            if not self.pointed:
                if rng.random() * m.vertex_count >= 1.0:
                    continue
                m = m.with_root(m.root, None)
            return SampledMap(m, sign, mobile, attempt)
        raise ConditioningFailure(
            f"No map with {self.n} {self.kind} accepted within {self.attempt_cap} attempts.",
            attempts=self.attempt_cap,
            acceptance_estimate=1.0 / max(self.n, 1) if not self.pointed else 1.0,
        )


def sample_conditioned_map(rng: np.random.Generator, solution: BoltzmannSolution, kind: str, n: int,
                           pointed: bool = True, attempt_cap: int = default_attempt_cap) -> SampledMap:
    return ConditionedMapSampler(solution, kind, n, pointed, attempt_cap).sample(rng)
