#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

"""Finite Galton-Watson trees and forests, plain and conditioned on their size."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from Branching.offspring_law import OffspringLaw
from Branching.perron import PerronData, classify
from Periodicity.lattice import LatticeError, PeriodData, SizeVector, period
from Series.size_distribution import forest_size_dist
from Trees.typed_tree import Forest, TypedTree

_logger = logging.getLogger(__name__)

default_vertex_cap = 10 ** 6
default_attempt_cap = 10 ** 6


class SamplingOverflow(RuntimeError):
    """Raised where a vertex cap is hit and no Overflow value can be returned."""


class ConditioningFailure(RuntimeError):
    """Raised when rejection sampling exhausts its attempt cap."""

    def __init__(self, message: str, attempts: int, acceptance_estimate: float):
        super().__init__(message)
        self.attempts = attempts
        self.acceptance_estimate = acceptance_estimate


@dataclass(frozen=True)
class Overflow:
    """A sample abandoned after reaching ``vertex_cap`` vertices."""

    vertex_cap: int
    vertices: int


def grow(rng: np.random.Generator, law: OffspringLaw, root_type: int, vertex_cap: int,
         size_weights: dict[int, int] | None = None, size_limit: int | None = None,
         height: int | None = None) -> TypedTree | Overflow | None:
    """Breadth-first growth of one tree.

    Returns ``None`` as soon as the weighted size exceeds ``size_limit``;
    vertices at depth ``height`` are left childless.
    """
    types = [root_type]
    depths = [0]
    child_count = []
    size = size_weights.get(root_type, 0) if size_weights else 0
    if size_limit is not None and size > size_limit:
        return None

    v = 0
    while v < len(types):
        if height is not None and depths[v] >= height:
            child_count.append(0)
            v += 1
            continue
        word = law.sample_word(rng, types[v])
        if len(types) + len(word) > vertex_cap:
            return Overflow(vertex_cap=vertex_cap, vertices=len(types))
        if size_weights:
            size += sum(size_weights.get(letter, 0) for letter in word)
            if size_limit is not None and size > size_limit:
                return None
        types.extend(word)
        depths.extend([depths[v] + 1] * len(word))
        child_count.append(len(word))
        v += 1
    return TypedTree(tuple(types), tuple(child_count))


def sample_tree(rng: np.random.Generator, law: OffspringLaw, root_type: int,
                vertex_cap: int = default_vertex_cap) -> TypedTree | Overflow:
    return grow(rng, law, root_type, vertex_cap)


def sample_forest(rng: np.random.Generator, law: OffspringLaw, word: Sequence[int],
                  vertex_cap: int = default_vertex_cap) -> Forest | Overflow:
    trees = []
    remaining = vertex_cap
    for letter in word:
        tree = grow(rng, law, letter, remaining)
        if isinstance(tree, Overflow):
            return Overflow(vertex_cap=vertex_cap, vertices=vertex_cap - remaining + tree.vertices)
        trees.append(tree)
        remaining -= tree.vertex_count
    return Forest(tuple(trees))


class ConditionedSampler:
    """Rejection sampler for a tree or forest with |F|_gamma equal to ``target``.

    The target is checked against the size lattice and against the exact size
    series once, at construction; samples abort early as soon as they exceed
    the target.
    """

    def __init__(self, law: OffspringLaw, gamma: SizeVector, target: int, word: Sequence[int] | None = None,
                 attempt_cap: int = default_attempt_cap, vertex_cap: int = default_vertex_cap,
                 lattice: PeriodData | None = None):
        self.law = law
        self.gamma = gamma.for_law(law)
        self.target = target
        self.word = tuple(word) if word is not None else (law.labels[0],)
        self.attempt_cap = attempt_cap
        self.vertex_cap = vertex_cap
        self.weights = {label: self.gamma.weight(label) for label in law.labels}

        self.lattice = lattice if lattice is not None else period(law, self.gamma)
        self.lattice.check_target(self.word, target)
        self.target_probability = float(forest_size_dist(law, self.gamma, self.word, target, exact=False)[target])
        if self.target_probability <= 0:
            raise LatticeError(f"Size {target} is on the lattice but not realizable from {self.word}.")
        self.attempts = 0
        self.accepted = 0

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.attempts if self.attempts else self.target_probability

    def sample(self, rng: np.random.Generator) -> TypedTree | Forest:
        for _ in range(self.attempt_cap):
            self.attempts += 1
            result = self._attempt(rng)
            if result is not None:
                self.accepted += 1
                return result
        raise ConditioningFailure(
            f"No {self.word}-rooted sample of size {self.target} within {self.attempt_cap} attempts "
            f"(expected acceptance {self.target_probability:.3g}).",
            attempts=self.attempt_cap,
            acceptance_estimate=self.target_probability,
        )

    def _attempt(self, rng: np.random.Generator) -> TypedTree | Forest | None:
        trees = []
        size = 0
        for letter in self.word:
            tree = grow(rng, self.law, letter, self.vertex_cap, self.weights, self.target - size)
            if tree is None or isinstance(tree, Overflow):
                return None
            size += sum(self.weights[t] for t in tree.types)
            trees.append(tree)
        if size != self.target:
            return None
        return trees[0] if len(trees) == 1 else Forest(tuple(trees))


def sample_conditioned(rng: np.random.Generator, law: OffspringLaw, gamma: SizeVector, target_size: int,
                       attempt_cap: int = default_attempt_cap, root_type: int | None = None) -> TypedTree:
    word = (root_type if root_type is not None else law.labels[0],)
    return ConditionedSampler(law, gamma, target_size, word, attempt_cap).sample(rng)


@dataclass(frozen=True)
class MartingaleMeans:
    """Per-generation means of X_n = b . Z_n with their standard errors."""

    means: tuple[float, ...]
    standard_errors: tuple[float, ...]
    samples: int
    overflows: int


def martingale_means(rng: np.random.Generator, law: OffspringLaw, root_type: int, generations: int,
                     samples: int, perron: PerronData | None = None,
                     vertex_cap: int = default_vertex_cap) -> MartingaleMeans:
    """Monte Carlo means of b . Z_n; for a critical law they stay at b_root."""
    perron = perron if perron is not None else classify(law).perron
    values = np.zeros((samples, generations + 1))
    overflows = 0
    for s in range(samples):
        tree = grow(rng, law, root_type, vertex_cap, height=generations)
        if isinstance(tree, Overflow):
            # capped trees are kept out of the means and counted instead
            overflows += 1
            values[s] = np.nan
            continue
        counts = np.zeros((generations + 1, law.K))
        for v, depth in enumerate(tree.depth):
            counts[depth, law.index_of(tree.types[v])] += 1
        values[s] = counts @ perron.b

    kept = values[~np.isnan(values[:, 0])]
    if overflows:
        _logger.warning("%d of %d martingale samples hit the vertex cap %d", overflows, samples, vertex_cap)
    means = kept.mean(axis=0)
    errors = kept.std(axis=0, ddof=1) / np.sqrt(len(kept)) if len(kept) > 1 else np.full(generations + 1, np.inf)
    return MartingaleMeans(tuple(float(m) for m in means), tuple(float(e) for e in errors), len(kept), overflows)


@dataclass(frozen=True)
class CutTreeCounts:
    """Means over samples of the cut-tree statistics between types i and j."""

    before_first_generation: float
    """Mean number of type-i vertices strictly before the first type-j generation, from a type-j root."""

    first_generation: float
    """Mean size of the first type-j generation from a type-i root."""

    samples: int
    overflows: int


def cut_tree_counts(rng: np.random.Generator, law: OffspringLaw, i: int, j: int, samples: int,
                    vertex_cap: int = default_vertex_cap) -> CutTreeCounts:
    """Their means are a_i / a_j and b_i / b_j for a critical law."""
    xi_total = mu_total = 0
    overflows = kept = 0
    for _ in range(samples):
        xi = _cut_count(rng, law, j, i, j, vertex_cap)
        mu = _cut_count(rng, law, i, j, j, vertex_cap)
        if xi is None or mu is None:
            overflows += 1
            continue
        xi_total += xi[0]
        mu_total += mu[1]
        kept += 1
    if not kept:
        raise SamplingOverflow(f"Every cut-tree sample hit the vertex cap {vertex_cap}.")
    return CutTreeCounts(xi_total / kept, mu_total / kept, kept, overflows)


def _cut_count(rng, law: OffspringLaw, root: int, counted: int, cut: int, vertex_cap: int) -> tuple[int, int] | None:
    """(type-``counted`` vertices strictly inside, type-``cut`` leaves) of the tree cut at type ``cut``."""
    inside = 1 if root == counted else 0
    leaves = 0
    stack = list(law.sample_word(rng, root))
    vertices = 1 + len(stack)
    while stack:
        letter = stack.pop()
        if letter == cut:
            leaves += 1
            continue
        if letter == counted:
            inside += 1
        word = law.sample_word(rng, letter)
        vertices += len(word)
        if vertices > vertex_cap:
            return None
        stack.extend(word)
    return inside, leaves
