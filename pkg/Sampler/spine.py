#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

"""Size-biased forests with an infinite spine, cut at a window height.

Also holds the exact probabilities of height-truncated forests under the
plain and the size-biased law, used as oracles for both samplers.
"""

from __future__ import annotations

import bisect
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

import numpy as np

from Branching.offspring_law import GeometricOffspring, OffspringLaw, SizeBiasedGeometricOffspring, TableOffspring
from Branching.perron import PerronData
from Branching.size_bias import NotCriticalError, size_bias, spine_child_index
from Sampler.galton_watson import SamplingOverflow, default_vertex_cap
from Trees.typed_tree import Forest, TypedTree

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpineWindow:
    """A forest cut at ``height`` with the spine vertices of one component.

    ``spine[k]`` is the arena id of the depth-k spine vertex inside
    ``forest.trees[component]``.
    """

    forest: Forest
    component: int
    spine: tuple[int, ...]
    height: int

    @property
    def spine_tree(self) -> TypedTree:
        return self.forest.trees[self.component]


class SpineSampler:
    """Samples windows of the size-biased forest of a critical law."""

    def __init__(self, law: OffspringLaw, perron: PerronData, vertex_cap: int = default_vertex_cap):
        if abs(perron.rho - 1.0) > 1e-6:
            raise NotCriticalError(f"Spine windows need a critical law, rho = {perron.rho}.")
        self.law = law
        self.perron = perron
        self.b = [float(x) for x in perron.b]
        self.biased = size_bias(law, self.b)
        self.vertex_cap = vertex_cap

    def choose_component(self, rng: np.random.Generator, word: Sequence[int]) -> int:
        cumulative = np.cumsum([self.b[self.law.index_of(letter)] for letter in word])
        index = bisect.bisect_right(cumulative, rng.random() * cumulative[-1])
        return min(index, len(word) - 1)

    def sample(self, rng: np.random.Generator, word: Sequence[int], height: int) -> SpineWindow:
        if height < 0:
            raise ValueError(f"Window height must be >= 0, got {height}.")
        component = self.choose_component(rng, word)
        trees = []
        spine: tuple[int, ...] = ()
        budget = self.vertex_cap
        for index, letter in enumerate(word):
            tree, path = self._grow(rng, letter, height, budget, with_spine=index == component)
            budget -= tree.vertex_count
            trees.append(tree)
            if index == component:
                spine = path
        return SpineWindow(Forest(tuple(trees)), component, spine, height)

    def _grow(self, rng, root_type: int, height: int, budget: int, with_spine: bool):
        types = [root_type]
        depths = [0]
        on_spine = [with_spine]
        child_count = []
        path = [0] if with_spine else []

        v = 0
        while v < len(types):
            if depths[v] >= height:
                child_count.append(0)
                v += 1
                continue
            if on_spine[v]:
                word = self.biased.sample_word(rng, types[v])
                spine_index = spine_child_index(rng, word, self.b, self.law)
            else:
                word = self.law.sample_word(rng, types[v])
                spine_index = -1
            if len(types) + len(word) > budget:
                raise SamplingOverflow(f"Spine window exceeded {self.vertex_cap} vertices below height {height}.")
            if spine_index >= 0:
                path.append(len(types) + spine_index)
            types.extend(word)
            depths.extend([depths[v] + 1] * len(word))
            on_spine.extend(k == spine_index for k in range(len(word)))
            child_count.append(len(word))
            v += 1
        return TypedTree(tuple(types), tuple(child_count)), tuple(path)


def sample_spine_window(rng: np.random.Generator, law: OffspringLaw, perron: PerronData, word: Sequence[int],
                        height: int, vertex_cap: int = default_vertex_cap) -> SpineWindow:
    return SpineSampler(law, perron, vertex_cap).sample(rng, word, height)


# --- exact probabilities of truncated forests -----------------------------------


def word_probability(law: OffspringLaw, label: int, word: Sequence[int]):
    """zeta^(label)(word): the count-vector probability over its number of arrangements."""
    counts = [0] * law.K
    for letter in word:
        counts[law.index_of(letter)] += 1
    offspring = law.offspring(label)
    if isinstance(offspring, TableOffspring):
        prob = next((p for z, p in offspring.entries if tuple(z) == tuple(counts)), 0)
    elif isinstance(offspring, (GeometricOffspring, SizeBiasedGeometricOffspring)):
        child = law.index_of(offspring.child_type)
        if any(c for j, c in enumerate(counts) if j != child):
            return 0
        return offspring.probability(counts[child])
    else:
        raise NotCriticalError(f"Unknown offspring kind {type(offspring).__name__}.")
    if prob == 0:
        return prob
    arrangements = factorial(len(word))
    for c in counts:
        arrangements //= factorial(c)
    return prob / arrangements


def truncated_probability(law: OffspringLaw, forest: Forest | TypedTree, height: int):
    """P(F_{<= height} = forest) under the plain law."""
    trees = forest.trees if isinstance(forest, Forest) else (forest,)
    total = Fraction(1) if law.exact else 1.0
    for tree in trees:
        for v in range(tree.vertex_count):
            if tree.depth[v] < height:
                total *= word_probability(law, tree.types[v], tree.child_word(v))
                if total == 0:
                    return total
    return total


def size_biased_probability(law: OffspringLaw, b: Sequence, forest: Forest | TypedTree, height: int):
    """P-hat(F_{<= height} = forest), summed over the possible spine paths.

    The spine picks component j with weight b_{w_j} / Z_w, reproduces by the
    size-biased law and moves to child k with weight b_{w_k} / sum_l b_{w_l}.
    """
    trees = forest.trees if isinstance(forest, Forest) else (forest,)
    biased = size_bias(law, b)
    word = [tree.root_type for tree in trees]
    z_w = sum(b[law.index_of(letter)] for letter in word)
    plain = truncated_probability(law, forest, height)

    total = 0
    for j, tree in enumerate(trees):
        for end in range(tree.vertex_count):
            if tree.depth[end] != height:
                continue
            path = _path_to(tree, end)
            weight = b[law.index_of(word[j])] / z_w
            for depth, v in enumerate(path[:-1]):
                child_word = tree.child_word(v)
                plain_word = word_probability(law, tree.types[v], child_word)
                if plain_word == 0:
                    weight = 0
                    break
                child_b = b[law.index_of(tree.types[path[depth + 1]])]
                word_b = sum(b[law.index_of(letter)] for letter in child_word)
                # swap the plain factor of this spine vertex for its biased one
                weight *= word_probability(biased, tree.types[v], child_word) / plain_word * child_b / word_b
            total += weight * plain
    return total


def _path_to(tree: TypedTree, v: int) -> list[int]:
    path = [v]
    while path[-1] != 0:
        path.append(tree.parent[path[-1]])
    return path[::-1]


def enumerate_truncated_forests(law: OffspringLaw, word: Sequence[int], height: int,
                                width_cap: int = 8) -> list[Forest]:
    """Every forest of height <= ``height`` with positive truncated probability.

    Vertices at depth ``height`` are leaves; geometric supports stop at
    ``width_cap`` children.
    """
    def options(label: int) -> list[tuple[int, ...]]:
        offspring = law.offspring(label)
        if isinstance(offspring, TableOffspring):
            return [tuple(w) for w, _ in law.ordered_words(label)]
        return [(offspring.child_type,) * k for k in range(width_cap + 1)]

    def expand(label: int, depth: int) -> list[dict]:
        if depth == height:
            return [{"type": label, "children": []}]
        shapes = []
        for child_word in options(label):
            for children in itertools.product(*[expand(letter, depth + 1) for letter in child_word]):
                shapes.append({"type": label, "children": list(children)})
        return shapes

    forests = []
    for combination in itertools.product(*[expand(letter, 0) for letter in word]):
        forests.append(Forest(tuple(TypedTree.from_nested(tree) for tree in combination)))
    return forests

