#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

"""Exhaustive enumeration of small mobiles and of small quadrangulations.

The mobile side walks every structural choice allowed by a law's support
(child counts, ordered child words, displacement lists) under a budget of
type-3/4 vertices. The quadrangulation side is an independent brute force
over rotation systems, used to check that the mobiles produce every pointed
rooted quadrangulation exactly once.
"""

from __future__ import annotations

import logging
from typing import Any, Iterator

from Branching.offspring_law import GeometricOffspring, OffspringLaw, TableOffspring
from PlanarMaps.canonical import canonical_code
from PlanarMaps.planar_map import PlanarMap
from Sampler.labels import enumerate_displacements
from Trees.typed_tree import LabeledMobile, TypedTree

_logger = logging.getLogger(__name__)

default_enumeration_budget = 8


class EnumerationBudgetError(ValueError):
    """Raised when an enumeration is asked for more than it is allowed to list."""


class MobileEnumerator:
    """Lists every mobile with at most ``max_type34`` face vertices.

    ``max_children`` bounds the offspring words of face vertices, which keeps
    laws with unbounded face degrees finite.
    """

    def __init__(self, law: OffspringLaw, max_type34: int, max_children: int | None = None):
        if max_type34 < 0:
            raise EnumerationBudgetError(f"Face budget must be >= 0, got {max_type34}.")
        if max_type34 > default_enumeration_budget:
            raise EnumerationBudgetError(
                f"Face budget {max_type34} exceeds the enumeration limit {default_enumeration_budget}."
            )
        self.law = law
        self.max_type34 = max_type34
        self.max_children = max_children
        self._words: dict[int, list[tuple[int, ...]]] = {}

    def words(self, label: int) -> list[tuple[int, ...]]:
        if label not in self._words:
            offspring = self.law.offspring(label)
            if not isinstance(offspring, TableOffspring):
                raise EnumerationBudgetError(f"Type {label} needs a finite offspring table.")
            words = [tuple(word) for word, prob in self.law.ordered_words(label) if prob > 0]
            if self.max_children is not None:
                words = [word for word in words if len(word) <= self.max_children]
            self._words[label] = words
        return self._words[label]

    def mobiles(self, root_type: int = 1) -> Iterator[LabeledMobile]:
        if root_type == 1:
            roots = self._vertex(1, 0, self.max_type34)
        elif root_type == 2:
            roots = ((_node(2, 1, children), used)
                     for children, used in self._sequence([(4, 1), (4, 1)], self.max_type34))
        else:
            raise EnumerationBudgetError(f"Mobiles are rooted at type 1 or 2, got {root_type}.")
        for node, _ in roots:
            yield LabeledMobile.from_tree(TypedTree.from_nested(node))

    def _vertex(self, vertex_type: int, label2: int, budget: int) -> Iterator[tuple[dict, int]]:
        if vertex_type == 1:
            offspring = self.law.offspring(1)
            if isinstance(offspring, GeometricOffspring):
                counts = [k for k in range(budget + 1) if offspring.probability(k) > 0]
            else:
                counts = sorted({len(word) for word in self.words(1) if len(word) <= budget})
            for k in counts:
                for children, used in self._sequence([(3, label2)] * k, budget):
                    yield _node(1, label2, children), used
        elif vertex_type == 2:
            for children, used in self._sequence([(4, label2)], budget):
                yield _node(2, label2, children), used
        else:
            if budget < 1:
                return
            for word in self.words(vertex_type):
                for displacement in enumerate_displacements(vertex_type, word):
                    specs = [(letter, label2 + y) for letter, y in zip(word, displacement)]
                    for children, used in self._sequence(specs, budget - 1):
                        yield _node(vertex_type, label2, children), used + 1

    def _sequence(self, specs: list[tuple[int, int]], budget: int) -> Iterator[tuple[list[dict], int]]:
        if not specs:
            yield [], 0
            return
        head, rest = specs[0], specs[1:]
        for first, used in self._vertex(head[0], head[1], budget):
            for others, more in self._sequence(rest, budget - used):
                yield [first, *others], used + more


def _node(vertex_type: int, label2: int, children: list[dict]) -> dict[str, Any]:
    return {"type": vertex_type, "label2": label2, "children": children}


def enumerate_mobiles(law: OffspringLaw, max_type34: int, root_type: int = 1,
                      max_children: int | None = None) -> Iterator[LabeledMobile]:
    """Every valid mobile with at most ``max_type34`` type-3/4 vertices, each exactly once."""
    return MobileEnumerator(law, max_type34, max_children).mobiles(root_type)


def face_vertex_count(m: TypedTree) -> int:
    counts = m.count_types()
    return counts.get(3, 0) + counts.get(4, 0)


# --- brute force over rotation systems --------------------------------------------


def _involutions(n: int) -> Iterator[list[int]]:
    """Fixed-point-free involutions of range(n), pairing the lowest free element first."""
    pairing = [-1] * n

    def extend(start: int) -> Iterator[list[int]]:
        while start < n and pairing[start] >= 0:
            start += 1
        if start == n:
            yield list(pairing)
            return
        for partner in range(start + 1, n):
            if pairing[partner] < 0:
                pairing[start], pairing[partner] = partner, start
                yield from extend(start + 1)
                pairing[start] = pairing[partner] = -1

    yield from extend(0)


def positive_quadrangulation_codes(faces: int) -> set[bytes]:
    """Canonical codes of every positive pointed rooted quadrangulation with ``faces`` faces.

    Faces are the fixed 4-cycles (4i, 4i+1, 4i+2, 4i+3) of the face
    permutation; every pairing of half-edges into edges gives a rotation
    system next = face o twin, kept when it is connected and planar.
    """
    if faces < 1:
        raise EnumerationBudgetError(f"Quadrangulations need at least one face, got {faces}.")
    if faces > 4:
        raise EnumerationBudgetError(f"Brute force over {faces} faces is out of reach.")
    half_edges = 4 * faces
    face_step = [4 * (h // 4) + (h + 1) % 4 for h in range(half_edges)]

    codes: set[bytes] = set()
    planar = 0
    for twin in _involutions(half_edges):
        nxt = tuple(face_step[twin[h]] for h in range(half_edges))
        candidate = PlanarMap(tuple(twin), nxt, 0)
        if candidate.vertex_count != faces + 2 or candidate.problem() is not None:
            continue
        planar += 1
        for point in range(candidate.vertex_count):
            distances = candidate.distances_from(point)
            for root in range(half_edges):
                head = candidate.origin[twin[root]]
                if distances[head] == distances[candidate.origin[root]] + 1:
                    codes.add(canonical_code(candidate.with_root(root, point)))
    _logger.debug("%d labelled planar quadrangulations with %d faces, %d positive pointed codes",
                  planar, faces, len(codes))
    return codes
