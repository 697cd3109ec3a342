#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

"""Uniform label displacements below type-3/4 vertices.

Labels are stored doubled. Below a face vertex of type i with child word w
of length l, the slacks m_0..m_l of a displacement are nonnegative integers
summing to #1(w) + 1[i = 3]; a uniform displacement is a uniform
composition of that sum into l + 1 parts (stars and bars).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from Branching.offspring_law import OffspringLaw, TableOffspring
from Trees.typed_tree import InvalidTreeError, LabeledMobile, TypedTree, displacement_budget


def displacement_from_slacks(parent_type: int, word: Sequence[int], slacks: Sequence[int]) -> tuple[int, ...]:
    boundary = parent_type - 2
    letters = [boundary, *word, boundary]
    heights = [0]
    for j, slack in enumerate(slacks):
        heights.append(heights[-1] + 2 * slack - (letters[j] == 1) - (letters[j + 1] == 1))
    if heights[-1] != 0:
        raise InvalidTreeError(f"Slacks {tuple(slacks)} do not close the label cycle of word {tuple(word)}.")
    return tuple(heights[1:-1])


def sample_displacement(rng: np.random.Generator, parent_type: int, word: Sequence[int]) -> tuple[int, ...]:
    total = displacement_budget(parent_type, word)
    parts = len(word) + 1
    bars = np.sort(rng.choice(total + parts - 1, parts - 1, replace=False)) if parts > 1 else []
    slacks = []
    previous = -1
    for bar in bars:
        slacks.append(int(bar) - previous - 1)
        previous = int(bar)
    slacks.append(total + parts - 1 - previous - 1)
    return displacement_from_slacks(parent_type, word, slacks)


def enumerate_displacements(parent_type: int, word: Sequence[int]) -> list[tuple[int, ...]]:
    """Every allowed doubled displacement list, in lexicographic order of the bars."""
    total = displacement_budget(parent_type, word)
    parts = len(word) + 1
    result = []
    for bars in itertools.combinations(range(total + parts - 1), parts - 1):
        edges = (-1, *bars, total + parts - 1)
        slacks = [edges[k + 1] - edges[k] - 1 for k in range(parts)]
        result.append(displacement_from_slacks(parent_type, word, slacks))
    return result


def assign_labels(rng: np.random.Generator, tree: TypedTree, root_label2: int) -> tuple[int, ...]:
    """Doubled labels for every vertex of a 4-type skeleton, in arena order."""
    labels = [0] * tree.vertex_count
    labels[0] = root_label2
    for v in range(tree.vertex_count):
        children = tree.children(v)
        if not children:
            continue
        vertex_type = tree.types[v]
        if vertex_type in (1, 2):
            for c in children:
                labels[c] = labels[v]
        elif vertex_type in (3, 4):
            displacement = sample_displacement(rng, vertex_type, tree.child_word(v))
            for c, y in zip(children, displacement):
                labels[c] = labels[v] + y
        else:
            raise InvalidTreeError(f"Vertex {v} has type {vertex_type}, mobiles use types 1 to 4.")
    return tuple(labels)


def sample_labels(rng: np.random.Generator, skeleton: TypedTree, root_label2: int | None = None) -> LabeledMobile:
    root_label2 = skeleton.types[0] - 1 if root_label2 is None else root_label2
    labels = assign_labels(rng, skeleton, root_label2)
    return LabeledMobile(skeleton.types, skeleton.child_count, labels)


@dataclass
class ReversalReport:
    words_checked: int = 0
    failures: list[tuple[int, tuple[int, ...]]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def reversal_bijection_check(law: OffspringLaw, max_len: int) -> ReversalReport:
    """Checks that y -> reversed(-y) maps the displacements of w onto those of reversed(w)."""
    report = ReversalReport()
    for label in law.labels:
        if label not in (3, 4) or not isinstance(law.offspring(label), TableOffspring):
            continue
        for counts, _ in law.support_counts(label):
            if sum(counts) > max_len:
                continue
            for word in sorted(set(itertools.permutations(law.word_of(counts)))):
                report.words_checked += 1
                image = {tuple(-y for y in reversed(d)) for d in enumerate_displacements(label, word)}
                target = set(enumerate_displacements(label, tuple(reversed(word))))
                if image != target:
                    report.failures.append((label, word))
    return report
