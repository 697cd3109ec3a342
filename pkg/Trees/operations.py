#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from Trees.encoding import canonical_encode
from Trees.typed_tree import Forest, InvalidTreeError, TypedTree

TreeOrForest = Union[TypedTree, Forest]


def truncate(t: TreeOrForest, k: int) -> TreeOrForest:
    """Keeps the vertices at height <= k.

    Truncating a mobile yields a plain labelled TypedTree since cut type-2
    vertices no longer satisfy the mobile rules.
    """
    if k < 0:
        raise ValueError("Truncation height must be nonnegative.")
    if isinstance(t, Forest):
        return Forest(tuple(truncate(tree, k) for tree in t.trees))

    if t.height <= k:
        return TypedTree(t.types, t.child_count, t.labels)

    # breadth-first storage: the kept vertices are a prefix of the arena
    depth = t.depth
    keep = 0
    while keep < t.vertex_count and depth[keep] <= k:
        keep += 1

    child_count = tuple(0 if depth[v] == k else t.child_count[v] for v in range(keep))
    labels = None if t.labels is None else t.labels[:keep]
    return TypedTree(t.types[:keep], child_count, labels)


def subtree_at(t: TypedTree, u: int) -> TypedTree:
    if not 0 <= u < t.vertex_count:
        raise InvalidTreeError(f"Unknown vertex id {u}.")

    types, counts, labels = [], [], []
    queue = deque([u])
    while queue:
        v = queue.popleft()
        types.append(t.types[v])
        counts.append(t.child_count[v])
        labels.append(t.label(v))
        queue.extend(t.children(v))

    return TypedTree(tuple(types), tuple(counts), None if t.labels is None else tuple(labels))


@dataclass(frozen=True)
class LocalDistance:
    value: Fraction
    equal: bool
    agreement_height: int
    """Largest k with equal truncations, -1 when the roots already differ."""


def local_distance(f1: TreeOrForest, f2: TreeOrForest) -> LocalDistance:
    a, b = _as_forest(f1), _as_forest(f2)

    if canonical_encode(a) == canonical_encode(b):
        return LocalDistance(Fraction(0), True, max(a.height, b.height))

    # truncations agree up to some p and disagree from p + 1 on
    agreement = -1
    for k in range(max(a.height, b.height) + 1):
        if canonical_encode(truncate(a, k)) != canonical_encode(truncate(b, k)):
            break
        agreement = k

    value = Fraction(1) if agreement < 0 else Fraction(1, 1 + agreement)
    return LocalDistance(value, False, agreement)


def _as_forest(t: TreeOrForest) -> Forest:
    if isinstance(t, Forest):
        return t
    return Forest((t,))
