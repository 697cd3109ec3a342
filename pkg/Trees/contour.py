#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

from __future__ import annotations

from typing import Collection, NamedTuple

from Trees.typed_tree import InvalidTreeError, LabeledMobile, TypedTree, mobile_problem


class Corner(NamedTuple):
    vertex: int
    type: int
    label2: int
    sector: int
    """Index of the angular sector among the corners of ``vertex``, in contour order."""


class ContourWalk(NamedTuple):
    corners: list[Corner]
    split: int
    """Number of corners visited before the cut vertex (all corners if no cut)."""
    gaps: tuple[tuple[int, int], ...] = ()
    """(number of corners visited before, vertex) of every gap vertex, in visiting order."""


def corner_sequence(m: LabeledMobile) -> list[Corner]:
    """Corners of type-1/2 vertices in contour order.

    A non-root vertex with c children has c + 1 angular sectors, the root has
    max(c, 1).
    """
    if not isinstance(m, LabeledMobile):
        problem = mobile_problem(m)
        if problem is not None:
            raise InvalidTreeError(f"Not a valid mobile: {problem}")
    return contour_walk(m).corners


def contour_walk(t: TypedTree, cut: int | None = None, gaps: Collection[int] = ()) -> ContourWalk:
    """Contour traversal emitting the corners of type-1/2 vertices.

    The optional ``cut`` vertex is treated as an unexplored stub: it emits no
    corner and ``split`` records where the walk passed it. Vertices in
    ``gaps`` are unexplored as well; the walk skips their subtrees and records
    where it passed them.
    """
    if t.labels is None:
        raise InvalidTreeError("Contour corners need a labelled tree.")

    corners: list[Corner] = []
    split = -1
    passed: list[tuple[int, int]] = []
    # (vertex, index of the next child to visit)
    stack = [[0, 0]]

    while stack:
        frame = stack[-1]
        v, i = frame
        count = t.child_count[v]

        if v == cut:
            split = len(corners)
            stack.pop()
            continue
        if v in gaps:
            passed.append((len(corners), v))
            stack.pop()
            continue

        emit = t.types[v] in (1, 2)
        if i < count:
            if emit:
                corners.append(Corner(v, t.types[v], t.labels[v], i))
            frame[1] += 1
            stack.append([t.child_start[v] + i, 0])
            continue

        # all children visited: the closing sector for non-root vertices,
        # the single sector of a childless root
        if emit and (v != 0 or count == 0):
            corners.append(Corner(v, t.types[v], t.labels[v], count))
        stack.pop()

    if split < 0:
        split = len(corners)
    return ContourWalk(corners, split, tuple(passed))
