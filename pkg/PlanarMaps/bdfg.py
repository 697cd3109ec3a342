#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

"""Mobile to pointed rooted planar map.

Every corner of a type-1 vertex with doubled label L is joined to the next
type-1 corner, cyclically in contour order, whose label is L - 2. A type-2
corner with label L is joined the same way to the next type-1 corner
labelled L - 1. Corners with no such successor are joined to an extra vertex
r. Both arcs of a type-2 vertex are merged into a single edge and the type-2
vertex disappears, while type-1 vertices and r become the map vertices.

Chords are drawn in the outer region of the tree, which is a disk whose
boundary visits the corners in contour order. The corners of a vertex
follow each other counterclockwise, and inside one corner the arcs are
ordered by how far back along the contour their other end lies. The vertex
r is put on the boundary right after the first corner without a successor,
which no chord separates from the other spokes.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

from PlanarMaps.planar_map import PlanarMap
from Trees.contour import Corner, corner_sequence
from Trees.typed_tree import LabeledMobile, TypedTree

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MobileMap:
    """A map built from a mobile, with the labels carried over.

    ``labels2[v]`` is the doubled label of map vertex ``v`` and
    ``mobile_vertex[v]`` its arena id in the mobile (-1 for r). The distance
    from r to ``v`` is (labels2[v] - labels2[r]) / 2.
    """

    map: PlanarMap
    labels2: tuple[int, ...]
    mobile_vertex: tuple[int, ...]

    @property
    def pointed_vertex(self) -> int:
        return self.map.point

    def distance_labels(self) -> tuple[int, ...]:
        base = self.labels2[self.pointed_vertex]
        return tuple((label - base) // 2 for label in self.labels2)


def successors(corners: Sequence[Corner]) -> list[int | None]:
    """Index of the successor of every corner, ``None`` for corners sent to r."""
    p = len(corners)
    result: list[int | None] = [None] * p
    nearest: dict[int, int] = {}
    # two laps backwards: nearest[L] is the first type-1 corner labelled L after position k
    for k in range(2 * p - 1, -1, -1):
        corner = corners[k % p]
        if k < p:
            target = corner.label2 - (2 if corner.type == 1 else 1)
            found = nearest.get(target)
            result[k] = None if found is None else found % p
        if corner.type == 1:
            nearest[corner.label2] = k
    return result


def pointed_label(corners: Sequence[Corner]) -> int:
    """Doubled label of r."""
    candidates = [c.label2 - (2 if c.type == 1 else 1) for c in corners]
    return min(candidates)


def bdfg_embedding(m: LabeledMobile) -> MobileMap:
    corners = corner_sequence(m)

    type1 = [v for v in range(m.vertex_count) if m.types[v] == 1]
    if m.vertex_count == 1:
        return MobileMap(PlanarMap.vertex_map(), (m.labels[0],), (0,))

    p = len(corners)
    succ = successors(corners)
    spokes = [i for i, s in enumerate(succ) if s is None]
    # doubled boundary positions: corner i sits at 2i, r right after the first spoke
    r_position = 2 * spokes[0] + 1

    vertex_id = {v: index for index, v in enumerate(type1)}
    r = len(type1)
    # attachments per map vertex: (sort key, half-edge)
    attached: list[list[tuple[tuple[int, ...], int]]] = [[] for _ in range(r + 1)]
    twin: list[int] = []
    type2_heads: dict[int, list[int]] = {}
    first_arc_head = -1

    def new_half_edge() -> int:
        twin.append(-1)
        return len(twin) - 1

    for i, corner in enumerate(corners):
        s = succ[i]
        head = new_half_edge()
        if s is None:
            attached[r].append((((r_position - 2 * i) % (2 * p),), head))
            other_position = r_position
        else:
            target = vertex_id[corners[s].vertex]
            attached[target].append(((s, (2 * s - 2 * i) % (2 * p)), head))
            other_position = 2 * s

        if corner.type == 1:
            tail = new_half_edge()
            twin[head], twin[tail] = tail, head
            attached[vertex_id[corner.vertex]].append(((i, (2 * i - other_position) % (2 * p)), tail))
            if i == 0:
                first_arc_head = head
        else:
            type2_heads.setdefault(corner.vertex, []).append(head)

    for heads in type2_heads.values():
        first, second = heads
        twin[first], twin[second] = second, first

    nxt = [-1] * len(twin)
    for around in attached:
        around.sort()
        for k, (_, h) in enumerate(around):
            nxt[h] = around[(k + 1) % len(around)][1]

    if m.types[0] == 1:
        root = first_arc_head
    else:
        # the merged root edge points from succ(second root corner) to succ(first)
        root = type2_heads[0][1]

    built = PlanarMap(tuple(twin), tuple(nxt), root)
    renumber = [built.origin[around[0][1]] for around in attached]
    point = renumber[r]
    built = built.with_root(root, point)

    base = pointed_label(corners)
    labels2 = [0] * (r + 1)
    mobile_vertex = [-1] * (r + 1)
    for v in type1:
        labels2[renumber[vertex_id[v]]] = m.labels[v]
        mobile_vertex[renumber[vertex_id[v]]] = v
    labels2[point] = base

    _logger.debug("Mobile with %d corners gave a map with %d edges and %d spokes", p, built.edge_count, len(spokes))
    return MobileMap(built, tuple(labels2), tuple(mobile_vertex))


def bdfg(m: LabeledMobile) -> PlanarMap:
    """The pointed rooted map of a mobile; a lone type-1 vertex gives the vertex map."""
    return bdfg_embedding(m).map


def predicted_counts(m: TypedTree) -> tuple[int, int, int]:
    """(#V, #E, #F) read on the mobile; valid once it has a type-3/4 vertex."""
    counts = m.count_types()
    type1, type3, type4 = counts.get(1, 0), counts.get(3, 0), counts.get(4, 0)
    return 1 + type1, type1 + type3 + type4 - 1, type3 + type4
