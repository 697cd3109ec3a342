#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

"""Finite windows of the size-biased infinite mobile and the map they see.

The infinite mobile has a single spine and a.s. finite off-spine subtrees.
A window stops the spine at a stub vertex u_H of depth H and leaves every
off-spine subtree unexplored until something needs it: an unexplored vertex
is a gap in the contour, and expanding it samples its children word and
labels, which turns it into corners and smaller gaps. Growth only ever
samples what the infinite object would have held there, so a window is one
infinite mobile explored lazily.

The corners of the infinite mobile are ordered along Z: the right side of
the spine read from the deep end up to the root, then the left side read
down again. Successors are searched forward in that order without ever
wrapping around; a search that meets a gap before its target stays
unresolved, and the gap blocking it is what has to be expanded next.

Along Z, the level of a corner (its label for type 1, one below it for
type 2) never drops by more than one unit between neighbours and never
drops below a search target without meeting it. So the corners pointing at
a type-1 corner p of label l are exactly those between p and the last
corner before it that has label l or level below l.
"""

from __future__ import annotations

import logging
from bisect import bisect_right
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from Branching.offspring_law import OffspringLaw
from Branching.perron import mean_matrix, perron
from Branching.size_bias import size_bias, spine_child_index
from InfiniteMap.config import window_vertex_cap
from PlanarMaps.finite_maps import MapSign
from PlanarMaps.planar_map import PlanarMap
from Sampler.galton_watson import SamplingOverflow
from Sampler.labels import sample_displacement
from Trees.contour import ContourWalk, Corner, contour_walk
from Trees.typed_tree import TypedTree

_logger = logging.getLogger(__name__)


class StabilizationError(RuntimeError):
    """Raised when a window does not settle within the height cap."""


class InfiniteMobileWindow:
    """Lazily grown infinite mobile for a positive or null infinite map."""

    def __init__(self, rng: np.random.Generator, law: OffspringLaw, sign: MapSign,
                 vertex_cap: int = window_vertex_cap):
        if sign is MapSign.NEGATIVE:
            raise ValueError("Negative maps are positive maps with the root reversed.")
        self.rng = rng
        self.law = law
        self.sign = sign
        self.vertex_cap = vertex_cap
        self.b = [float(x) for x in perron(mean_matrix(law)).b]
        self.biased = size_bias(law, self.b)

        self.types: list[int] = []
        self.labels: list[int] = []
        self.children: list[list[int]] = []
        self.depth: list[int] = []
        self.expanded: list[bool] = []
        self.spine: list[int] = []

        if sign is MapSign.POSITIVE:
            self.spine.append(self._add(1, 0, -1))
        else:
            if 2 not in law.labels:
                raise ValueError("Null infinite maps need flagged-edge vertices of type 2.")
            root = self._add(2, 1, -1)
            self.expanded[root] = True
            sides = [self._add(4, 1, root), self._add(4, 1, root)]
            # equal b weights on both type-2 components: the spine side is uniform
            spine_side = int(rng.integers(2))
            self.spine.extend([root, sides[spine_side]])

    # --- growth ----------------------------------------------------------------

    @property
    def stub(self) -> int:
        return self.spine[-1]

    @property
    def height(self) -> int:
        return self.depth[self.stub]

    @property
    def vertex_count(self) -> int:
        return len(self.types)

    @property
    def gaps(self) -> list[int]:
        """Unexplored vertices, the stub included."""
        return [v for v, done in enumerate(self.expanded) if not done]

    def extend_to(self, height: int):
        while self.height < height:
            self._extend_spine()

    def expand(self, v: int):
        """Samples the children of the unexplored off-spine vertex ``v``."""
        if self.expanded[v]:
            return
        if v == self.stub:
            raise ValueError("The stub grows with the spine, not on its own.")
        word = self.law.sample_word(self.rng, self.types[v])
        for letter, label2 in zip(word, self._child_labels(v, word)):
            self._add(letter, label2, v)
        self.expanded[v] = True

    def expand_all(self):
        """Samples every off-spine subtree in full."""
        stack = [v for v in self.gaps if v != self.stub]
        while stack:
            v = stack.pop()
            self.expand(v)
            stack.extend(self.children[v])

    def _add(self, vertex_type: int, label2: int, parent: int) -> int:
        if len(self.types) >= self.vertex_cap:
            raise SamplingOverflow(f"Infinite mobile window exceeded {self.vertex_cap} vertices.")
        v = len(self.types)
        self.types.append(vertex_type)
        self.labels.append(label2)
        self.children.append([])
        self.depth.append(0 if parent < 0 else self.depth[parent] + 1)
        self.expanded.append(False)
        if parent >= 0:
            self.children[parent].append(v)
        return v

    def _child_labels(self, v: int, word: list[int]) -> list[int]:
        if self.types[v] in (1, 2):
            return [self.labels[v]] * len(word)
        return [self.labels[v] + y for y in sample_displacement(self.rng, self.types[v], word)]

    def _extend_spine(self):
        u = self.stub
        word = self.biased.sample_word(self.rng, self.types[u])
        index = spine_child_index(self.rng, word, self.b, self.law)
        kids = [self._add(letter, label2, u) for letter, label2 in zip(word, self._child_labels(u, word))]
        self.expanded[u] = True
        self.spine.append(kids[index])

    # --- snapshots ---------------------------------------------------------------

    def snapshot(self) -> "MobileWindow":
        order = []
        queue = deque([0])
        while queue:
            v = queue.popleft()
            order.append(v)
            queue.extend(self.children[v])
        arena = [0] * len(order)
        for index, v in enumerate(order):
            arena[v] = index
        tree = TypedTree(
            tuple(self.types[v] for v in order),
            tuple(len(self.children[v]) for v in order),
            tuple(self.labels[v] for v in order),
        )
        return MobileWindow(
            tree,
            tuple(arena[v] for v in self.spine),
            self.sign,
            frozenset(arena[v] for v in self.gaps),
            tuple(order),
        )

    def spine_type1_labels(self) -> list[int]:
        return [self.labels[v] for v in self.spine if self.types[v] == 1]


@dataclass(frozen=True)
class MobileWindow:
    """A window frozen into a labelled tree; ``spine[-1]`` is the unexplored stub.

    ``gaps`` holds the tree vertices left unexplored (the stub among them) and
    ``window_vertex[v]`` the id of tree vertex ``v`` in the growing window.
    """

    tree: TypedTree
    spine: tuple[int, ...]
    sign: MapSign
    gaps: frozenset[int] = frozenset()
    window_vertex: tuple[int, ...] = field(default=(), repr=False)

    @property
    def height(self) -> int:
        return self.tree.depth[self.spine[-1]]

    @cached_property
    def _walk(self) -> ContourWalk:
        return contour_walk(self.tree, gaps=self.gaps | {self.spine[-1]})

    @cached_property
    def _split(self) -> tuple[int, int]:
        """(corners before the stub, index of the stub among the passed gaps)."""
        for index, (position, v) in enumerate(self._walk.gaps):
            if v == self.spine[-1]:
                return position, index
        raise ValueError("The stub was never passed.")

    @cached_property
    def corner_line(self) -> list[Corner]:
        """Window corners in their order along Z."""
        split, _ = self._split
        return self._walk.corners[split:] + self._walk.corners[:split]

    @cached_property
    def line_gaps(self) -> list[tuple[int, int]]:
        """(position, tree vertex) of the gaps inside the line; gap k sits just before corner k."""
        split, stub_index = self._split
        size = len(self._walk.corners)
        after = [(position - split, v) for position, v in self._walk.gaps[stub_index + 1:]]
        before = [(position + size - split, v) for position, v in self._walk.gaps[:stub_index]]
        return after + before

    @cached_property
    def _gap_positions(self) -> list[int]:
        return [position for position, _ in self.line_gaps]

    @property
    def first_corner(self) -> int:
        """Position on the line of the first corner of the root."""
        return len(self._walk.corners) - self._split[0]

    @cached_property
    def successors(self) -> list[int | None]:
        return forward_successors(self.corner_line, self._gap_positions)

    @cached_property
    def corner_positions(self) -> dict[int, list[int]]:
        positions: dict[int, list[int]] = {}
        for k, corner in enumerate(self.corner_line):
            positions.setdefault(corner.vertex, []).append(k)
        return positions

    def _gap_after(self, k: int) -> int | None:
        index = bisect_right(self._gap_positions, k)
        return self.line_gaps[index][1] if index < len(self.line_gaps) else None

    def _unresolved(self, k: int, found: set[int | None]):
        if self.successors[k] is None:
            found.add(self._gap_after(k))

    def blockers(self, vertex: int) -> set[int | None]:
        """Gaps hiding arcs at the type-1 tree vertex ``vertex``; ``None`` is the spine stub.

        An empty set means every arc at ``vertex`` is resolved in the window.
        """
        line = self.corner_line
        found: set[int | None] = set()
        for p in self.corner_positions.get(vertex, ()):
            self._unresolved(p, found)
            level = line[p].label2
            index = bisect_right(self._gap_positions, p) - 1
            wall = self._gap_positions[index] if index >= 0 else 0
            k = p - 1
            while k >= wall and not _closes_incoming(line[k], level):
                corner = line[k]
                if corner.type == 2 and corner.label2 == level + 1:
                    # the arc is the merged edge: the other corner must be resolved too
                    for other in self.corner_positions[corner.vertex]:
                        self._unresolved(other, found)
                k -= 1
            if k < wall:
                found.add(self.line_gaps[index][1] if index >= 0 else None)
        return found

    def root_blockers(self) -> set[int | None]:
        """Gaps hiding the successors that make up the root edge."""
        found: set[int | None] = set()
        for k in self.corner_positions.get(0, ()):
            self._unresolved(k, found)
        return found


def _closes_incoming(corner: Corner, level: int) -> bool:
    if corner.type == 1:
        return corner.label2 <= level
    return corner.label2 - 1 < level


def forward_successors(line: list[Corner], gaps: list[int] | tuple[int, ...] = ()) -> list[int | None]:
    """Successor positions along the line, ``None`` when it lies beyond the window.

    ``gaps`` are sorted line positions of unexplored regions; no search crosses one.
    """
    result: list[int | None] = [None] * len(line)
    nearest: dict[int, int] = {}
    pending = len(gaps) - 1
    for k in range(len(line) - 1, -1, -1):
        while pending >= 0 and gaps[pending] > k:
            nearest.clear()
            pending -= 1
        corner = line[k]
        result[k] = nearest.get(corner.label2 - (2 if corner.type == 1 else 1))
        if corner.type == 1:
            nearest[corner.label2] = k
    return result


@dataclass(frozen=True)
class WindowMap:
    """The part of the infinite map resolved by a window.

    ``map`` is a rotation system that is not a valid map on its own: arcs
    leaving the window are missing. ``mobile_vertex[v]`` is the tree vertex
    of map vertex ``v``; ``root`` is ``None`` until the root edge is resolved.
    """

    map: PlanarMap
    mobile_vertex: tuple[int, ...]
    incoming_root_corners: int
    """Corners whose successor is a corner of the mobile root."""


def window_map(window: MobileWindow) -> WindowMap:
    line = window.corner_line
    succ = window.successors
    modulus = 2 * (len(line) + 1)

    complete_type2 = {}
    for k, corner in enumerate(line):
        if corner.type == 2:
            complete_type2[corner.vertex] = complete_type2.get(corner.vertex, True) and succ[k] is not None

    attached: dict[int, list[tuple[tuple[int, int], int]]] = {}
    twin: list[int] = []
    type2_heads: dict[int, list[tuple[int, int]]] = {}
    head_of: dict[int, int] = {}
    incoming_root = 0

    def new_half_edge() -> int:
        twin.append(-1)
        return len(twin) - 1

    for k, corner in enumerate(line):
        s = succ[k]
        if s is not None and line[s].vertex == 0:
            incoming_root += 1
        if s is None or (corner.type == 2 and not complete_type2[corner.vertex]):
            continue
        target = line[s]
        head = new_half_edge()
        head_of[k] = head
        attached.setdefault(target.vertex, []).append(((s, (2 * s - 2 * k) % modulus), head))
        if corner.type == 1:
            tail = new_half_edge()
            twin[head], twin[tail] = tail, head
            attached.setdefault(corner.vertex, []).append(((k, (2 * k - 2 * s) % modulus), tail))
        else:
            type2_heads.setdefault(corner.vertex, []).append((k, head))

    for heads in type2_heads.values():
        (_, first), (_, second) = sorted(heads)
        twin[first], twin[second] = second, first

    nxt = [-1] * len(twin)
    owner = [-1] * len(twin)
    for vertex, around in attached.items():
        around.sort()
        for j, (_, h) in enumerate(around):
            nxt[h] = around[(j + 1) % len(around)][1]
            owner[h] = vertex

    root = _root_half_edge(window, head_of, type2_heads)
    built = PlanarMap(tuple(twin), tuple(nxt), root)
    mobile = [0] * (built.vertex_count if twin else 0)
    for h, vertex in enumerate(owner):
        mobile[built.origin[h]] = vertex
    return WindowMap(built, tuple(mobile), incoming_root)


def _root_half_edge(window: MobileWindow, head_of: dict[int, int],
                    type2_heads: dict[int, list[tuple[int, int]]]) -> int | None:
    if window.tree.root_type == 1:
        return head_of.get(window.first_corner)
    heads = type2_heads.get(0)
    if heads is None:
        return None
    # the merged root edge points from the successor of the second root corner to that of the first
    by_position = dict(heads)
    first = by_position.get(window.first_corner)
    if first is None:
        return None
    return next(head for k, head in heads if k != window.first_corner)


def sample_infinite_mobile_window(rng: np.random.Generator, law: OffspringLaw, sign: MapSign, height: int,
                                  vertex_cap: int = window_vertex_cap) -> MobileWindow:
    """A window of the infinite mobile whose spine reaches depth ``height``, off-spine subtrees in full."""
    window = InfiniteMobileWindow(rng, law, sign, vertex_cap)
    window.extend_to(height)
    window.expand_all()
    _logger.debug("Window of height %d holds %d vertices", height, window.vertex_count)
    return window.snapshot()
