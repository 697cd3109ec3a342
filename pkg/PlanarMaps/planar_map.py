#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

"""Rooted, optionally pointed planar maps stored as rotation systems.

Half-edge ``h`` has a ``twin`` and a ``next`` half-edge counterclockwise
around its origin; vertices are the cycles of ``next`` and faces the cycles
of h -> next[twin[h]]. The root half-edge goes from e- (its origin) to e+
(the origin of its twin).
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Sequence

import networkx as nx


class InvalidMapError(ValueError):
    """Raised for rotation systems that are not rooted planar maps."""


@dataclass(frozen=True)
class MapStats:
    vertices: int
    edges: int
    faces: int
    face_degrees: tuple[int, ...]
    """Sorted face degrees, counted with multiplicity."""

    @property
    def euler_characteristic(self) -> int:
        return self.vertices - self.edges + self.faces


@dataclass(frozen=True)
class PlanarMap:
    twin: tuple[int, ...]
    next: tuple[int, ...]
    root: int | None
    point: int | None = None
    """Vertex id of the pointed vertex, if any."""

    def __post_init__(self):
        object.__setattr__(self, "twin", tuple(self.twin))
        object.__setattr__(self, "next", tuple(self.next))

    # --- construction -----------------------------------------------------

    @classmethod
    def vertex_map(cls, pointed: bool = True) -> "PlanarMap":
        """The map with a single vertex and no edge."""
        return cls((), (), None, 0 if pointed else None)

    @classmethod
    def from_json(cls, data: dict[str, Any] | str) -> "PlanarMap":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            result = cls(tuple(data["twin"]), tuple(data["next"]), data["root"], data.get("point"))
        except (KeyError, TypeError) as exc:
            raise InvalidMapError("Map JSON needs 'twin', 'next' and 'root'.") from exc
        result.validate()
        return result

    def to_json(self) -> dict[str, Any]:
        return {"twin": list(self.twin), "next": list(self.next), "root": self.root, "point": self.point}

    # --- structure -----------------------------------------------------------

    @property
    def half_edge_count(self) -> int:
        return len(self.twin)

    @cached_property
    def origin(self) -> tuple[int, ...]:
        """Vertex id of every half-edge; vertices are numbered by their smallest half-edge."""
        origin = [-1] * self.half_edge_count
        vertex = 0
        for start in range(self.half_edge_count):
            if origin[start] >= 0:
                continue
            h = start
            while origin[h] < 0:
                origin[h] = vertex
                h = self.next[h]
            vertex += 1
        return tuple(origin)

    @property
    def vertex_count(self) -> int:
        if not self.half_edge_count:
            return 1
        return max(self.origin) + 1

    @property
    def edge_count(self) -> int:
        return self.half_edge_count // 2

    @cached_property
    def faces(self) -> tuple[tuple[int, ...], ...]:
        seen = [False] * self.half_edge_count
        faces = []
        for start in range(self.half_edge_count):
            if seen[start]:
                continue
            face = []
            h = start
            while not seen[h]:
                seen[h] = True
                face.append(h)
                h = self.next[self.twin[h]]
            faces.append(tuple(face))
        return tuple(faces)

    @property
    def face_count(self) -> int:
        return len(self.faces) if self.half_edge_count else 1

    def half_edges_at(self, vertex: int) -> list[int]:
        """Half-edges leaving ``vertex`` in counterclockwise order."""
        start = self.origin.index(vertex)
        around = [start]
        h = self.next[start]
        while h != start:
            around.append(h)
            h = self.next[h]
        return around

    def degree(self, vertex: int) -> int:
        if not self.half_edge_count:
            return 0
        return sum(1 for v in self.origin if v == vertex)

    @property
    def root_tail(self) -> int:
        """e-, the origin of the root half-edge."""
        self._require_root()
        return self.origin[self.root]

    @property
    def root_head(self) -> int:
        """e+, the vertex the root half-edge points to."""
        self._require_root()
        return self.origin[self.twin[self.root]]

    def stats(self) -> MapStats:
        degrees = tuple(sorted(len(face) for face in self.faces)) if self.half_edge_count else (0,)
        return MapStats(self.vertex_count, self.edge_count, self.face_count, degrees)

    def face_degree_counts(self) -> Counter:
        return Counter(self.stats().face_degrees)

    # --- graph view ----------------------------------------------------------------

    def graph(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(range(self.vertex_count))
        for h in range(self.half_edge_count):
            if h < self.twin[h]:
                graph.add_edge(self.origin[h], self.origin[self.twin[h]], key=h)
        return graph

    def distances_from(self, vertex: int) -> dict[int, int]:
        return nx.single_source_shortest_path_length(self.graph(), vertex)

    # --- derived maps -----------------------------------------------------------------

    def with_root(self, root: int | None, point: int | None = None) -> "PlanarMap":
        return PlanarMap(self.twin, self.next, root, point)

    def relabel(self, permutation: Sequence[int]) -> "PlanarMap":
        """The same map with half-edge h renamed permutation[h]."""
        n = self.half_edge_count
        twin = [0] * n
        nxt = [0] * n
        for h in range(n):
            twin[permutation[h]] = permutation[self.twin[h]]
            nxt[permutation[h]] = permutation[self.next[h]]
        relabelled = PlanarMap(tuple(twin), tuple(nxt), None if self.root is None else permutation[self.root])
        if self.point is None:
            return relabelled
        anchor = self.origin.index(self.point)
        return relabelled.with_root(relabelled.root, relabelled.origin[permutation[anchor]])

    # --- validation -------------------------------------------------------------------

    def problem(self) -> str | None:
        n = self.half_edge_count
        if len(self.next) != n:
            return "twin and next have different lengths"
        if n == 0:
            if self.root is not None:
                return "the vertex map has no root half-edge"
            if self.point not in (None, 0):
                return f"pointed vertex {self.point} does not exist"
            return None
        if n % 2:
            return "odd number of half-edges"
        if sorted(self.twin) != list(range(n)) or any(self.twin[self.twin[h]] != h or self.twin[h] == h
                                                      for h in range(n)):
            return "twin is not a fixed-point-free involution"
        if sorted(self.next) != list(range(n)):
            return "next is not a permutation"
        if self.root is None or not 0 <= self.root < n:
            return f"root half-edge {self.root} is missing"
        if self.point is not None and not 0 <= self.point < self.vertex_count:
            return f"pointed vertex {self.point} does not exist"
        if not nx.is_connected(self.graph()):
            return "map is not connected"
        if self.stats().euler_characteristic != 2:
            return f"Euler characteristic is {self.stats().euler_characteristic}, the map is not planar"
        return None

    def validate(self) -> "PlanarMap":
        problem = self.problem()
        if problem is not None:
            raise InvalidMapError(f"Invalid planar map: {problem}")
        return self

    def _require_root(self):
        if self.root is None:
            raise InvalidMapError("The vertex map has no root half-edge.")


def map_stats(m: PlanarMap) -> MapStats:
    return m.stats()


def reverse_root(m: PlanarMap) -> PlanarMap:
    """Swaps e- and e+; maps positive pointed maps onto negative ones and back."""
    if m.root is None:
        return m
    return m.with_root(m.twin[m.root], m.point)
