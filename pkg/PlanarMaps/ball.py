#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from PlanarMaps.canonical import canonical_code
from PlanarMaps.planar_map import InvalidMapError, PlanarMap


@dataclass(frozen=True)
class MapBall:
    """The ball B(k) around e+, rooted at the same oriented edge.

    Balls forget the pointed vertex of the map they were cut from.
    """

    map: PlanarMap
    radius: int

    @cached_property
    def code(self) -> bytes:
        return canonical_code(self.map)

    @property
    def root_degree(self) -> int:
        return self.map.degree(self.map.root_head) if self.map.root is not None else 0

    def problem(self) -> str | None:
        problem = self.map.problem()
        if problem is not None or self.map.root is None:
            return problem
        distances = self.map.distances_from(self.map.root_head)
        if any(d > self.radius for d in distances.values()):
            return f"a vertex lies farther than {self.radius} from e+"
        for h in range(self.map.half_edge_count):
            ends = (self.map.origin[h], self.map.origin[self.map.twin[h]])
            if all(distances[v] == self.radius for v in ends):
                return f"an edge joins two vertices at distance {self.radius}"
        return None


def ball(m: PlanarMap, k: int) -> MapBall:
    """Vertices within distance k of e+, without the edges joining two vertices at distance exactly k."""
    if k < 1:
        raise InvalidMapError(f"Ball radius must be >= 1, got {k}.")
    if m.root is None:
        return MapBall(m.with_root(None, None), k)

    distances = m.distances_from(m.root_head)

    def inside(h: int) -> bool:
        tail = distances.get(m.origin[h], k + 1)
        head = distances.get(m.origin[m.twin[h]], k + 1)
        return tail <= k and head <= k and not (tail == k and head == k)

    kept = [h for h in range(m.half_edge_count) if inside(h)]
    if m.root not in kept:
        raise InvalidMapError("The root edge is not inside the ball.")
    new = {h: index for index, h in enumerate(kept)}

    twin = [new[m.twin[h]] for h in kept]
    nxt = []
    for h in kept:
        following = m.next[h]
        while following not in new:
            following = m.next[following]
        nxt.append(new[following])
    return MapBall(PlanarMap(tuple(twin), tuple(nxt), new[m.root]), k)
