#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

"""Relabelling-invariant byte codes of rooted (pointed) maps.

Half-edges are renumbered in breadth-first order from the root, following
``next`` before ``twin``. The code lists, for every renumbered half-edge,
its twin and its next, followed by the new number of the lowest half-edge
around the pointed vertex plus one (0 when unpointed). Two rooted maps have
the same code iff they are isomorphic as rooted pointed maps.
"""

from __future__ import annotations

from collections import deque

from PlanarMaps.planar_map import InvalidMapError, PlanarMap
from Trees.encoding import encode_varint

_MAP = ord("M")


def canonical_order(m: PlanarMap) -> list[int]:
    """new[h] for every half-edge h."""
    if m.root is None:
        return []
    new = [-1] * m.half_edge_count
    new[m.root] = 0
    found = 1
    queue = deque([m.root])
    while queue:
        h = queue.popleft()
        for neighbour in (m.next[h], m.twin[h]):
            if new[neighbour] < 0:
                new[neighbour] = found
                found += 1
                queue.append(neighbour)
    if found != m.half_edge_count:
        raise InvalidMapError("Map is not connected, some half-edges are unreachable from the root.")
    return new


def canonical_code(m: PlanarMap) -> bytes:
    out = bytearray([_MAP])
    out += encode_varint(m.half_edge_count)
    if m.root is None:
        out += encode_varint(0 if m.point is None else 1)
        return bytes(out)

    new = canonical_order(m)
    old = [0] * len(new)
    for h, k in enumerate(new):
        old[k] = h
    for k in range(len(new)):
        h = old[k]
        out += encode_varint(new[m.twin[h]])
        out += encode_varint(new[m.next[h]])

    if m.point is None:
        out += encode_varint(0)
    else:
        anchor = min(new[h] for h in range(len(new)) if m.origin[h] == m.point)
        out += encode_varint(anchor + 1)
    return bytes(out)


def canonical_map(m: PlanarMap) -> PlanarMap:
    """The representative of ``m`` whose half-edges are numbered in canonical order."""
    if m.root is None:
        return m
    return m.relabel(canonical_order(m))
