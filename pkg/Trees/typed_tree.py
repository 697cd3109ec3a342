#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

"""Arena storage for typed plane trees, labelled mobiles and forests.

Vertices are stored in breadth-first order with the root at index 0, so the
children of a vertex occupy a contiguous index range and every truncation is
a prefix of the arena. Labels are stored doubled: type 1/3 vertices carry
even labels and type 2/4 vertices odd ones.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterable, Iterator, Sequence


class InvalidTreeError(ValueError):
    """Raised for malformed trees, mobiles or unknown vertex ids."""


@dataclass(frozen=True)
class TypedTree:
    """A finite plane tree with a type in [K] per vertex.

    ``types[v]`` and ``child_count[v]`` are given in breadth-first order;
    ``labels`` is ``None`` for unlabelled trees.
    """

    types: tuple[int, ...]
    child_count: tuple[int, ...]
    labels: tuple[int, ...] | None = None

    def __post_init__(self):
        n = len(self.types)
        if n == 0:
            raise InvalidTreeError("A tree needs at least its root vertex.")
        if len(self.child_count) != n:
            raise InvalidTreeError("types and child_count must have the same length.")
        if self.labels is not None and len(self.labels) != n:
            raise InvalidTreeError("labels must have one entry per vertex.")
        if any(t < 1 for t in self.types):
            raise InvalidTreeError("Vertex types are positive integers.")
        if any(c < 0 for c in self.child_count):
            raise InvalidTreeError("Child counts are nonnegative.")
        if sum(self.child_count) != n - 1:
            raise InvalidTreeError(
                f"Child counts describe {sum(self.child_count) + 1} vertices, arena holds {n}."
            )
        # every non-root vertex must have its parent before it in the arena
        next_child = 1
        for v in range(n):
            if next_child <= v and v > 0:
                raise InvalidTreeError("Arena is not in breadth-first order (disconnected vertex).")
            next_child += self.child_count[v]

    # --- construction ---------------------------------------------------

    @classmethod
    def single(cls, vertex_type: int, label2: int | None = None) -> "TypedTree":
        return cls((vertex_type,), (0,), None if label2 is None else (label2,))

    @classmethod
    def from_adjacency(cls, types: Sequence[int], children: Sequence[Sequence[int]],
                       labels: Sequence[int] | None = None, root: int = 0) -> "TypedTree":
        """Builds a tree from arbitrary vertex ids, renumbering them breadth-first."""
        order = []
        queue = deque([root])
        seen = set()
        while queue:
            v = queue.popleft()
            if v in seen:
                raise InvalidTreeError(f"Vertex {v} is reachable twice, input is not a tree.")
            seen.add(v)
            order.append(v)
            queue.extend(children[v])

        if len(order) != len(types):
            raise InvalidTreeError("Input contains vertices unreachable from the root.")

        return cls(
            tuple(types[v] for v in order),
            tuple(len(children[v]) for v in order),
            None if labels is None else tuple(labels[v] for v in order),
        )

    @classmethod
    def from_nested(cls, data: dict[str, Any]) -> "TypedTree":
        """Parses the nested JSON form ``{"type", "label2", "children"}``."""
        types: list[int] = []
        labels: list[int | None] = []
        children: list[list[int]] = []

        stack = [(data, -1)]
        while stack:
            node, parent = stack.pop()
            try:
                vertex_type = int(node["type"])
            except (KeyError, TypeError) as exc:
                raise InvalidTreeError(f"Tree node without a type: {node!r}") from exc
            v = len(types)
            types.append(vertex_type)
            labels.append(node.get("label2"))
            children.append([])
            if parent >= 0:
                children[parent].append(v)
            # reversed so that the first child is popped first
            for child in reversed(node.get("children", [])):
                stack.append((child, v))

        has_labels = [label is not None for label in labels]
        if any(has_labels) and not all(has_labels):
            raise InvalidTreeError("Either every vertex carries a label2 or none does.")

        return cls.from_adjacency(types, children, labels if all(has_labels) else None)

    def to_nested(self) -> dict[str, Any]:
        nodes = [
            {"type": self.types[v], "label2": self.label(v), "children": []}
            for v in range(self.vertex_count)
        ]
        for v in range(1, self.vertex_count):
            nodes[self.parent[v]]["children"].append(nodes[v])
        return nodes[0]

    def with_labels(self, labels: Sequence[int] | None) -> "TypedTree":
        return TypedTree(self.types, self.child_count, None if labels is None else tuple(labels))

    # --- navigation -----------------------------------------------------

    @property
    def vertex_count(self) -> int:
        return len(self.types)

    @property
    def root_type(self) -> int:
        return self.types[0]

    @cached_property
    def child_start(self) -> tuple[int, ...]:
        starts = []
        next_child = 1
        for count in self.child_count:
            starts.append(next_child)
            next_child += count
        return tuple(starts)

    @cached_property
    def parent(self) -> tuple[int, ...]:
        parents = [-1] * self.vertex_count
        for v in range(self.vertex_count):
            for c in self.children(v):
                parents[c] = v
        return tuple(parents)

    @cached_property
    def depth(self) -> tuple[int, ...]:
        depths = [0] * self.vertex_count
        for v in range(1, self.vertex_count):
            depths[v] = depths[self.parent[v]] + 1
        return tuple(depths)

    @property
    def height(self) -> int:
        return self.depth[-1]

    def children(self, v: int) -> range:
        self._check_vertex(v)
        start = self.child_start[v]
        return range(start, start + self.child_count[v])

    def label(self, v: int) -> int | None:
        return None if self.labels is None else self.labels[v]

    def child_word(self, v: int) -> tuple[int, ...]:
        return tuple(self.types[c] for c in self.children(v))

    def address(self, v: int) -> tuple[int, ...]:
        """Ulam-Harris address of ``v`` (1-based child indices from the root)."""
        self._check_vertex(v)
        path = []
        while v != 0:
            p = self.parent[v]
            path.append(v - self.child_start[p] + 1)
            v = p
        return tuple(reversed(path))

    def vertex_at(self, address: Iterable[int]) -> int:
        v = 0
        for index in address:
            if not 1 <= index <= self.child_count[v]:
                raise InvalidTreeError(f"Address {tuple(address)} is not in the tree.")
            v = self.child_start[v] + index - 1
        return v

    def count_types(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for t in self.types:
            counts[t] = counts.get(t, 0) + 1
        return counts

    def iter_depth_first(self) -> Iterator[int]:
        stack = [0]
        while stack:
            v = stack.pop()
            yield v
            stack.extend(reversed(self.children(v)))

    def _check_vertex(self, v: int):
        if not 0 <= v < self.vertex_count:
            raise InvalidTreeError(f"Unknown vertex id {v}.")


def displacement_slacks(parent_type: int, word: Sequence[int], displacements2: Sequence[int]) -> list[int] | None:
    """Slack variables of a doubled displacement list below a type-3/4 vertex.

    Returns ``None`` when some slack is not a nonnegative integer; the
    displacement is allowed iff the slacks exist and sum to the number of
    type-1 letters plus one for a type-3 parent.
    """
    boundary = parent_type - 2
    letters = [boundary, *word, boundary]
    heights = [0, *displacements2, 0]
    slacks = []
    for j in range(len(word) + 1):
        doubled = heights[j + 1] - heights[j] + (letters[j] == 1) + (letters[j + 1] == 1)
        if doubled < 0 or doubled % 2:
            return None
        slacks.append(doubled // 2)
    return slacks


def displacement_budget(parent_type: int, word: Sequence[int]) -> int:
    return sum(1 for letter in word if letter == 1) + (1 if parent_type == 3 else 0)


class LabeledMobile(TypedTree):
    """A 4-type labelled tree obeying the mobile rules.

    Type-1 vertices only have type-3 children, a non-root type-2 vertex has a
    single type-4 child (two for a type-2 root), types 3/4 have children of
    types 1/2 only and repeat their parent's label, and the labels of the
    children of every type-3/4 vertex form an allowed displacement list.
    """

    def __post_init__(self):
        super().__post_init__()
        if self.labels is None:
            raise InvalidTreeError("A mobile carries labels on every vertex.")
        problem = mobile_problem(self)
        if problem is not None:
            raise InvalidTreeError(f"Not a valid mobile: {problem}")

    @classmethod
    def from_tree(cls, tree: TypedTree) -> "LabeledMobile":
        return cls(tree.types, tree.child_count, tree.labels)


def mobile_problem(tree: TypedTree) -> str | None:
    """Returns a description of the first violated mobile rule, or ``None``."""
    if tree.labels is None:
        return "missing labels"
    root_type = tree.types[0]
    if root_type not in (1, 2):
        return f"root has type {root_type}"
    if tree.labels[0] != root_type - 1:
        return f"root label2 is {tree.labels[0]}, expected {root_type - 1}"

    for v in range(tree.vertex_count):
        vertex_type = tree.types[v]
        label2 = tree.labels[v]
        word = tree.child_word(v)

        if vertex_type not in (1, 2, 3, 4):
            return f"vertex {v} has type {vertex_type}"
        if label2 % 2 != (0 if vertex_type in (1, 3) else 1):
            return f"vertex {v} of type {vertex_type} has label2 {label2} of the wrong parity"

        if vertex_type == 1:
            if any(t != 3 for t in word):
                return f"type-1 vertex {v} has children {word}"
        elif vertex_type == 2:
            expected = (4, 4) if v == 0 else (4,)
            if word != expected:
                return f"type-2 vertex {v} has children {word}, expected {expected}"
        else:
            if any(t not in (1, 2) for t in word):
                return f"type-{vertex_type} vertex {v} has children {word}"

        if vertex_type in (1, 2):
            if any(tree.labels[c] != label2 for c in tree.children(v)):
                return f"children of vertex {v} do not repeat its label"
        else:
            displacements = [tree.labels[c] - label2 for c in tree.children(v)]
            slacks = displacement_slacks(vertex_type, word, displacements)
            if slacks is None or sum(slacks) != displacement_budget(vertex_type, word):
                return f"children labels of vertex {v} are not an allowed displacement"
    return None


@dataclass(frozen=True)
class Forest:
    """An ordered tuple of trees; ``word`` is the list of root types."""

    trees: tuple[TypedTree, ...]

    def __post_init__(self):
        if not self.trees:
            raise InvalidTreeError("A forest has at least one component.")

    @property
    def word(self) -> tuple[int, ...]:
        return tuple(t.root_type for t in self.trees)

    @property
    def height(self) -> int:
        return max(t.height for t in self.trees)

    @property
    def vertex_count(self) -> int:
        return sum(t.vertex_count for t in self.trees)

    @classmethod
    def from_nested(cls, data: list[dict[str, Any]]) -> "Forest":
        return cls(tuple(TypedTree.from_nested(item) for item in data))

    def to_nested(self) -> list[dict[str, Any]]:
        return [t.to_nested() for t in self.trees]
