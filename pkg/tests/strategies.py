#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

from hypothesis import strategies as st

from Trees.typed_tree import Forest, TypedTree


@st.composite
def typed_trees(draw, max_vertices: int = 25, types: int = 3, labelled: bool = False) -> TypedTree:
    n = draw(st.integers(min_value=1, max_value=max_vertices))
    parents = [draw(st.integers(min_value=0, max_value=v - 1)) for v in range(1, n)]
    children = [[] for _ in range(n)]
    for v, p in enumerate(parents, start=1):
        children[p].append(v)
    vertex_types = draw(st.lists(st.integers(min_value=1, max_value=types), min_size=n, max_size=n))
    labels = None
    if labelled:
        labels = draw(st.lists(st.integers(min_value=-20, max_value=20), min_size=n, max_size=n))
    return TypedTree.from_adjacency(vertex_types, children, labels)


@st.composite
def forests(draw, max_trees: int = 3, max_vertices: int = 12) -> Forest:
    count = draw(st.integers(min_value=1, max_value=max_trees))
    return Forest(tuple(draw(typed_trees(max_vertices=max_vertices)) for _ in range(count)))
