#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

from __future__ import annotations

from Trees.typed_tree import LabeledMobile, TypedTree


def mirror(m: TypedTree) -> TypedTree:
    """Reverses every child order and reflects the labels about the root label.

    Displacements y_1..y_l below a vertex become -y_l..-y_1, which amounts
    to L' = 2 L(root) - L on every vertex.
    """
    children = [list(reversed(m.children(v))) for v in range(m.vertex_count)]
    labels = None
    if m.labels is not None:
        root = m.labels[0]
        labels = [2 * root - label for label in m.labels]
    mirrored = TypedTree.from_adjacency(m.types, children, labels)
    if isinstance(m, LabeledMobile):
        return LabeledMobile.from_tree(mirrored)
    return mirrored
