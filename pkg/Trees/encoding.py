#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

"""Byte encoding of trees and forests used as equality and hash keys.

Layout: a kind byte (``T`` or ``F``), for forests the component count as a
varint, a flag byte telling whether labels are present, then per tree the
depth-first sequence of (child-count varint, type byte, zigzag label2 varint).
"""

from __future__ import annotations

from typing import Union

from Trees.typed_tree import Forest, InvalidTreeError, TypedTree

_TREE = ord("T")
_FOREST = ord("F")


def encode_varint(x: int) -> bytes:
    if x < 0:
        raise ValueError("Varints encode nonnegative integers only.")
    if x == 0:
        return bytes(bytearray([0]))

    res = bytearray([])
    while x != 0:
        b = x & 0x7F
        x >>= 7
        if x != 0:
            b |= 0x80
        res.append(b)
    return bytes(res)


def decode_varint(data: bytes, pos: int) -> tuple[int, int]:
    result = 0
    shift = 0
    while True:
        if pos >= len(data):
            raise InvalidTreeError("Truncated varint in tree encoding.")
        b = data[pos]
        pos += 1
        result |= (b & 0x7F) << shift
        if not b & 0x80:
            return result, pos
        shift += 7


def zigzag(n: int) -> int:
    return 2 * n if n >= 0 else -2 * n - 1


def unzigzag(z: int) -> int:
    return z // 2 if z % 2 == 0 else -(z + 1) // 2


def canonical_encode(t: Union[TypedTree, Forest]) -> bytes:
    if isinstance(t, Forest):
        labelled = _labelled_flag(t.trees)
        out = bytearray([_FOREST])
        out += encode_varint(len(t.trees))
        out.append(labelled)
        for tree in t.trees:
            _encode_tree(tree, out)
        return bytes(out)

    out = bytearray([_TREE, _labelled_flag((t,))])
    _encode_tree(t, out)
    return bytes(out)


def canonical_decode(data: bytes) -> Union[TypedTree, Forest]:
    if not data:
        raise InvalidTreeError("Empty tree encoding.")

    if data[0] == _TREE:
        tree, pos = _decode_tree(data, 2, bool(data[1]))
        _expect_end(data, pos)
        return tree

    if data[0] == _FOREST:
        count, pos = decode_varint(data, 1)
        labelled = bool(data[pos])
        pos += 1
        trees = []
        for _ in range(count):
            tree, pos = _decode_tree(data, pos, labelled)
            trees.append(tree)
        _expect_end(data, pos)
        return Forest(tuple(trees))

    raise InvalidTreeError(f"Unknown encoding kind byte {data[0]}.")


def _labelled_flag(trees) -> int:
    flags = {tree.labels is not None for tree in trees}
    if len(flags) > 1:
        raise InvalidTreeError("Cannot encode a forest mixing labelled and unlabelled trees.")
    return 1 if flags.pop() else 0


def _encode_tree(t: TypedTree, out: bytearray):
    for v in t.iter_depth_first():
        out += encode_varint(t.child_count[v])
        if t.types[v] > 0xFF:
            raise InvalidTreeError("Types above 255 do not fit the type byte.")
        out.append(t.types[v])
        if t.labels is not None:
            out += encode_varint(zigzag(t.labels[v]))


def _decode_tree(data: bytes, pos: int, labelled: bool) -> tuple[TypedTree, int]:
    types: list[int] = []
    labels: list[int] = []
    children: list[list[int]] = []
    # (vertex, children still to read)
    stack: list[list[int]] = []

    while True:
        count, pos = decode_varint(data, pos)
        if pos >= len(data):
            raise InvalidTreeError("Truncated tree encoding.")
        vertex_type = data[pos]
        pos += 1
        if labelled:
            z, pos = decode_varint(data, pos)
            labels.append(unzigzag(z))

        v = len(types)
        types.append(vertex_type)
        children.append([])
        if stack:
            parent = stack[-1]
            children[parent[0]].append(v)
            parent[1] -= 1
            if parent[1] == 0:
                stack.pop()
        if count:
            stack.append([v, count])
        if not stack:
            break

    tree = TypedTree.from_adjacency(types, children, labels if labelled else None)
    return tree, pos


def _expect_end(data: bytes, pos: int):
    if pos != len(data):
        raise InvalidTreeError("Trailing bytes after tree encoding.")
