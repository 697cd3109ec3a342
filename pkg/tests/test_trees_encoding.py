#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

import pytest
from hypothesis import given, strategies as st

from Trees.encoding import canonical_decode, canonical_encode, decode_varint, encode_varint, unzigzag, zigzag
from Trees.typed_tree import Forest, InvalidTreeError, TypedTree
from tests.strategies import forests, typed_trees


@pytest.mark.parametrize("value, encoded", [(0, b"\x00"), (1, b"\x01"), (127, b"\x7f"), (128, b"\x80\x01"),
                                            (300, b"\xac\x02")])
def test_varint_bytes(value, encoded):
    assert encode_varint(value) == encoded
    assert decode_varint(encoded, 0) == (value, len(encoded))


def test_negative_varint_is_rejected():
    with pytest.raises(ValueError):
        encode_varint(-1)


@given(st.integers(min_value=-10 ** 9, max_value=10 ** 9))
def test_zigzag_inverts(n):
    assert zigzag(n) >= 0
    assert unzigzag(zigzag(n)) == n


@given(typed_trees(labelled=True))
def test_tree_encoding_round_trip(t):
    assert canonical_decode(canonical_encode(t)) == t


@given(forests())
def test_forest_encoding_round_trip(f):
    assert canonical_decode(canonical_encode(f)) == f


def test_tree_and_forest_of_one_tree_differ():
    t = TypedTree.single(1)
    assert canonical_encode(t) != canonical_encode(Forest((t,)))


def test_labels_take_part_in_the_key():
    assert canonical_encode(TypedTree.single(1, 0)) != canonical_encode(TypedTree.single(1, 2))
    assert canonical_encode(TypedTree.single(1, 0)) != canonical_encode(TypedTree.single(1))


@pytest.mark.parametrize("data", [b"", b"X\x00", b"T\x00\x00\x01\x00", b"T\x00\x01"])
def test_bad_encodings(data):
    with pytest.raises(InvalidTreeError):
        canonical_decode(data)


def test_mixed_forest_cannot_be_encoded():
    with pytest.raises(InvalidTreeError):
        canonical_encode(Forest((TypedTree.single(1, 0), TypedTree.single(1))))
