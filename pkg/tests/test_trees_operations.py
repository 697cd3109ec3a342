#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from Trees.operations import local_distance, subtree_at, truncate
from Trees.typed_tree import Forest, InvalidTreeError, TypedTree
from tests.strategies import forests, typed_trees


def _path(length: int) -> TypedTree:
    return TypedTree(tuple([1] * (length + 1)), tuple([1] * length + [0]))


def test_truncate_keeps_a_prefix():
    t = _path(4)
    cut = truncate(t, 2)
    assert cut.types == (1, 1, 1)
    assert cut.child_count == (1, 1, 0)
    assert truncate(t, 10) == t


def test_truncate_rejects_negative_height():
    with pytest.raises(ValueError):
        truncate(_path(1), -1)


@given(typed_trees(), st.integers(min_value=0, max_value=6), st.integers(min_value=0, max_value=6))
def test_truncation_is_idempotent_and_monotone(t, j, k):
    low, high = min(j, k), max(j, k)
    assert truncate(truncate(t, k), k) == truncate(t, k)
    assert truncate(truncate(t, high), low) == truncate(t, low)
    assert truncate(t, k).height == min(t.height, k)


def test_subtree_at():
    t = TypedTree.from_nested({"type": 1, "children": [{"type": 2, "children": [{"type": 3}]}, {"type": 2}]})
    sub = subtree_at(t, 1)
    assert sub.types == (2, 3)
    with pytest.raises(InvalidTreeError):
        subtree_at(t, 9)


def test_local_distance_values():
    assert local_distance(_path(3), _path(3)).value == 0
    # the paths agree up to height 2 and differ at height 3
    d = local_distance(_path(2), _path(3))
    assert d.agreement_height == 2
    assert d.value == Fraction(1, 3)
    roots_differ = local_distance(TypedTree.single(1), TypedTree.single(2))
    assert roots_differ.value == 1
    assert roots_differ.agreement_height == -1


@given(forests(), forests(), forests())
def test_local_distance_is_an_ultrametric(a, b, c):
    ab = local_distance(a, b).value
    bc = local_distance(b, c).value
    ac = local_distance(a, c).value
    assert ac <= max(ab, bc)
    assert ab == local_distance(b, a).value


@given(forests())
def test_distance_zero_iff_equal(f):
    assert local_distance(f, f).equal
    assert local_distance(f, Forest(f.trees)).value == 0
