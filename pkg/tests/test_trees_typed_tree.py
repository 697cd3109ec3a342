#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

import pytest
from hypothesis import given

from Trees.typed_tree import Forest, InvalidTreeError, LabeledMobile, TypedTree, mobile_problem
from tests.strategies import typed_trees


def _toy_tree() -> TypedTree:
    # root(1) with two type-2 children, the first of which has a type-1 child
    return TypedTree.from_nested({"type": 1, "children": [{"type": 2, "children": [{"type": 1}]}, {"type": 2}]})


def test_breadth_first_arena():
    t = _toy_tree()
    assert t.types == (1, 2, 2, 1)
    assert t.child_count == (2, 1, 0, 0)
    assert t.parent == (-1, 0, 0, 1)
    assert t.depth == (0, 1, 1, 2)
    assert t.height == 2
    assert list(t.children(0)) == [1, 2]
    assert t.child_word(0) == (2, 2)


def test_addresses_round_trip():
    t = _toy_tree()
    assert t.address(0) == ()
    assert t.address(3) == (1, 1)
    for v in range(t.vertex_count):
        assert t.vertex_at(t.address(v)) == v


def test_unknown_vertex_is_rejected():
    t = _toy_tree()
    with pytest.raises(InvalidTreeError):
        t.children(7)
    with pytest.raises(InvalidTreeError):
        t.vertex_at((3,))


@pytest.mark.parametrize("types, counts", [
    ((), ()),
    ((1, 1), (0, 0)),
    ((1, 1), (2, 0)),
    ((0,), (0,)),
])
def test_malformed_arenas(types, counts):
    with pytest.raises(InvalidTreeError):
        TypedTree(types, counts)


def test_from_adjacency_rejects_cycles_and_orphans():
    with pytest.raises(InvalidTreeError):
        TypedTree.from_adjacency([1, 1], [[1], [0]])
    with pytest.raises(InvalidTreeError):
        TypedTree.from_adjacency([1, 1, 1], [[1], [], []])


def test_partial_labels_are_rejected():
    with pytest.raises(InvalidTreeError):
        TypedTree.from_nested({"type": 1, "label2": 0, "children": [{"type": 3}]})


@given(typed_trees(labelled=True))
def test_nested_round_trip(t):
    assert TypedTree.from_nested(t.to_nested()) == t


@given(typed_trees())
def test_count_types_adds_up(t):
    assert sum(t.count_types().values()) == t.vertex_count
    assert sorted(t.iter_depth_first()) == list(range(t.vertex_count))


def test_one_face_quadrangulation_mobile():
    m = LabeledMobile.from_tree(TypedTree.from_nested(
        {"type": 1, "label2": 0, "children": [{"type": 3, "label2": 0, "children": [{"type": 1, "label2": 2}]}]}
    ))
    assert m.count_types() == {1: 2, 3: 1}


@pytest.mark.parametrize("nested", [
    # root label must be 0 for a type-1 root
    {"type": 1, "label2": 2, "children": []},
    # type-1 vertices only have type-3 children
    {"type": 1, "label2": 0, "children": [{"type": 1, "label2": 0}]},
    # displacement of +4 below a type-3 vertex with one type-1 child is not allowed
    {"type": 1, "label2": 0, "children": [{"type": 3, "label2": 0, "children": [{"type": 1, "label2": 4}]}]},
    # a null root needs two type-4 children
    {"type": 2, "label2": 1, "children": [{"type": 4, "label2": 1}]},
])
def test_mobile_rules(nested):
    tree = TypedTree.from_nested(nested)
    assert mobile_problem(tree) is not None
    with pytest.raises(InvalidTreeError):
        LabeledMobile.from_tree(tree)


def test_forest_word_and_height():
    f = Forest((_toy_tree(), TypedTree.single(2)))
    assert f.word == (1, 2)
    assert f.height == 2
    assert f.vertex_count == 5
    assert Forest.from_nested(f.to_nested()) == f
    with pytest.raises(InvalidTreeError):
        Forest(())
