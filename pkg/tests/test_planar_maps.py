#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

import pytest

from Boltzmann.admissibility import solve_admissibility
from Boltzmann.presets import preset
from Periodicity.lattice import LatticeError
from PlanarMaps.ball import ball
from PlanarMaps.bdfg import bdfg, bdfg_embedding, predicted_counts
from PlanarMaps.canonical import canonical_code, canonical_map
from PlanarMaps.enumeration import (EnumerationBudgetError, enumerate_mobiles, face_vertex_count,
                                    positive_quadrangulation_codes)
from PlanarMaps.finite_maps import (ConditionedMapSampler, MapSign, map_sign, map_size, merge_roots,
                                    mobile_target, sample_boltzmann_map, sample_conditioned_map)
from PlanarMaps.planar_map import InvalidMapError, PlanarMap, map_stats, reverse_root
from Sampler.galton_watson import SamplingOverflow
from Trees.typed_tree import InvalidTreeError, LabeledMobile, TypedTree

ONE_EDGE = PlanarMap((1, 0), (0, 1), 0)
ONE_LOOP = PlanarMap((1, 0), (1, 0), 0)


@pytest.fixture(scope="module")
def triangulation():
    return solve_admissibility(preset("odd", {"p": 1}))


def _quadrangulation_mobiles(solution, faces: int) -> list[LabeledMobile]:
    return [m for m in enumerate_mobiles(solution.mobile_law.law, faces) if face_vertex_count(m) == faces]


def _one_face_mobile() -> LabeledMobile:
    return LabeledMobile.from_tree(TypedTree.from_nested(
        {"type": 1, "label2": 0, "children": [{"type": 3, "label2": 0, "children": [{"type": 1, "label2": 2}]}]}
    ))


def test_vertex_map():
    m = PlanarMap.vertex_map()
    assert m.problem() is None
    stats = m.stats()
    assert (stats.vertices, stats.edges, stats.faces) == (1, 0, 1)
    assert m.degree(0) == 0


def test_one_edge_and_one_loop():
    assert ONE_EDGE.validate().stats().face_degrees == (2,)
    assert (ONE_EDGE.vertex_count, ONE_EDGE.face_count) == (2, 1)
    assert (ONE_EDGE.root_tail, ONE_EDGE.root_head) == (0, 1)
    assert (ONE_LOOP.vertex_count, ONE_LOOP.face_count) == (1, 2)
    assert ONE_LOOP.degree(0) == 2
    assert canonical_code(ONE_EDGE) != canonical_code(ONE_LOOP)


@pytest.mark.parametrize("m, message", [
    (PlanarMap((1, 0, 2), (0, 1, 2), 0), "odd"),
    (PlanarMap((0, 1), (0, 1), 0), "involution"),
    (PlanarMap((1, 0), (1, 1), 0), "permutation"),
    (PlanarMap((1, 0), (0, 1), None), "root"),
    (PlanarMap((1, 0, 3, 2), (0, 1, 2, 3), 0), "connected"),
    (PlanarMap((2, 3, 0, 1), (1, 2, 3, 0), 0), "planar"),
])
def test_invalid_maps(m, message):
    assert message in m.problem()
    with pytest.raises(InvalidMapError):
        m.validate()


def test_map_json_round_trip():
    m = ONE_EDGE.with_root(0, 1)
    assert PlanarMap.from_json(m.to_json()) == m
    with pytest.raises(InvalidMapError):
        PlanarMap.from_json({"twin": [1, 0]})


def test_reverse_root_is_an_involution():
    m = ONE_EDGE.with_root(0, 0)
    assert map_sign(m) is MapSign.POSITIVE
    assert map_sign(reverse_root(m)) is MapSign.NEGATIVE
    assert reverse_root(reverse_root(m)) == m
    assert map_sign(ONE_LOOP.with_root(0, 0)) is MapSign.NULL


def test_one_face_quadrangulation():
    embedded = bdfg_embedding(_one_face_mobile())
    m = embedded.map
    assert m.problem() is None
    assert (m.vertex_count, m.edge_count, m.face_count) == (3, 2, 1)
    assert predicted_counts(_one_face_mobile()) == (3, 2, 1)
    assert map_sign(m) is MapSign.POSITIVE
    assert sorted(embedded.distance_labels()) == [0, 1, 2]


def test_lone_vertex_gives_the_vertex_map():
    lone = LabeledMobile.from_tree(TypedTree.single(1, 0))
    m = bdfg(lone)
    assert m.half_edge_count == 0
    assert m.point == 0


@pytest.mark.parametrize("faces, expected", [(1, 3), (2, 18)])
def test_mobile_counts_match_quadrangulation_counts(quadrangulation, faces, expected):
    assert len(_quadrangulation_mobiles(quadrangulation, faces)) == expected


@pytest.mark.parametrize("faces", [1, 2])
def test_mobiles_give_every_quadrangulation_once(quadrangulation, faces):
    codes = [canonical_code(bdfg(m)) for m in _quadrangulation_mobiles(quadrangulation, faces)]
    assert len(set(codes)) == len(codes)
    assert set(codes) == positive_quadrangulation_codes(faces)


@pytest.mark.slow
def test_mobiles_give_every_three_face_quadrangulation_once(quadrangulation):
    codes = [canonical_code(bdfg(m)) for m in _quadrangulation_mobiles(quadrangulation, 3)]
    assert len(codes) == 135
    assert set(codes) == positive_quadrangulation_codes(3)


def test_brute_force_limits():
    with pytest.raises(EnumerationBudgetError):
        positive_quadrangulation_codes(0)
    with pytest.raises(EnumerationBudgetError):
        positive_quadrangulation_codes(5)


def test_enumeration_budget(quadrangulation):
    with pytest.raises(EnumerationBudgetError):
        list(enumerate_mobiles(quadrangulation.mobile_law.law, 9))
    with pytest.raises(EnumerationBudgetError):
        list(enumerate_mobiles(quadrangulation.mobile_law.law, 1, root_type=3))


@pytest.mark.parametrize("root_type", [1, 2])
def test_counts_and_labels_of_enumerated_triangulations(triangulation, root_type):
    mobiles = [m for m in enumerate_mobiles(triangulation.mobile_law.law, 3, root_type=root_type)
               if face_vertex_count(m) > 0]
    assert mobiles
    for mobile in mobiles:
        embedded = bdfg_embedding(mobile)
        m = embedded.map
        assert m.problem() is None
        assert (m.vertex_count, m.edge_count, m.face_count) == predicted_counts(mobile)
        assert all(degree == 3 for degree in m.stats().face_degrees)
        distances = m.distances_from(m.point)
        assert embedded.distance_labels() == tuple(distances[v] for v in range(m.vertex_count))
        assert map_sign(m) is (MapSign.POSITIVE if root_type == 1 else MapSign.NULL)


def test_codes_ignore_half_edge_names(rng, quadrangulation):
    for mobile in _quadrangulation_mobiles(quadrangulation, 2):
        m = bdfg(mobile)
        permutation = [int(h) for h in rng.permutation(m.half_edge_count)]
        renamed = m.relabel(permutation)
        assert renamed.problem() is None
        assert canonical_code(renamed) == canonical_code(m)
        assert canonical_map(renamed) == canonical_map(m)


def test_balls_are_nested(rng, uipm):
    for _ in range(10):
        try:
            m = sample_boltzmann_map(rng, uipm, vertex_cap=5000).map
        except SamplingOverflow:
            continue
        if m.root is None:
            continue
        for k in (1, 2, 3):
            outer = ball(m, k + 1)
            inner = ball(m, k)
            assert inner.problem() is None
            assert outer.map.point is None
            assert ball(outer.map, k).code == inner.code
            assert inner.root_degree <= m.degree(m.root_head)


def test_ball_radius_must_be_positive():
    with pytest.raises(InvalidMapError):
        ball(ONE_EDGE, 0)


def test_ball_of_the_one_edge_map():
    b = ball(ONE_EDGE, 1)
    assert b.map.edge_count == 1
    assert b.root_degree == 1


def test_boltzmann_quadrangulations(rng, quadrangulation):
    for _ in range(30):
        try:
            sampled = sample_boltzmann_map(rng, quadrangulation, vertex_cap=5000)
        except SamplingOverflow:
            continue
        m = sampled.map
        assert m.problem() is None
        assert sampled.sign is not MapSign.NULL
        if m.root is not None:
            assert set(m.stats().face_degrees) == {4}
            assert map_sign(m) is sampled.sign


def test_conditioned_quadrangulations(rng, quadrangulation):
    sampler = ConditionedMapSampler(quadrangulation, "F", 5)
    assert sampler.sign_probabilities[MapSign.NULL] == 0
    for _ in range(10):
        sampled = sampler.sample(rng)
        assert map_size(sampled.map, "F") == 5
        assert sampled.map.point is not None
        assert map_sign(sampled.map) is sampled.sign


def test_conditioned_unpointed_maps(rng, triangulation):
    sampled = ConditionedMapSampler(triangulation, "F", 4, pointed=False).sample(rng)
    assert sampled.map.point is None
    assert map_size(sampled.map, "F") == 4
    assert set(sampled.map.stats().face_degrees) == {3}


def test_conditioned_map_shortcut(rng, quadrangulation):
    sampled = sample_conditioned_map(rng, quadrangulation, "E", 6)
    stats = map_stats(sampled.map)
    assert stats.edges == 6
    assert stats.faces == 3 and stats.vertices == 5
    assert stats.face_degrees == (4, 4, 4)
    assert stats.euler_characteristic == 2


def test_triangulations_have_an_even_number_of_faces(triangulation):
    with pytest.raises(LatticeError):
        ConditionedMapSampler(triangulation, "F", 3)


def test_mobile_targets():
    assert [mobile_target(kind, 5) for kind in "VEF"] == [4, 6, 5]
    with pytest.raises(ValueError):
        mobile_target("X", 5)


def test_merge_roots_needs_labelled_type_two_roots():
    half = TypedTree.from_nested({"type": 2, "label2": 1, "children": [{"type": 4, "label2": 1}]})
    merged = merge_roots(half, half)
    assert merged.child_word(0) == (4, 4)
    with pytest.raises(InvalidTreeError):
        merge_roots(half.with_labels(None), half)
    with pytest.raises(InvalidTreeError):
        merge_roots(TypedTree.single(1, 0), half)
