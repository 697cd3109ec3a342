#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

import pytest

from Boltzmann.admissibility import solve_admissibility
from Boltzmann.presets import preset
from Branching.offspring_law import OffspringLaw
from Periodicity.lattice import (LatticeError, PeriodError, SizeVector, first_generation_period,
                                 frobenius_representable, period, size)
from Periodicity.map_periods import check_map_lattice, map_periods
from Trees.typed_tree import Forest, TypedTree
from example_data_provider import get_example_data


def test_binary_tree_sizes_are_odd(mono2):
    data = period(mono2, SizeVector((1,)))
    assert data.d == 2
    assert data.alpha == (1,)
    assert data.first_sizes == (1,)
    assert data.missing == ((),)


def test_counting_type_one_in_the_alternating_law(toy2):
    data = period(toy2, SizeVector((1, 0)))
    assert data.d == 2
    assert data.alpha_of(1) == 1
    assert data.alpha_of(2) == 1


def test_counting_both_types_in_the_alternating_law(toy2):
    data = period(toy2, SizeVector((1, 1)))
    assert data.d == 4
    assert data.alpha == (1, 2)


def test_aperiodic_law():
    law = OffspringLaw.from_json(get_example_data("MONO_APERIODIC"))
    data = period(law, SizeVector((1,)))
    assert data.d == 1
    assert data.alpha == (0,)


def test_first_generation_period_matches(toy2, mono2):
    assert first_generation_period(toy2, 1) == 2
    assert first_generation_period(mono2, 1) == 2


def test_tiny_budget_fails(toy2):
    with pytest.raises(PeriodError):
        period(toy2, SizeVector((1, 0)), budget=1)


def test_word_residues_and_targets(mono2):
    data = period(mono2, SizeVector((1,)))
    assert data.word_residue((1, 1)) == 0
    data.check_target((1,), 5)
    data.check_target((1, 1), 4)
    with pytest.raises(LatticeError):
        data.check_target((1,), 4)
    with pytest.raises(LatticeError):
        data.check_target((1,), -1)


def test_size_of_trees_and_forests():
    t = TypedTree((1, 2, 2, 1), (2, 1, 0, 0))
    assert size(t, SizeVector((1, 0))) == 2
    assert size(t, SizeVector((1, 1))) == 4
    assert size(Forest((t, t)), SizeVector((0, 1))) == 4


@pytest.mark.parametrize("weights", [(), (0, 0), (1, -1)])
def test_invalid_size_vectors(weights):
    with pytest.raises(ValueError):
        SizeVector(weights)


def test_projection_drops_unknown_types(mono2):
    assert SizeVector((1, 0, 1, 1)).for_law(mono2) == SizeVector((1,), (1,))
    assert SizeVector((0, 0, 2)).single_type is None
    assert SizeVector((0, 0, 1)).single_type == 3


@pytest.mark.parametrize("parts, target, expected", [
    ([3, 5], 7, False),
    ([3, 5], 8, True),
    ([3, 5], 0, True),
    ([3, 5], -2, False),
    ([2], 9, False),
])
def test_frobenius_representable(parts, target, expected):
    assert frobenius_representable(parts, target) is expected


def test_quadrangulation_periods(quadrangulation_weights):
    periods = map_periods(quadrangulation_weights)
    assert (periods.d_V, periods.d_E, periods.d_F) == (1, 2, 1)


def test_triangulation_periods():
    periods = map_periods(preset("odd", {"p": 1}))
    assert (periods.d_V, periods.d_E, periods.d_F) == (1, 3, 2)


def test_uipm_periods():
    periods = map_periods(preset("uipm"))
    assert (periods.d_V, periods.d_E, periods.d_F) == (1, 1, 1)


def test_tree_lattice_agrees_with_the_map_lattice(quadrangulation):
    checks = check_map_lattice(quadrangulation)
    assert [check.kind for check in checks] == ["V", "E", "F"]
    assert all(check.ok for check in checks)


def test_triangulation_tree_lattice_agrees_with_the_map_lattice():
    checks = check_map_lattice(solve_admissibility(preset("odd", {"p": 1})))
    assert all(check.ok for check in checks)
