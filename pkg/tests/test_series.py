#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

import math
from fractions import Fraction

import pytest

from Branching.offspring_law import OffspringLaw
from Periodicity.lattice import SizeVector
from Series.asymptotics import hprime_check, hw_ratio, partial_mean_growth, strong_ratio
from Series.power_series import SeriesError
from Series.random_walk import cyclic_check, step_law, walk_dist
from Series.size_distribution import first_gen_dist, forest_size_dist, size_dist
from example_data_provider import get_example_data


def test_binary_tree_size_coefficients(mono2):
    distribution = size_dist(mono2, SizeVector((1,)), 7)
    assert distribution.exact
    assert distribution.of(1)[:6] == (0, Fraction(1, 2), 0, Fraction(1, 8), 0, Fraction(1, 16))
    assert distribution.probability(1, 7) == Fraction(5, 128)
    assert distribution.probability(1, -1) == 0
    assert distribution.support(1) == [1, 3, 5, 7]


def test_size_beyond_the_truncation_raises(mono2):
    with pytest.raises(SeriesError):
        size_dist(mono2, SizeVector((1,)), 5).probability(1, 6)


def test_float_and_exact_coefficients_agree(toy2):
    gamma = SizeVector((1, 1))
    exact = size_dist(toy2, gamma, 21)
    floating = size_dist(toy2, gamma, 21, exact=False)
    for label in (1, 2):
        assert list(floating.of(label)) == pytest.approx([float(c) for c in exact.of(label)], abs=1e-12)


def test_alternating_law_counts_type_one_like_the_binary_law(toy2, mono2):
    alternating = size_dist(toy2, SizeVector((1, 0)), 15)
    binary = size_dist(mono2, SizeVector((1,)), 15)
    assert alternating.of(1) == binary.of(1)
    assert alternating.of(2) == binary.of(1)


def test_mass_stays_below_one(mono2):
    distribution = size_dist(mono2, SizeVector((1,)), 41)
    assert 0 < distribution.mass(1) < 1
    assert distribution.partial_mean(1, 3) == Fraction(1, 2) + Fraction(3, 8)


def test_forest_of_two_binary_trees(mono2):
    forest = forest_size_dist(mono2, SizeVector((1,)), (1, 1), 4)
    assert forest == (0, 0, Fraction(1, 4), 0, Fraction(1, 8))


def test_first_generation_law(toy2):
    assert first_gen_dist(toy2, 1, 1, 4) == (Fraction(1, 2), 0, Fraction(1, 2), 0, 0)
    assert first_gen_dist(toy2, 2, 1, 2) == (0, Fraction(1), 0)
    assert step_law(toy2, 2) == (Fraction(1, 2), 0, Fraction(1, 2))


def test_walk_probabilities(mono2):
    assert walk_dist(mono2, 2, 4).probability(0) == Fraction(1, 2)
    assert walk_dist(mono2, 3, 3).probability(-1) == Fraction(3, 8)
    assert walk_dist(mono2, 3, 3).probability(-4) == 0
    assert walk_dist(mono2, 0, 2).probability(0) == 1
    with pytest.raises(SeriesError):
        walk_dist(mono2, -1, 2)


@pytest.mark.parametrize("n", range(0, 25))
def test_cyclic_lemma_is_exact_for_the_binary_law(mono2, n):
    check = cyclic_check(mono2, n)
    assert check.size == 1 + 2 * n
    assert check.lhs == check.rhs


@pytest.mark.parametrize("n", [0, 1, 4, 9])
def test_cyclic_lemma_is_exact_for_the_alternating_law(toy2, n):
    assert cyclic_check(toy2, n).difference == 0


def test_cyclic_lemma_for_an_aperiodic_law():
    law = OffspringLaw.from_json(get_example_data("MONO_APERIODIC"))
    for n in (1, 2, 7):
        assert cyclic_check(law, n).difference == 0


def test_forest_to_tree_ratio_tends_to_the_forest_weight(mono2):
    # two binary trees on 2n vertices against one on 2n + 1: exactly twice as likely
    assert hw_ratio(mono2, SizeVector((1,)), (1, 1), 40) == pytest.approx(2.0)


def test_size_tail_matches_the_local_asymptotics(mono2):
    check = hprime_check(mono2, SizeVector((1,)), (1,), 100)
    assert check.predicted == pytest.approx(1 / math.sqrt(4 * math.pi * 100 ** 3))
    assert check.relative_error < 0.02


def test_local_asymptotics_need_a_critical_law():
    law = OffspringLaw.from_json(get_example_data("MONO2_SUBCRITICAL"))
    with pytest.raises(SeriesError):
        hprime_check(law, SizeVector((1,)), (1,), 10)


def test_strong_ratio_tends_to_one(mono2):
    assert strong_ratio(mono2, 50) == pytest.approx(1.0, abs=0.02)


def test_partial_means_grow_like_a_square_root(mono2):
    growth = partial_mean_growth(mono2, 25, 100)
    assert 1.7 < growth < 2.7
    with pytest.raises(SeriesError):
        partial_mean_growth(mono2, 10, 5)
