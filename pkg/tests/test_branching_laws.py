#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

from fractions import Fraction

import numpy as np
import pytest

from Branching.offspring_law import GeometricOffspring, InvalidLawError, OffspringLaw, TableOffspring
from Branching.perron import (Classification, ReducibleMatrixError, classify, exact_critical_perron,
                              generation_profile, mean_matrix, perron, sigma2, spectral_radius)
from Branching.size_bias import NotCriticalError, size_bias
from Trees.typed_tree import TypedTree
from example_data_provider import get_example_data


def test_law_json_round_trip(toy2):
    assert toy2.exact
    assert OffspringLaw.from_json(toy2.to_json()) == toy2


@pytest.mark.parametrize("data", [
    {"K": 1, "types": [{"table": [[[0], "1/2"], [[2], "1/3"]]}]},
    {"K": 2, "types": [{"table": [[[0], "1"]]}]},
    {"K": 1, "types": [{"table": [[[1], "1"]]}]},
    {"K": 1, "types": [{"geometric": {"child_type": 2, "p": 0.5}}]},
    {"types": []},
])
def test_invalid_laws(data):
    with pytest.raises(InvalidLawError):
        OffspringLaw.from_json(data)


def test_ordered_words_share_the_count_probability():
    law = OffspringLaw((TableOffspring((((1, 1), Fraction(1)),)), TableOffspring((((0, 0), Fraction(1)),))))
    words = dict(law.ordered_words(1))
    assert words == {(1, 2): Fraction(1, 2), (2, 1): Fraction(1, 2)}


def test_sample_word_uses_the_table(rng, toy2):
    words = {tuple(toy2.sample_word(rng, 1)) for _ in range(200)}
    assert words == {(), (2, 2)}
    assert toy2.sample_word(rng, 2) == [1]


def test_geometric_draws_have_the_right_mean(rng):
    offspring = GeometricOffspring(1, 0.25)
    draws = [offspring.draw_count(rng) for _ in range(20000)]
    assert np.mean(draws) == pytest.approx(3.0, rel=0.05)


def test_mean_matrices(toy2, mono2):
    assert mean_matrix(toy2).tolist() == [[0.0, 1.0], [1.0, 0.0]]
    assert mean_matrix(mono2).tolist() == [[1.0]]


def test_perron_of_the_antidiagonal_matrix(toy2):
    data = perron(mean_matrix(toy2))
    assert data.rho == pytest.approx(1.0, abs=1e-10)
    assert data.a == pytest.approx([0.5, 0.5])
    assert data.b == pytest.approx([1.0, 1.0])
    assert sum(data.a) == pytest.approx(1.0)
    assert float(data.a @ data.b) == pytest.approx(1.0)


def test_exact_perron(toy2):
    a, b = exact_critical_perron(toy2)
    assert a == [Fraction(1, 2), Fraction(1, 2)]
    assert b == [Fraction(1), Fraction(1)]


def test_reducible_matrix_is_rejected():
    with pytest.raises(ReducibleMatrixError):
        perron(np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_spectral_radius_of_a_jordan_block():
    A = np.array([[0.0, 0.0, 1.0], [1.0, 1.0, 0.0], [1.0, 0.0, 0.0]])
    assert spectral_radius(A) == pytest.approx(1.0, abs=1e-6)
    assert spectral_radius(np.array([[0.0, 2.0], [0.5, 0.0]])) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        spectral_radius(np.array([[np.inf]]))


def test_classification(toy2):
    result = classify(toy2)
    assert result.critical
    assert result.regular
    subcritical = classify(OffspringLaw.from_json(get_example_data("MONO2_SUBCRITICAL")))
    assert subcritical.classification is Classification.SUBCRITICAL
    assert subcritical.perron.rho == pytest.approx(0.8, abs=1e-9)


def test_variance_constants(toy2, mono2):
    assert sigma2(mono2, [Fraction(1)], [Fraction(1)]) == 1
    a, b = exact_critical_perron(toy2)
    assert sigma2(toy2, a, b) == Fraction(1, 2)


def test_size_bias_of_mono2(mono2):
    biased = size_bias(mono2, [Fraction(1)])
    assert dict(biased.offspring(1).entries) == {(2,): Fraction(1)}


def test_size_bias_of_toy2(toy2):
    biased = size_bias(toy2, [Fraction(1), Fraction(1)])
    assert dict(biased.offspring(1).entries) == {(0, 2): Fraction(1)}
    assert dict(biased.offspring(2).entries) == {(1, 0): Fraction(1)}


def test_size_bias_needs_criticality():
    subcritical = OffspringLaw.from_json(get_example_data("MONO2_SUBCRITICAL"))
    with pytest.raises(NotCriticalError):
        size_bias(subcritical, [Fraction(1)])


def test_generation_profile(toy2):
    t = TypedTree.from_nested({"type": 1, "children": [{"type": 2, "children": [{"type": 1}]}, {"type": 2}]})
    assert generation_profile(t, toy2).tolist() == [[1, 0], [0, 2], [1, 0]]
