#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

import math

import pytest

from Boltzmann.admissibility import MapClassification, NotAdmissibleError, residuals, solve_admissibility
from Boltzmann.generating_functions import (DivergenceError, diamond_dx_over_y, f_bullet, f_bullet_partials,
                                            f_diamond, f_diamond_partials)
from Boltzmann.mobile_law import BIPARTITE_MOBILE_LABELS, MOBILE_LABELS
from Boltzmann.presets import SearchBracketError, UIPM_LAMBDA, preset, printed_even_constant
from Boltzmann.weights import InvalidWeightsError, WeightSequence
from Branching.offspring_law import GeometricOffspring
from Branching.perron import Classification, classify
from example_data_provider import get_example_data


def _quadrangulations(weight: float) -> WeightSequence:
    return WeightSequence.from_table({4: weight})


@pytest.mark.parametrize("data", [
    {"table": {"2": 0.5}},
    {"table": {"4": -0.1}},
    {"table": {"0": 0.1, "4": 0.1}},
    {"geometric_lambda": 0.5},
    {"weights": {}},
])
def test_invalid_weights(data):
    with pytest.raises(InvalidWeightsError):
        WeightSequence.from_json(data)


def test_weight_sequences():
    q = WeightSequence.from_json({"table": {"3": 0.1, "4": 0.0, "6": 0.2}})
    assert list(q.support()) == [3, 6]
    assert q.q(6) == 0.2 and q.q(4) == 0.0 and q.q(-1) == 0.0
    assert not q.bipartite
    assert q.max_degree == 6
    assert WeightSequence.from_json(q.to_json()) == q

    geometric = WeightSequence.from_json(get_example_data("UIPM"))
    assert geometric.is_geometric and not geometric.bipartite
    assert geometric.max_degree is None
    assert list(geometric.support(3)) == [1, 2, 3]
    with pytest.raises(InvalidWeightsError):
        list(geometric.support())


def test_table_generating_functions_in_closed_form():
    q = _quadrangulations(0.05)
    x, y = 1.7, 0.2
    assert f_bullet(x, y, q) == pytest.approx(3 * 0.05 * x + 3 * 0.05 * y ** 2)
    assert f_diamond(x, y, q) == pytest.approx(0.05 * y ** 3 + 6 * 0.05 * x * y)
    bullet = f_bullet_partials(x, y, q)
    assert bullet.dx == pytest.approx(3 * 0.05)
    assert bullet.dy == pytest.approx(6 * 0.05 * y)
    assert diamond_dx_over_y(x, 0.0, q) == pytest.approx(6 * 0.05)


@pytest.mark.parametrize("q, point", [
    (WeightSequence.from_table({3: 0.05, 4: 0.02, 7: 0.001}), (1.3, 0.25)),
    (WeightSequence.geometric(UIPM_LAMBDA), (1.2, 0.4)),
])
def test_partials_match_finite_differences(q, point):
    x, y = point
    h = 1e-6
    for partials in (f_bullet_partials, f_diamond_partials):
        exact = partials(x, y, q)
        dx = (partials(x + h, y, q).value - partials(x - h, y, q).value) / (2 * h)
        dy = (partials(x, y + h, q).value - partials(x, y - h, q).value) / (2 * h)
        assert exact.dx == pytest.approx(dx, rel=1e-5)
        assert exact.dy == pytest.approx(dy, rel=1e-5)


def test_geometric_series_diverge_outside_their_disc():
    q = WeightSequence.geometric(UIPM_LAMBDA)
    with pytest.raises(DivergenceError):
        f_bullet(3.5, 0.0, q)
    with pytest.raises(DivergenceError):
        f_diamond(1.0, -0.1, q)


def test_tolerance_keeps_geometric_points_away_from_the_singularity():
    q = WeightSequence.geometric(UIPM_LAMBDA)
    x, y = 4 / 3, 1 / math.sqrt(3)
    # z = 4/25 here, so 1 - 4z = 9/25
    assert f_bullet(x, y, q, tol=0.3) == pytest.approx(0.25)
    assert f_diamond(x, y, q, tol=0.3) == pytest.approx(y)
    with pytest.raises(DivergenceError):
        f_bullet(x, y, q, tol=0.4)
    with pytest.raises(DivergenceError):
        f_diamond(x, y, q, tol=0.4)
    table = _quadrangulations(0.05)
    assert f_bullet(1.7, 0.2, table, tol=0.4) == f_bullet(1.7, 0.2, table)
    with pytest.raises(ValueError):
        f_bullet(x, y, q, tol=-1.0)


def test_uipm_is_regular_critical(uipm):
    assert uipm.critical
    assert uipm.z_plus == pytest.approx(4 / 3, abs=1e-8)
    assert uipm.z_diamond == pytest.approx(1 / math.sqrt(3), abs=1e-8)
    assert uipm.z_null == pytest.approx(1 / 3, abs=1e-7)
    assert uipm.spectral_radius == pytest.approx(1.0, abs=1e-6)


def test_critical_quadrangulation_weight(quadrangulation_weights, quadrangulation):
    assert quadrangulation_weights.q(4) == pytest.approx(1 / 12, rel=1e-6)
    assert quadrangulation.critical
    assert quadrangulation.z_plus == pytest.approx(2.0, abs=1e-4)
    assert quadrangulation.z_diamond == pytest.approx(0.0, abs=1e-12)
    assert max(map(abs, residuals(quadrangulation.x, quadrangulation.y, quadrangulation_weights))) < 1e-10


def test_printed_constant_is_not_admissible():
    assert printed_even_constant(2) == pytest.approx(1 / 8)
    solution = solve_admissibility(_quadrangulations(printed_even_constant(2)))
    assert solution.classification is MapClassification.NOT_ADMISSIBLE
    assert not solution.admissible
    with pytest.raises(NotAdmissibleError):
        solution.z_plus
    assert solution.to_report()["classification"] == "not_admissible"


def test_small_weight_is_subcritical():
    solution = solve_admissibility(_quadrangulations(0.01))
    assert solution.classification is MapClassification.ADMISSIBLE_SUBCRITICAL
    assert solution.z_plus == pytest.approx((1 - math.sqrt(1 - 0.12)) / 0.06, rel=1e-8)
    assert solution.spectral_radius < 1
    with pytest.raises(NotAdmissibleError):
        solution.require_critical()


def test_triangulation_preset_is_critical():
    q = preset("odd", {"p": 1})
    assert list(q.support()) == [3]
    solution = solve_admissibility(q)
    assert solution.critical
    assert solution.z_diamond > 0


def test_exact_quadrangulation_weight_has_a_defective_stability_matrix():
    # at q4 = 1/12 the stability matrix is [[0,0,1],[1,1,0],[1,0,0]], a Jordan block at 1
    solution = solve_admissibility(WeightSequence.from_table({4: 1 / 12}))
    assert solution.critical
    assert solution.z_plus == pytest.approx(2.0, abs=1e-6)
    assert solution.spectral_radius == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("name, params, degree, weight", [
    ("even", {"p": 2}, 4, 1 / 12),
    ("even", {"p": 3}, 6, 2 / 135),
    ("odd", {"p": 1}, 3, None),
])
def test_presets_are_critical(name, params, degree, weight):
    q = preset(name, params)
    assert list(q.support()) == [degree]
    if weight is not None:
        assert q.q(degree) == pytest.approx(weight, rel=1e-6)
    solution = solve_admissibility(q)
    assert solution.critical
    assert solution.spectral_radius == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("name, params", [("even", {"p": 1}), ("odd", {"p": 0}), ("hexagons", {})])
def test_invalid_presets(name, params):
    with pytest.raises(InvalidWeightsError):
        preset(name, params)


def test_bracket_error_is_a_value_error():
    assert issubclass(SearchBracketError, ValueError)


def test_quadrangulation_mobile_law(quadrangulation):
    mobile = quadrangulation.mobile_law
    assert mobile.bipartite
    assert mobile.law.labels == BIPARTITE_MOBILE_LABELS
    vertices = mobile.law.offspring(1)
    assert isinstance(vertices, GeometricOffspring)
    assert vertices.p == pytest.approx(0.5, abs=1e-4)
    assert dict(mobile.law.offspring(3).entries) == {(1, 0): pytest.approx(1.0)}
    assert classify(mobile.law).classification is Classification.CRITICAL


def test_uipm_mobile_law(uipm):
    mobile = uipm.mobile_law
    assert not mobile.bipartite
    assert mobile.law.labels == MOBILE_LABELS
    assert mobile.truncation_bound < 1e-12
    assert mobile.law.offspring(2).entries == (((0, 0, 0, 1), 1.0),)
    for label in (3, 4):
        assert sum(p for _, p in mobile.law.offspring(label).entries) == pytest.approx(1.0)
    assert classify(mobile.law).classification is Classification.CRITICAL


def test_not_admissible_weights_have_no_mobile_law():
    solution = solve_admissibility(_quadrangulations(0.2))
    with pytest.raises(NotAdmissibleError):
        solution.mobile_law
