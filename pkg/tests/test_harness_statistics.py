#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from Harness import statistics
from Harness.seeding import chunk_sizes, job_rng, job_seed
from Harness.statistics import StatisticsError

histograms = st.dictionaries(st.integers(0, 6), st.integers(1, 50), min_size=1)


@given(histograms)
def test_tv_of_a_histogram_with_itself_is_zero(hist):
    assert statistics.tv_distance(hist, hist) == pytest.approx(0.0)
    doubled = {key: 2 * value for key, value in hist.items()}
    assert statistics.tv_distance(hist, doubled) == pytest.approx(0.0)


@given(histograms, histograms)
def test_tv_is_a_symmetric_distance_in_unit_range(a, b):
    distance = statistics.tv_distance(a, b)
    assert 0.0 <= distance <= 1.0 + 1e-12
    assert distance == pytest.approx(statistics.tv_distance(b, a))


def test_tv_of_disjoint_supports_is_one():
    assert statistics.tv_distance({0: 1}, {1: 3}) == pytest.approx(1.0)


def test_tv_rejects_empty_histograms():
    with pytest.raises(StatisticsError):
        statistics.tv_distance({}, {0: 1})
    with pytest.raises(StatisticsError):
        statistics.tv_distance({0: 1, 1: -1}, {0: 1})


def test_tv_to_law_counts_missing_mass():
    assert statistics.tv_to_law({0: 4}, {0: 0.5}) == pytest.approx(0.5)
    assert statistics.tv_to_law({0: 1, 1: 1}, {0: 0.5, 1: 0.5}) == pytest.approx(0.0)


def test_sampling_noise_bound():
    assert statistics.sampling_noise_bound(4, 100) == pytest.approx(0.4)
    with pytest.raises(StatisticsError):
        statistics.sampling_noise_bound(4, 0)


def test_merge_histograms():
    merged = statistics.merge_histograms([statistics.histogram("aab"), {"b": 2, "c": 1}])
    assert merged == {"a": 2, "b": 3, "c": 1}


def test_chi_square_of_a_perfect_fit():
    result = statistics.chi_square({0: 50, 1: 50}, {0: 0.5, 1: 0.5})
    assert result.statistic == pytest.approx(0.0)
    assert result.p_value == pytest.approx(1.0)
    assert result.dof == 1 and result.pooled == 0


def test_chi_square_pools_small_cells():
    result = statistics.chi_square({0: 50, 1: 49, 2: 1}, {0: 0.5, 1: 0.49, 2: 0.01})
    # key 2 is merged into the smallest regular cell; the empty remainder cell is dropped
    assert result.pooled == 1
    assert result.cells == 2
    assert result.dof == 1
    assert result.p_value > 0.9


def test_chi_square_flags_mass_outside_the_law():
    result = statistics.chi_square({0: 10, 1: 10, 7: 10}, {0: 0.5, 1: 0.5}, min_expected=0.0)
    assert result.statistic == math.inf
    assert result.p_value == 0.0


def test_chi_square_needs_degrees_of_freedom():
    with pytest.raises(StatisticsError):
        statistics.chi_square({0: 10}, {0: 1.0})
    with pytest.raises(StatisticsError):
        statistics.chi_square({}, {0: 1.0})
    with pytest.raises(StatisticsError):
        statistics.chi_square({0: 1}, {0: 0.7, 1: 0.7})


def test_chi_square_accepts_geometric_samples(rng):
    draws = rng.geometric(0.5, 5000) - 1
    law = statistics.geometric_law(0.5, 64)
    assert statistics.chi_square(statistics.histogram(draws.tolist()), law).p_value > 1e-4


def test_geometric_law():
    assert statistics.geometric_law(0.5, 4) == pytest.approx({0: 0.5, 1: 0.25, 2: 0.125, 3: 0.0625})
    assert sum(statistics.geometric_law(0.75, 200).values()) == pytest.approx(1.0)


def test_empirical_survival():
    assert statistics.empirical_survival([0, 1, 2, 3], 1, 3) == [(1, 0.75), (2, 0.5), (3, 0.25)]
    with pytest.raises(StatisticsError):
        statistics.empirical_survival([], 0, 1)


def test_tail_fit_recovers_exponential_decay():
    fit = statistics.tail_fit([(n, 2.0 ** -n) for n in range(1, 11)])
    assert fit.slope == pytest.approx(-math.log(2))
    assert fit.intercept == pytest.approx(0.0, abs=1e-9)
    assert fit.r_squared == pytest.approx(1.0)
    assert fit.points == 10


def test_tail_fit_edge_cases():
    flat = statistics.tail_fit([(n, 0.5) for n in range(5)])
    assert flat.slope == 0.0 and flat.r_squared == 1.0
    with pytest.raises(StatisticsError):
        statistics.tail_fit([(1, 0.5), (2, 0.25), (3, 0.0), (4, 0.0)])


def test_correlation_and_mean():
    assert statistics.correlation([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0)
    with pytest.raises(StatisticsError):
        statistics.correlation([1], [2])
    mean, error = statistics.mean_with_error([1, 2, 3])
    assert mean == pytest.approx(2.0)
    assert error == pytest.approx(1 / math.sqrt(3))
    assert statistics.mean_with_error([5.0]) == (5.0, 0.0)


def test_job_streams_depend_on_the_job_index_only():
    first = job_rng(7, 3).integers(0, 2 ** 32, 8)
    again = job_rng(7, 3).integers(0, 2 ** 32, 8)
    other = job_rng(7, 4).integers(0, 2 ** 32, 8)
    assert np.array_equal(first, again)
    assert not np.array_equal(first, other)
    assert job_seed(7, 3).spawn_key == (3,)


def test_job_seed_rejects_negative_values():
    with pytest.raises(ValueError):
        job_seed(-1, 0)
    with pytest.raises(ValueError):
        job_seed(0, -1)


def test_chunk_sizes():
    assert chunk_sizes(2500, 1000) == [1000, 1000, 500]
    assert chunk_sizes(2000, 1000) == [1000, 1000]
    assert chunk_sizes(0) == []
    with pytest.raises(ValueError):
        chunk_sizes(-1)


def test_chi_square_drops_empty_cells():
    result = statistics.chi_square({0: 30, 2: 30}, {0: 0.5, 1: 0.0, 2: 0.5})
    assert result.pooled == 0
    assert result.cells == 2
    assert result.statistic == pytest.approx(0.0)
