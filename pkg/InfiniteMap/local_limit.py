#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

"""Balls of the infinite q-Boltzmann map and the statistics read on them.

A ball B(k) read on a window is certified once every vertex at distance at
most k - 1 from e+ has all its arcs resolved: each of its corners has found
its successor, and the stretch of contour that may hold corners pointing at
it is fully explored. Distances up to k are then exact and every edge of
B(k) is present. Until then, the gaps blocking those searches are expanded
one generation at a time and the spine is doubled whenever a search runs
into its stub. Certified balls are checked once more after the window has
been grown further.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass

import numpy as np

from Boltzmann.admissibility import BoltzmannSolution
from Branching.perron import mean_matrix, perron
from Branching.size_bias import size_bias, spine_child_index
from Harness import statistics
from InfiniteMap import config
from InfiniteMap.sign_mixture import SignMixture, sign_mixture
from InfiniteMap.window import InfiniteMobileWindow, MobileWindow, StabilizationError, WindowMap, window_map
from PlanarMaps.ball import MapBall, ball
from PlanarMaps.finite_maps import ConditionedMapSampler, MapSign, draw_sign, map_size
from PlanarMaps.planar_map import InvalidMapError, reverse_root

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WindowPolicy:
    initial_height: int = config.initial_window_height
    height_cap: int = config.window_height_cap
    vertex_cap: int = config.window_vertex_cap
    verify: bool = config.verify_stabilization


@dataclass(frozen=True)
class InfiniteBall:
    ball: MapBall
    sign: MapSign
    window_depth: int
    stabilization_retries: int

    def to_json(self) -> dict:
        return {
            "map": self.ball.map.to_json(),
            "radius": self.ball.radius,
            "code": self.ball.code.hex(),
            "sign": self.sign.value,
            "window_depth": self.window_depth,
            "stabilization_retries": self.stabilization_retries,
        }


def _oriented(wm: WindowMap, sign: MapSign):
    return reverse_root(wm.map) if sign is MapSign.NEGATIVE else wm.map


def certified_ball(window: InfiniteMobileWindow, k: int, sign: MapSign) -> tuple[MapBall | None, MobileWindow, set]:
    """B(k) read on the current window, or ``None`` with the gaps that still hide arcs it needs.

    Gaps are tree vertices of the returned snapshot; ``None`` stands for the spine stub.
    """
    view = window.snapshot()
    wm = window_map(view)
    if wm.map.root is None:
        return None, view, view.root_blockers()
    m = _oriented(wm, sign)
    blockers: set[int | None] = set()
    for v, d in m.distances_from(m.root_head).items():
        if d <= k - 1:
            blockers |= view.blockers(wm.mobile_vertex[v])
    if blockers:
        return None, view, blockers
    return ball(m, k), view, blockers


def _grow(window: InfiniteMobileWindow, view: MobileWindow, blockers: set, policy: WindowPolicy):
    for gap in blockers:
        if gap is not None:
            window.expand(view.window_vertex[gap])
    if None in blockers:
        height = max(2 * window.height, 1)
        if height > policy.height_cap:
            raise StabilizationError(f"Window search ran past height {policy.height_cap}.")
        window.extend_to(height)


def ball_of_infinite_map(rng: np.random.Generator, solution: BoltzmannSolution, k: int,
                         mixture: SignMixture | None = None, sign: MapSign | None = None,
                         policy: WindowPolicy = WindowPolicy()) -> InfiniteBall:
    if k < 1:
        raise InvalidMapError(f"Ball radius must be >= 1, got {k}.")
    solution.require_critical()
    law = solution.mobile_law.law
    if sign is None:
        mixture = mixture if mixture is not None else sign_mixture(solution)
        sign = draw_sign(rng, mixture.as_dict())

    window = InfiniteMobileWindow(rng, law, MapSign.NULL if sign is MapSign.NULL else MapSign.POSITIVE,
                                  policy.vertex_cap)
    window.extend_to(min(policy.initial_height, policy.height_cap))
    retries = 0
    while True:
        found, view, blockers = certified_ball(window, k, sign)
        if found is None:
            _grow(window, view, blockers, policy)
            continue
        if not policy.verify:
            return InfiniteBall(found, sign, window.height, retries)
        height = window.height
        window.extend_to(2 * height)
        for v in window.gaps:
            if v != window.stub:
                window.expand(v)
        again = ball(_oriented(window_map(window.snapshot()), sign), k)
        if again.code == found.code:
            return InfiniteBall(found, sign, height, retries)
        retries += 1
        _logger.warning("Ball of radius %d changed when its window grew past height %d", k, height)


def root_degree_samples(rng: np.random.Generator, solution: BoltzmannSolution, N: int,
                        mixture: SignMixture | None = None, policy: WindowPolicy = WindowPolicy()) -> np.ndarray:
    """deg(e+) in N independent infinite maps."""
    mixture = mixture if mixture is not None else sign_mixture(solution)
    degrees = np.zeros(N, dtype=np.int64)
    for i in range(N):
        degrees[i] = ball_of_infinite_map(rng, solution, 1, mixture, policy=policy).ball.root_degree
    return degrees


def root_successor_counts(rng: np.random.Generator, solution: BoltzmannSolution, samples: int,
                          policy: WindowPolicy = WindowPolicy()) -> np.ndarray:
    """Corners of positive infinite mobiles whose successor is the root vertex."""
    solution.require_critical()
    law = solution.mobile_law.law
    counts = np.zeros(samples, dtype=np.int64)
    for i in range(samples):
        window = InfiniteMobileWindow(rng, law, MapSign.POSITIVE, policy.vertex_cap)
        window.extend_to(min(policy.initial_height, policy.height_cap))
        view = window.snapshot()
        blockers = view.blockers(0)
        while blockers:
            _grow(window, view, blockers, policy)
            view = window.snapshot()
            blockers = view.blockers(0)
        counts[i] = window_map(view).incoming_root_corners
    return counts


def spine_offspring_samples(rng: np.random.Generator, solution: BoltzmannSolution, samples: int) -> np.ndarray:
    """(N_l, N_r) at type-1 spine vertices: type-3 children left and right of the spine child."""
    solution.require_critical()
    law = solution.mobile_law.law
    b = [float(x) for x in perron(mean_matrix(law)).b]
    biased = size_bias(law, b)
    pairs = np.zeros((samples, 2), dtype=np.int64)
    for i in range(samples):
        word = biased.sample_word(rng, 1)
        index = spine_child_index(rng, word, b, law)
        pairs[i] = (index, len(word) - 1 - index)
    return pairs


def spine_label_increments(rng: np.random.Generator, solution: BoltzmannSolution, height: int,
                           policy: WindowPolicy = WindowPolicy()) -> np.ndarray:
    """Label steps between consecutive type-1 spine vertices of one positive window, in true units."""
    solution.require_critical()
    window = InfiniteMobileWindow(rng, solution.mobile_law.law, MapSign.POSITIVE, policy.vertex_cap)
    window.extend_to(height)
    return np.diff(np.asarray(window.spine_type1_labels(), dtype=float)) / 2


@dataclass(frozen=True)
class VertexConcentration:
    kind: str
    n: int
    mean: float
    std: float
    samples: int


def vertex_concentration(rng: np.random.Generator, solution: BoltzmannSolution, kind: str, n: int,
                         samples: int) -> VertexConcentration:
    """Mean and spread of #V / n over maps conditioned on n edges or faces."""
    sampler = ConditionedMapSampler(solution, kind, n)
    ratios = np.array([map_size(sampler.sample(rng).map, "V") / n for _ in range(samples)])
    std = float(ratios.std(ddof=1)) if samples > 1 else 0.0
    return VertexConcentration(kind, n, float(ratios.mean()), std, samples)


@dataclass(frozen=True)
class DegreeBias:
    """deg(e+) in conditioned finite maps against the degree-biased vertex degree."""

    kind: str
    n: int
    maps: int
    root_degrees: dict[int, int]
    degree_biased: dict[int, float]
    fit: statistics.ChiSquareResult

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "maps": self.maps,
            "root_degrees": {str(d): c for d, c in sorted(self.root_degrees.items())},
            "degree_biased": {str(d): p for d, p in sorted(self.degree_biased.items())},
            "chi_square": self.fit.to_json(),
        }


def root_degree_bias(rng: np.random.Generator, solution: BoltzmannSolution, n: int, maps: int,
                     kind: str = "V") -> DegreeBias:
    """Tests that e+ of an unpointed conditioned map is a vertex picked proportionally to its degree.

    The reference law averages sum_v deg(v) 1[deg(v) = d] / 2#E over the same maps.
    """
    sampler = ConditionedMapSampler(solution, kind, n, pointed=False)
    observed: Counter = Counter()
    weights: Counter = Counter()
    for _ in range(maps):
        m = sampler.sample(rng).map
        if m.root is None:
            raise InvalidMapError("Degree bias needs maps with at least one edge.")
        observed[m.degree(m.root_head)] += 1
        for degree in Counter(m.origin).values():
            weights[degree] += degree / m.half_edge_count
    biased = {d: w / maps for d, w in weights.items()}
    fit = statistics.chi_square(observed, biased)
    _logger.info("Root degree against the degree-biased law at %d %s: p=%.4g", n, kind, fit.p_value)
    return DegreeBias(kind, n, maps, dict(observed), biased, fit)
