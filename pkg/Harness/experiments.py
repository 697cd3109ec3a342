#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

"""Experiments behind the CLI commands.

Every experiment validates its inputs (criticality, lattice membership)
before sampling, splits the sampling into jobs of ``seeding.job_chunk``
samples and aggregates the job results in job order. Reports are plain
dicts without timestamps.
"""

from __future__ import annotations

import logging
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Any, Callable, Sequence

import numpy as np

from Boltzmann.admissibility import BoltzmannSolution, solve_admissibility
from Boltzmann.presets import printed_even_constant
from Boltzmann.weights import WeightSequence
from Branching.offspring_law import OffspringLaw
from Branching.perron import classify, exact_critical_perron
from Branching.size_bias import NotCriticalError
from Harness import statistics
from Harness.config import (ExperimentConfig, load_law, load_weights, map_size_kind, parse_preset,
                            parse_tree_functional)
from Harness.seeding import chunk_sizes, job_rng
from InfiniteMap.local_limit import WindowPolicy, ball_of_infinite_map, root_degree_samples, \
    root_successor_counts, spine_offspring_samples
from InfiniteMap.sign_mixture import SignMixture, sign_mixture
from Periodicity.lattice import PeriodData, SizeVector, period
from Periodicity.map_periods import check_map_lattice, map_periods
from PlanarMaps.ball import ball
from PlanarMaps.bdfg import bdfg, predicted_counts
from PlanarMaps.canonical import canonical_code
from PlanarMaps.enumeration import enumerate_mobiles, face_vertex_count, positive_quadrangulation_codes
from PlanarMaps.finite_maps import ConditionedMapSampler, sample_boltzmann_map
from Sampler.galton_watson import ConditionedSampler, Overflow, sample_tree
from Sampler.spine import enumerate_truncated_forests, size_biased_probability
from Trees.encoding import canonical_encode
from Trees.operations import truncate
from Trees.typed_tree import Forest, TypedTree

_logger = logging.getLogger(__name__)

# the exhaustive rotation-system oracle is only run up to this many faces
oracle_face_limit = 3


# --- job plumbing ------------------------------------------------------------------


def run_jobs(worker: Callable, payloads: Sequence, threads: int) -> list:
    """Runs ``worker`` on every payload, in worker processes when ``threads`` > 1."""
    if threads <= 1 or len(payloads) <= 1:
        return [worker(payload) for payload in payloads]
    with ProcessPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(worker, payloads))


class _JobCounter:
    """Hands out consecutive job indices, so a run's streams depend on its config only."""

    def __init__(self):
        self.next = 0

    def take(self, samples: int) -> list[tuple[int, int]]:
        jobs = []
        for count in chunk_sizes(samples):
            jobs.append((self.next, count))
            self.next += 1
        return jobs


def _solution(config: ExperimentConfig, critical: bool = True) -> BoltzmannSolution:
    solution = solve_admissibility(load_weights(config.weights))
    if critical:
        solution.require_critical()
    else:
        solution.require_admissible()
    return solution


def _policy(config: ExperimentConfig) -> WindowPolicy:
    return WindowPolicy(initial_height=config.window_height, height_cap=config.window_cap,
                        verify=config.verify)


def _header(command: str, config: ExperimentConfig) -> dict[str, Any]:
    return {"command": command, "config": config.reproducible_json()}


# --- analyze -----------------------------------------------------------------------


def analyze(config: ExperimentConfig) -> dict[str, Any]:
    q = load_weights(config.weights)
    solution = solve_admissibility(q)
    report = _header("analyze", config)
    report["solution"] = solution.to_report()
    report["map_periods"] = asdict(map_periods(q))
    if solution.critical:
        report["sign_mixture"] = sign_mixture(solution).to_json()

    parsed = parse_preset(config.weights)
    if parsed is not None and parsed[0] == "even":
        p = parsed[1].get("p", 2)
        constant = printed_even_constant(p)
        printed = solve_admissibility(WeightSequence.from_table({2 * p: constant}))
        report["printed_even_constant"] = {
            "value": constant,
            "classification": printed.classification.value,
            "matches_search": abs(constant - q.q(2 * p)) <= 1e-8,
        }
        if abs(constant - q.q(2 * p)) > 1e-8:
            _logger.warning("Closed-form constant %.12g differs from the critical weight %.12g",
                            constant, q.q(2 * p))
    return report


# --- period ------------------------------------------------------------------------


def _period_json(data: PeriodData) -> dict[str, Any]:
    return {
        "d": data.d,
        "alpha": dict(zip((str(label) for label in data.labels), data.alpha)),
        "first_sizes": dict(zip((str(label) for label in data.labels), data.first_sizes)),
        "missing": {str(label): list(m) for label, m in zip(data.labels, data.missing)},
        "budget": data.budget,
    }


def period_report(config: ExperimentConfig) -> dict[str, Any]:
    report = _header("period", config)
    if config.law is not None:
        law = load_law(config.law)
        gamma = parse_tree_functional(config.size_functional, law)
        report["tree"] = _period_json(period(law, gamma, config.period_budget))
    if config.weights is not None:
        solution = _solution(config, critical=False)
        report["maps"] = [
            {"kind": check.kind, "d_tree": check.d_tree, "d_map": check.d_map, "alpha_1": check.alpha_1,
             "gamma_1": check.gamma_1, "alpha_2": check.alpha_2, "ok": check.ok}
            for check in check_map_lattice(solution, config.period_budget)
        ]
    if "tree" not in report and "maps" not in report:
        raise ValueError("The period command needs --law or --weights.")
    return report


# --- sample ------------------------------------------------------------------------


@dataclass(frozen=True)
class _SampleJob:
    what: str
    config: ExperimentConfig
    job: int
    samples: int
    law: OffspringLaw | None = None
    gamma: SizeVector | None = None
    solution: BoltzmannSolution | None = None
    mixture: SignMixture | None = None


def _sample_job(job: _SampleJob) -> list[dict[str, Any]]:
    rng = job_rng(job.config.seed, job.job)
    config = job.config
    items = []
    if job.what == "tree":
        sampler = None
        if config.sizes:
            sampler = ConditionedSampler(job.law, job.gamma, config.sizes[0], None, config.attempt_cap,
                                         config.vertex_cap)
        for _ in range(job.samples):
            tree = sampler.sample(rng) if sampler else sample_tree(rng, job.law, job.law.labels[0], config.vertex_cap)
            if isinstance(tree, Overflow):
                items.append({"overflow": True, "vertices": tree.vertices})
                continue
            items.append({"tree": tree.to_nested(), "code": canonical_encode(tree).hex(),
                          "vertices": tree.vertex_count, "height": tree.height})
    elif job.what == "map":
        sampler = None
        if config.sizes:
            sampler = ConditionedMapSampler(job.solution, map_size_kind(config.size_functional), config.sizes[0],
                                            True, config.attempt_cap, config.vertex_cap)
        for _ in range(job.samples):
            sampled = sampler.sample(rng) if sampler else sample_boltzmann_map(rng, job.solution, config.vertex_cap)
            stats = sampled.map.stats()
            items.append({"map": sampled.map.to_json(), "sign": sampled.sign.value, "code": canonical_code(
                sampled.map).hex(), "vertices": stats.vertices, "edges": stats.edges, "faces": stats.faces})
    else:
        for _ in range(job.samples):
            found = ball_of_infinite_map(rng, job.solution, config.radius, job.mixture, policy=_policy(config))
            items.append(found.to_json())
    return items


def sample(config: ExperimentConfig, what: str) -> dict[str, Any]:
    if what not in ("tree", "map", "ball"):
        raise ValueError(f"Sample kinds are tree, map and ball, got {what!r}.")
    common: dict[str, Any] = {}
    if what == "tree":
        law = load_law(config.law)
        gamma = parse_tree_functional(config.size_functional, law)
        if config.sizes:
            period(law, gamma, config.period_budget).check_target((law.labels[0],), config.sizes[0])
        common = {"law": law, "gamma": gamma}
    elif what == "map":
        solution = _solution(config, critical=False)
        if config.sizes:
            ConditionedMapSampler(solution, map_size_kind(config.size_functional), config.sizes[0])
        common = {"solution": solution}
    else:
        solution = _solution(config)
        common = {"solution": solution, "mixture": sign_mixture(solution)}

    counter = _JobCounter()
    payloads = [_SampleJob(what, config, job, count, **common) for job, count in counter.take(config.samples)]
    items = [item for part in run_jobs(_sample_job, payloads, config.threads) for item in part]
    report = _header(f"sample {what}", config)
    report["rows"] = items
    return report


# --- tree convergence ----------------------------------------------------------------


def truncation_key(t: TypedTree | Forest, radius: int) -> str:
    cut = truncate(t, radius)
    return canonical_encode(cut if isinstance(cut, Forest) else Forest((cut,))).hex()


def truncation_reference(law: OffspringLaw, word: Sequence[int], radius: int) -> dict[str, Any]:
    """Exact size-biased probabilities of every truncation of height ``radius``."""
    if law.exact:
        b = exact_critical_perron(law)[1]
    else:
        criticality = classify(law)
        if not criticality.critical:
            raise NotCriticalError(f"Local limits need a critical law, got {criticality.classification.value}.")
        b = [float(x) for x in criticality.perron.b]
    reference = {}
    for forest in enumerate_truncated_forests(law, word, radius):
        probability = size_biased_probability(law, b, forest, radius)
        if probability:
            key = canonical_encode(forest).hex()
            reference[key] = reference.get(key, 0) + probability
    return reference


@dataclass(frozen=True)
class _TreeJob:
    law: OffspringLaw
    gamma: SizeVector
    lattice: PeriodData
    size: int
    radius: int
    seed: int
    job: int
    samples: int
    attempt_cap: int
    vertex_cap: int


def _tree_truncation_job(job: _TreeJob) -> Counter:
    rng = job_rng(job.seed, job.job)
    sampler = ConditionedSampler(job.law, job.gamma, job.size, None, job.attempt_cap, job.vertex_cap, job.lattice)
    return statistics.histogram(truncation_key(sampler.sample(rng), job.radius) for _ in range(job.samples))


def tree_convergence(config: ExperimentConfig) -> dict[str, Any]:
    law = load_law(config.law)
    gamma = parse_tree_functional(config.size_functional, law)
    word = (law.labels[0],)
    if not config.sizes:
        raise ValueError("Tree convergence needs --sizes.")
    lattice = period(law, gamma, config.period_budget)
    for n in config.sizes:
        lattice.check_target(word, n)

    reference = truncation_reference(law, word, config.radius)
    reference_float = {key: float(p) for key, p in reference.items()}
    counter = _JobCounter()
    rows = []
    for n in config.sizes:
        started = time.monotonic()
        payloads = [_TreeJob(law, gamma, lattice, n, config.radius, config.seed, job, count, config.attempt_cap,
                             config.vertex_cap) for job, count in counter.take(config.samples)]
        hist = statistics.merge_histograms(run_jobs(_tree_truncation_job, payloads, config.threads))
        classes = len(set(hist) | set(reference_float))
        rows.append({
            "size": n,
            "samples": config.samples,
            "tv": statistics.tv_to_law(hist, reference_float),
            "noise_bound": statistics.sampling_noise_bound(classes, config.samples),
            "classes": classes,
        })
        _logger.info("Size %d: TV %.4f after %.1f s", n, rows[-1]["tv"], time.monotonic() - started)

    report = _header("convergence", config)
    report["target"] = "tree"
    report["reference_mass"] = float(sum(reference.values()))
    report["reference_exact"] = law.exact
    report["rows"] = rows
    report["tv_decreasing"] = all(a["tv"] >= b["tv"] for a, b in zip(rows, rows[1:]))
    return report


# --- map convergence -----------------------------------------------------------------


@dataclass(frozen=True)
class _BallJob:
    solution: BoltzmannSolution
    kind: str
    size: int | None
    """``None`` for balls of the infinite map."""

    radius: int
    seed: int
    job: int
    samples: int
    attempt_cap: int
    vertex_cap: int
    policy: WindowPolicy
    mixture: SignMixture | None = None


def _ball_job(job: _BallJob) -> tuple[Counter, int]:
    rng = job_rng(job.seed, job.job)
    hist: Counter = Counter()
    retried = 0
    if job.size is None:
        for _ in range(job.samples):
            found = ball_of_infinite_map(rng, job.solution, job.radius, job.mixture, policy=job.policy)
            hist[found.ball.code.hex()] += 1
            retried += found.stabilization_retries > 0
    else:
        sampler = ConditionedMapSampler(job.solution, job.kind, job.size, False, job.attempt_cap, job.vertex_cap)
        for _ in range(job.samples):
            hist[ball(sampler.sample(rng).map, job.radius).code.hex()] += 1
    return hist, retried


def map_convergence(config: ExperimentConfig) -> dict[str, Any]:
    solution = _solution(config)
    kind = map_size_kind(config.size_functional)
    if not config.sizes:
        raise ValueError("Map convergence needs --sizes.")
    for n in config.sizes:
        # raises LatticeError before any sampling
        ConditionedMapSampler(solution, kind, n, False, config.attempt_cap, config.vertex_cap)
    mixture = sign_mixture(solution)
    policy = _policy(config)
    counter = _JobCounter()

    def collect(size: int | None) -> tuple[Counter, int]:
        payloads = [_BallJob(solution, kind, size, config.radius, config.seed, job, count, config.attempt_cap,
                             config.vertex_cap, policy, mixture) for job, count in counter.take(config.samples)]
        parts = run_jobs(_ball_job, payloads, config.threads)
        return statistics.merge_histograms(h for h, _ in parts), sum(r for _, r in parts)

    infinite, retried = collect(None)
    rows = []
    for n in config.sizes:
        hist, _ = collect(n)
        classes = len(set(hist) | set(infinite))
        rows.append({
            "size": n,
            "samples": config.samples,
            "tv": statistics.tv_distance(hist, infinite),
            "noise_bound": statistics.sampling_noise_bound(classes, config.samples),
            "classes": classes,
        })
        _logger.info("%d %s: ball TV %.4f", n, kind, rows[-1]["tv"])

    report = _header("convergence", config)
    report["target"] = "map"
    report["sign_mixture"] = mixture.to_json()
    report["infinite"] = {"samples": config.samples, "classes": len(infinite), "stabilization_retried": retried}
    report["rows"] = rows
    return report


def convergence(config: ExperimentConfig) -> dict[str, Any]:
    """Tree convergence when a law is given, map convergence for weights."""
    if config.law is not None:
        return tree_convergence(config)
    if config.weights is not None:
        return map_convergence(config)
    raise ValueError("The convergence command needs --law or --weights.")


# --- degree tail ---------------------------------------------------------------------


@dataclass(frozen=True)
class _TailJob:
    solution: BoltzmannSolution
    what: str
    seed: int
    job: int
    samples: int
    policy: WindowPolicy
    mixture: SignMixture | None = None


def _tail_job(job: _TailJob) -> np.ndarray:
    rng = job_rng(job.seed, job.job)
    if job.what == "degree":
        return root_degree_samples(rng, job.solution, job.samples, job.mixture, job.policy)
    if job.what == "successors":
        return root_successor_counts(rng, job.solution, job.samples, job.policy)
    return spine_offspring_samples(rng, job.solution, job.samples)


def _fit_or_none(values: np.ndarray, low: int, high: int) -> dict[str, Any]:
    points = statistics.empirical_survival(values, low, high)
    try:
        fit = statistics.tail_fit(points).to_json()
    except statistics.StatisticsError as exc:
        _logger.warning("No tail fit: %s", exc)
        fit = None
    return {"survival": [[n, s] for n, s in points], "fit": fit}


def degree_tail(config: ExperimentConfig) -> dict[str, Any]:
    solution = _solution(config)
    mixture = sign_mixture(solution)
    policy = _policy(config)
    counter = _JobCounter()
    low, high = config.tail_range

    def collect(what: str) -> np.ndarray:
        payloads = [_TailJob(solution, what, config.seed, job, count, policy, mixture)
                    for job, count in counter.take(config.samples)]
        return np.concatenate(run_jobs(_tail_job, payloads, config.threads))

    degrees = collect("degree")
    successors = collect("successors")
    spine = collect("spine")

    success = 1.0 / solution.z_plus
    law = statistics.geometric_law(success, 64)
    left, right = spine[:, 0], spine[:, 1]
    report = _header("degree-tail", config)
    report["root_degree"] = _fit_or_none(degrees, low, high)
    report["root_degree"]["mean"] = float(degrees.mean())
    report["root_successors"] = _fit_or_none(successors, low, high)
    report["spine_offspring"] = {
        "geometric_stop": success,
        "left": statistics.chi_square(statistics.histogram(left.tolist()), law).to_json(),
        "right": statistics.chi_square(statistics.histogram(right.tolist()), law).to_json(),
        "correlation": statistics.correlation(left, right),
    }
    return report


# --- enumerate -----------------------------------------------------------------------


def _is_quadrangulation(q: WeightSequence) -> bool:
    return not q.is_geometric and set(q.support()) == {4}


def enumerate_maps(config: ExperimentConfig) -> dict[str, Any]:
    """Pushes every small mobile through the bijection and audits the resulting maps."""
    solution = _solution(config, critical=False)
    law = solution.mobile_law.law
    faces = sorted(n for n in set(config.sizes) if n >= 1) or [1, 2, 3]
    budget = max(faces)
    # geometric weights give face vertices unbounded words
    max_children = 2 * budget + 2 if solution.weights.is_geometric else None
    root_types = (1,) if solution.bipartite else (1, 2)

    codes: dict[int, list[bytes]] = {n: [] for n in faces}
    count_failures = 0
    euler_failures = 0
    for root_type in root_types:
        for mobile in enumerate_mobiles(law, budget, root_type, max_children):
            n = face_vertex_count(mobile)
            if n not in codes:
                continue
            m = bdfg(mobile)
            stats = m.stats()
            if (stats.vertices, stats.edges, stats.faces) != predicted_counts(mobile):
                count_failures += 1
            if stats.euler_characteristic != 2 or m.problem() is not None:
                euler_failures += 1
            codes[n].append(canonical_code(m))

    quadrangulation = _is_quadrangulation(solution.weights)
    rows = []
    for n in faces:
        row = {"faces": n, "mobiles": len(codes[n]), "maps": len(set(codes[n])),
               "injective": len(codes[n]) == len(set(codes[n]))}
        if quadrangulation and n <= oracle_face_limit:
            oracle = positive_quadrangulation_codes(n)
            row["oracle"] = len(oracle)
            row["oracle_agrees"] = oracle == set(codes[n])
        rows.append(row)
        _logger.info("%d faces: %d mobiles, %d distinct maps", n, row["mobiles"], row["maps"])

    report = _header("enumerate", config)
    report["max_children"] = max_children
    report["rows"] = rows
    report["count_identity_failures"] = count_failures
    report["euler_failures"] = euler_failures
    return report
