#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

"""Per-job random streams.

Job ``j`` of a run with master seed ``s`` draws from
``SeedSequence(s, spawn_key=(j,))``; numpy hashes the spawn key into the
stream, so a job's stream depends on its index only and never on which
worker runs it or in what order.
"""

import numpy as np

# samples per job; fixed so that results do not depend on the thread count
job_chunk = 1000


def job_seed(master: int, job: int) -> np.random.SeedSequence:
    if master < 0 or job < 0:
        raise ValueError(f"Seeds and job indices must be nonnegative, got {master} and {job}.")
    return np.random.SeedSequence(master, spawn_key=(job,))


def job_rng(master: int, job: int) -> np.random.Generator:
    return np.random.default_rng(job_seed(master, job))


def chunk_sizes(samples: int, chunk: int = job_chunk) -> list[int]:
    """Splits ``samples`` into jobs of at most ``chunk`` samples."""
    if samples < 0:
        raise ValueError(f"Sample count must be nonnegative, got {samples}.")
    sizes = [chunk] * (samples // chunk)
    if samples % chunk:
        sizes.append(samples % chunk)
    return sizes
