"""Seeded Monte Carlo estimate of a policy's success probability.

Each trial shuffles ``1..n`` (absolute ranks in interview order), derives the
relative ranks stage by stage and applies the policy. Trials are cut into
fixed-size shards; shard ``i`` draws from ``PCG64(SeedSequence(seed,
spawn_key=(i,)))`` so the result does not depend on how many workers run.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from statistics import NormalDist

import numpy as np

from .dp_solver import StagePolicy
from .reward import Goal

__all__ = ["SimulationReport", "simulate", "wilson_interval", "RNG_ID", "SHARD_SIZE"]

SHARD_SIZE = 1 << 16
RNG_ID = f"numpy-pcg64/seedsequence-spawn/fisher-yates/shard{SHARD_SIZE}/v1"

_Z95 = NormalDist().inv_cdf(0.975)


@dataclass(frozen=True)
class SimulationReport:
    n: int
    goal: Goal
    trials: int
    successes: int
    estimate: float
    std_error: float
    ci95: tuple[float, float]
    seed: int
    rng_id: str

    def to_dict(self) -> dict:
        d = asdict(self)
        d["goal"] = self.goal.to_dict()
        d["ci95"] = list(self.ci95)
        return d


def wilson_interval(successes: int, trials: int, z: float = _Z95) -> tuple[float, float]:
    p = successes / trials
    z2 = z * z
    denom = 1 + z2 / trials
    center = (p + z2 / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z2 / (4 * trials * trials)) / denom
    return max(0.0, min(center - half, p)), min(1.0, max(center + half, p))


def _relative_ranks_at(ranks: np.ndarray, j: int) -> np.ndarray:
    """X_j for every trial: 1 + #{i < j : R_i < R_j} (j is 1-based)."""
    return 1 + np.count_nonzero(ranks[: j - 1] < ranks[j - 1], axis=0)


def _shuffled_columns(rng: np.random.Generator, n: int, trials: int) -> np.ndarray:
    """Array of shape (n, trials); column t is a uniform permutation of 1..n.

    Fisher-Yates applied to all trials at once, one position per step.
    """
    dtype = np.int16 if n < (1 << 15) else np.int64
    ranks = np.repeat(np.arange(1, n + 1, dtype=dtype)[:, None], trials, axis=1)
    cols = np.arange(trials)
    for i in range(n - 1, 0, -1):
        r = rng.integers(0, i + 1, size=trials)
        picked = ranks[r, cols]
        ranks[r, cols] = ranks[i]
        ranks[i] = picked
    return ranks


def _run_shard(
    n: int, goal_mask: np.ndarray, accept: list[np.ndarray], trials: int, seed: int, shard: int
) -> int:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(shard,))))
    ranks = _shuffled_columns(rng, n, trials)
    wins = 0
    for j in range(1, n):
        table = accept[j - 1]
        if not table.any():
            continue
        stop = table[_relative_ranks_at(ranks, j)]
        if stop.any():
            wins += int(np.count_nonzero(goal_mask[ranks[j - 1, stop]]))
            ranks = ranks[:, ~stop]
            if ranks.shape[1] == 0:
                return wins
    return wins + int(np.count_nonzero(goal_mask[ranks[n - 1]]))


def simulate(
    n: int,
    goal: Goal,
    policy: StagePolicy,
    trials: int,
    seed: int,
    workers: int = 1,
) -> SimulationReport:
    if trials < 1:
        raise ValueError("empty simulation")
    if policy.n != n:
        raise ValueError(f"policy is for n={policy.n}, problem has n={n}")
    ranks = goal.validate(n)
    seed = int(seed) & ((1 << 64) - 1)

    goal_mask = np.zeros(n + 1, dtype=bool)
    goal_mask[list(ranks)] = True
    accept = []
    for j in range(1, n + 1):
        table = np.zeros(j + 1, dtype=bool)
        table[policy.stop_set(j)] = True
        accept.append(table)

    sizes = [SHARD_SIZE] * (trials // SHARD_SIZE)
    if trials % SHARD_SIZE:
        sizes.append(trials % SHARD_SIZE)
    jobs = [(n, goal_mask, accept, size, seed, i) for i, size in enumerate(sizes)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            successes = sum(pool.map(lambda a: _run_shard(*a), jobs))
    else:
        successes = sum(_run_shard(*a) for a in jobs)

    est = successes / trials
    return SimulationReport(
        n=n,
        goal=goal,
        trials=trials,
        successes=successes,
        estimate=est,
        std_error=math.sqrt(est * (1 - est) / trials),
        ci95=wilson_interval(successes, trials),
        seed=seed,
        rng_id=RNG_ID,
    )
