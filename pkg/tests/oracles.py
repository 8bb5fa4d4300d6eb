"""Brute-force oracles over all n! interview orders.

Nothing here imports the package's solver code: values come from counting
permutations directly.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np


def relative_ranks(perm) -> tuple[int, ...]:
    """X_j = |{i <= j : R_i <= R_j}| straight from the definition."""
    return tuple(sum(1 for i in range(j + 1) if perm[i] <= perm[j]) for j in range(len(perm)))


def all_orders(n: int):
    for perm in itertools.permutations(range(1, n + 1)):
        yield perm, relative_ranks(perm)


def enumerated_reward(n: int, j: int, x: int, ranks) -> Fraction:
    """Frequency of R_j in ranks among orders with X_j = x."""
    ranks = set(ranks)
    hits = total = 0
    for perm, rel in all_orders(n):
        if rel[j - 1] == x:
            total += 1
            hits += perm[j - 1] in ranks
    return Fraction(hits, total)


def brute_force_policy_value(n: int, ranks, stop_sets) -> Fraction:
    """Success probability of a stage-set policy, averaged over all orders."""
    ranks = set(ranks)
    stop_sets = [set(s) for s in stop_sets]
    wins = 0
    for perm, rel in all_orders(n):
        for j in range(n):
            if rel[j] in stop_sets[j] or j == n - 1:
                wins += perm[j] in ranks
                break
    return Fraction(wins, math.factorial(n))


def best_history_rule(n: int, ranks) -> Fraction:
    """Max over every deterministic rule that may use the full history.

    A rule maps each relative-rank prefix (x_1..x_j), j < n, to stop/continue.
    Feasible for n <= 4 (512 rules at n = 4).
    """
    ranks = set(ranks)
    orders = list(all_orders(n))
    prefixes = [sorted({rel[:j] for _, rel in orders}) for j in range(1, n)]
    flat = [p for level in prefixes for p in level]
    best = Fraction(0)
    for choice in itertools.product((False, True), repeat=len(flat)):
        stop = dict(zip(flat, choice))
        wins = 0
        for perm, rel in orders:
            for j in range(1, n + 1):
                if j == n or stop[rel[:j]]:
                    wins += perm[j - 1] in ranks
                    break
        best = max(best, Fraction(wins, len(orders)))
    return best


def exhaustive_stage_set_optimum(n: int, k: int) -> tuple[Fraction, int]:
    """Best success probability over *all* stage-set policies, by counting orders.

    Walks the product space S_1 x ... x S_{n-1} depth first, partitioning the
    n! orders by where each candidate policy stops. At the last free stage
    all 2^(n-1) choices are scored at once from per-rank hit counts, which is
    still a count over the surviving orders for every policy.

    Returns (optimal value, number of policies scored).
    """
    perms = np.array(list(itertools.permutations(range(1, n + 1))), dtype=np.int64)
    rel = np.array([relative_ranks(p) for p in perms], dtype=np.int64)
    hit = perms == k
    n_orders = len(perms)

    def masks_bits(s: int) -> np.ndarray:
        m = np.arange(1 << s)[:, None]
        return (m >> np.arange(s)[None, :]) & 1

    bits_cache = {s: masks_bits(s) for s in range(1, n)}

    def rec(s: int, idx: np.ndarray, acc: int) -> tuple[int, int]:
        if s == n:
            return acc + int(hit[idx, n - 1].sum()), 1
        xs = rel[idx, s - 1]
        if s == n - 1:
            stop_hit = np.bincount(xs[hit[idx, s - 1]] - 1, minlength=s)
            go_hit = np.bincount(xs[hit[idx, n - 1]] - 1, minlength=s)
            bits = bits_cache[s]
            scores = bits @ stop_hit + (1 - bits) @ go_hit
            return acc + int(scores.max()), len(scores)
        best, count = -1, 0
        bits = bits_cache[s]
        for mask in range(1 << s):
            stop = bits[mask][xs - 1].astype(bool)
            gained = int(hit[idx[stop], s - 1].sum())
            val, c = rec(s + 1, idx[~stop], acc + gained)
            best = max(best, val)
            count += c
        return best, count

    wins, scored = rec(1, np.arange(n_orders), 0)
    return Fraction(wins, n_orders), scored
