"""Exact success probability of a stage-set policy.

The relative ranks are independent and ``X_j`` is uniform on ``1..j``, so a
policy survives stage ``i`` with probability ``1 - |S_i|/i`` independently of
everything before it. Hence

    P(success) = sum_j  prod_{i<j} (1 - |S_i|/i) * sum_{x in S_j} y_j(x) / j
"""

from __future__ import annotations

from fractions import Fraction

from .dp_solver import StagePolicy
from .reward import Goal, rank_probability

__all__ = ["evaluate", "conditional_value", "continuation_values"]


def _check(n: int, goal: Goal, policy: StagePolicy) -> tuple[int, ...]:
    if policy.n != n:
        raise ValueError(f"policy is for n={policy.n}, problem has n={n}")
    return goal.validate(n)


def _stage_gain(n: int, j: int, ranks, policy: StagePolicy) -> Fraction:
    """P(X_j in S_j and R_j in goal)."""
    total = Fraction(0)
    for x in policy.stop_set(j):
        for k in ranks:
            total += rank_probability(n, j, x, k)
    return total / j


def evaluate(n: int, goal: Goal, policy: StagePolicy) -> Fraction:
    ranks = _check(n, goal, policy)
    survival = Fraction(1)
    total = Fraction(0)
    for j in range(1, n + 1):
        size = policy.size(j)
        if size:
            total += survival * _stage_gain(n, j, ranks, policy)
            survival *= Fraction(j - size, j)
            if not survival:
                break
    return total


def continuation_values(n: int, goal: Goal, policy: StagePolicy) -> list[Fraction]:
    """``W[j-1]``: success probability after passing on candidate ``j``.

    Computed with the same survival product as :func:`evaluate`, started at
    stage ``j + 1``. ``W[n-1]`` is 0 (nothing left).
    """
    ranks = _check(n, goal, policy)
    gains = [_stage_gain(n, j, ranks, policy) for j in range(1, n + 1)]
    stay = [Fraction(j - policy.size(j), j) for j in range(1, n + 1)]
    W = [Fraction(0)] * n
    # W_j = gain_{j+1} + stay_{j+1} * W_{j+1}
    for j in range(n - 1, 0, -1):
        W[j - 1] = gains[j] + stay[j] * W[j]
    return W


def conditional_value(
    n: int, goal: Goal, policy: StagePolicy, j: int, x: int
) -> Fraction:
    """Success probability of following ``policy`` from stage ``j`` given ``X_j = x``."""
    ranks = _check(n, goal, policy)
    if not 1 <= x <= j <= n:
        raise ValueError(f"need 1 <= x <= j <= n, got (j={j}, x={x}, n={n})")
    if policy.stops(j, x):
        return sum((rank_probability(n, j, x, k) for k in ranks), Fraction(0))
    survival = Fraction(1)
    total = Fraction(0)
    for m in range(j + 1, n + 1):
        size = policy.size(m)
        if size:
            total += survival * _stage_gain(n, m, ranks, policy)
            survival *= Fraction(m - size, m)
    return total
