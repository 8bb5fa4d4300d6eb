"""Backward induction for the rank-selection stopping problem.

Because the relative ranks are independent and the reward depends only on the
current relative rank, the value function reduces to ``V_j(x)``:

    V_n(x) = y_n(x)
    V_j(x) = max(y_j(x), cont_j),   cont_j = mean(V_{j+1}(1..j+1))

and the optimal value is ``V_1(1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .reward import Goal, SingleRank, rank_probability, reward_support

__all__ = ["StagePolicy", "ValueTable", "solve", "p_value", "p_kn"]


@dataclass(frozen=True)
class StagePolicy:
    """Stop at the first stage ``j`` whose relative rank lies in ``S_j``.

    ``masks[j-1]`` is a bit set: bit ``x-1`` is on iff ``x`` is in ``S_j``.
    ``S_n`` must be full, so every relative-rank sequence stops by stage n.
    """

    n: int
    masks: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("policy needs n >= 1")
        if len(self.masks) != self.n:
            raise ValueError(f"expected {self.n} stage sets, got {len(self.masks)}")
        for j, mask in enumerate(self.masks, start=1):
            if mask < 0 or mask >> j:
                raise ValueError(f"S_{j} must be a subset of 1..{j}")
        if self.masks[-1] != (1 << self.n) - 1:
            raise ValueError(f"S_{self.n} must be {{1..{self.n}}} (forced stop)")

    @classmethod
    def from_sets(cls, n: int, sets: Sequence[Iterable[int]]) -> "StagePolicy":
        masks = []
        for j, s in enumerate(sets, start=1):
            mask = 0
            for x in s:
                x = int(x)
                if not 1 <= x <= j:
                    raise ValueError(f"S_{j} contains {x}, outside 1..{j}")
                mask |= 1 << (x - 1)
            masks.append(mask)
        return cls(n, tuple(masks))

    @classmethod
    def stop_at_n(cls, n: int) -> "StagePolicy":
        return cls(n, (0,) * (n - 1) + ((1 << n) - 1,))

    def stops(self, j: int, x: int) -> bool:
        return bool(self.masks[j - 1] >> (x - 1) & 1)

    def stop_set(self, j: int) -> list[int]:
        mask = self.masks[j - 1]
        return [x for x in range(1, j + 1) if mask >> (x - 1) & 1]

    def size(self, j: int) -> int:
        return bin(self.masks[j - 1]).count("1")

    def as_lists(self) -> list[list[int]]:
        return [self.stop_set(j) for j in range(1, self.n + 1)]


@dataclass
class ValueTable:
    """Solved instance. ``V[j-1][x-1] = V_j(x)``, ``cont[j-1] = cont_j`` (j < n)."""

    n: int
    goal: Goal
    V: list[list[Fraction]]
    cont: list[Fraction]
    value: Fraction

    def v(self, j: int, x: int) -> Fraction:
        return self.V[j - 1][x - 1]


def _stage_rewards(n: int, j: int, ranks: tuple[int, ...]) -> dict[int, Fraction]:
    out = {}
    for x in reward_support(n, j, ranks):
        r = sum((rank_probability(n, j, x, k) for k in ranks), Fraction(0))
        if r:
            out[x] = r
    return out


def solve(n: int, goal: Goal) -> tuple[ValueTable, StagePolicy]:
    """Exact optimal value, value table and (stop-on-ties) optimal policy."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    ranks = goal.validate(n)

    V: list[list[Fraction]] = [[] for _ in range(n)]
    cont: list[Fraction] = [Fraction(0)] * (n - 1)
    masks = [0] * n

    members = set(ranks)
    V[n - 1] = [Fraction(int(x in members)) for x in range(1, n + 1)]
    masks[n - 1] = (1 << n) - 1
    # sum of V_{j+1}(.) tracked so each stage costs O(|support|)
    row_sum = Fraction(len(members))

    for j in range(n - 1, 0, -1):
        c = row_sum / (j + 1)
        cont[j - 1] = c
        rewards = _stage_rewards(n, j, ranks)
        row = [c] * j
        mask = 0
        row_sum = c * (j - len(rewards))
        for x, y in rewards.items():
            if y >= c:
                mask |= 1 << (x - 1)
                row[x - 1] = y
            row_sum += row[x - 1]
        if c <= 0:
            # zero-reward ranks tie with a worthless continuation
            mask = (1 << j) - 1
        V[j - 1] = row
        masks[j - 1] = mask

    table = ValueTable(n=n, goal=goal, V=V, cont=cont, value=V[0][0])
    return table, StagePolicy(n, tuple(masks))


@lru_cache(maxsize=None)
def p_value(n: int, goal: Goal) -> Fraction:
    """Optimal success probability ``p(goal, n)``; memoized per process."""
    return solve(n, goal)[0].value


def p_kn(k: int, n: int) -> Fraction:
    """Shorthand for ``p(k, n)`` with a single-rank goal."""
    return p_value(n, SingleRank(k))
