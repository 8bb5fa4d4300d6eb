"""Selection goals and the stopping reward.

The reward for accepting candidate ``j`` with relative rank ``x`` is the
conditional probability that its absolute rank lies in the goal. Given
``X_j = x`` the absolute rank is hypergeometric:

    P(R_j = k | X_j = x) = C(k-1, x-1) C(n-k, j-x) / C(n, j)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Union

from .exact_math import binomial

__all__ = [
    "SingleRank",
    "RankSet",
    "Goal",
    "InvalidGoal",
    "Observation",
    "rank_probability",
    "reward",
    "reward_k3",
    "reward_support",
    "parse_goal",
]


class InvalidGoal(ValueError):
    """Goal references ranks outside ``1..n`` (or is empty)."""


@dataclass(frozen=True)
class SingleRank:
    k: int

    @property
    def ranks(self) -> tuple[int, ...]:
        return (self.k,)

    def validate(self, n: int) -> tuple[int, ...]:
        if not 1 <= self.k <= n:
            raise InvalidGoal(f"rank k={self.k} outside 1..{n}")
        return self.ranks

    def to_dict(self) -> dict:
        return {"kind": "single", "k": self.k}

    def __str__(self) -> str:
        return f"k={self.k}"


@dataclass(frozen=True)
class RankSet:
    ranks: tuple[int, ...]

    def __init__(self, ranks: Iterable[int]):
        normalized = tuple(sorted(set(int(r) for r in ranks)))
        if not normalized:
            raise InvalidGoal("rank set must be nonempty")
        object.__setattr__(self, "ranks", normalized)

    def validate(self, n: int) -> tuple[int, ...]:
        if self.ranks[0] < 1 or self.ranks[-1] > n:
            raise InvalidGoal(f"rank set {list(self.ranks)} not inside 1..{n}")
        return self.ranks

    def to_dict(self) -> dict:
        return {"kind": "set", "ranks": list(self.ranks)}

    def __str__(self) -> str:
        return "gamma={" + ",".join(map(str, self.ranks)) + "}"


Goal = Union[SingleRank, RankSet]


def parse_goal(data: dict) -> Goal:
    """Inverse of ``Goal.to_dict``."""
    if data.get("kind") == "single":
        return SingleRank(int(data["k"]))
    if data.get("kind") == "set":
        return RankSet(data["ranks"])
    raise InvalidGoal(f"unknown goal description: {data!r}")


class Observation(NamedTuple):
    """Relative rank ``x`` of candidate ``j`` out of ``n``."""

    n: int
    j: int
    x: int

    def check(self) -> None:
        if not 1 <= self.x <= self.j <= self.n:
            raise ValueError(f"need 1 <= x <= j <= n, got {tuple(self)}")


def rank_probability(n: int, j: int, x: int, k: int) -> Fraction:
    """P(R_j = k | X_j = x) for a uniformly random order of ``n``."""
    num = binomial(k - 1, x - 1) * binomial(n - k, j - x)
    if num == 0:
        return Fraction(0)
    return Fraction(num, binomial(n, j))


def reward(obs: Observation, goal: Goal) -> Fraction:
    """Probability that the candidate's absolute rank belongs to ``goal``."""
    obs = Observation(*obs)
    obs.check()
    ranks = goal.validate(obs.n)
    return sum(
        (rank_probability(obs.n, obs.j, obs.x, k) for k in ranks), Fraction(0)
    )


def reward_support(n: int, j: int, ranks: Iterable[int]) -> list[int]:
    """Relative ranks ``x`` at stage ``j`` whose reward can be nonzero.

    For rank ``k`` the hypergeometric term vanishes unless
    ``k - (n - j) <= x <= min(k, j)``.
    """
    xs: set[int] = set()
    for k in ranks:
        xs.update(range(max(1, k - (n - j)), min(k, j) + 1))
    return sorted(xs)


def reward_k3(n: int, j: int, x: int) -> Fraction:
    """Closed form of the reward for the third-best goal."""
    if n < 3:
        raise ValueError(f"third-best reward needs n >= 3, got n={n}")
    Observation(n, j, x).check()
    denom = n * (n - 1) * (n - 2)
    if x == 1:
        return Fraction(j * (n - j - 1) * (n - j), denom)
    if x == 2:
        return Fraction(2 * j * (j - 1) * (n - j), denom)
    if x == 3:
        return Fraction(j * (j - 1) * (j - 2), denom)
    return Fraction(0)
