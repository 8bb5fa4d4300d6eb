"""Explicit threshold rules and optimal values for k = 1, 2, 3.

Best choice (k=1): accept the first relative best from stage ``r_n`` on.
Second best (k=2): accept the first relative second-best from ``r'_n`` on.
Third best (k=3): accept relative rank 2 from stage ``a_n`` on and relative
rank 3 from stage ``b_n`` on, with ``a_n < b_n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .dp_solver import StagePolicy
from .exact_math import harmonic_shift_sum
from .reward import reward_k3

__all__ = [
    "K3Thresholds",
    "BestChoice",
    "Postdoc",
    "ThirdBest",
    "ThresholdPolicy",
    "r_threshold",
    "p1",
    "rprime_threshold",
    "p2",
    "k3_thresholds",
    "f_value",
    "h_value",
    "h_average",
    "p3",
    "tau_policy",
    "tau_for",
    "AsymptoticConstants",
    "asymptotic_constants",
]


def _need(n: int, lo: int) -> None:
    if n < lo:
        raise ValueError(f"n must be >= {lo}, got {n}")


# --- k = 1 -----------------------------------------------------------------

@lru_cache(maxsize=None)
def r_threshold(n: int) -> int:
    """``min{j >= 1 : sum_{i=j+1}^n 1/(i-1) <= 1}``."""
    _need(n, 2)
    # tail sums grow as j decreases, so scan downward from n
    tail = Fraction(0)
    j = n
    while j > 1:
        nxt = tail + Fraction(1, j - 1)
        if nxt > 1:
            break
        tail = nxt
        j -= 1
    return j


def p1(n: int) -> Fraction:
    _need(n, 2)
    r = r_threshold(n)
    if r == 1:
        # only n = 2: the rule stops at once, and (r-1)/(r-1) is read as 1
        return Fraction(1, n)
    return Fraction(r - 1, n) * harmonic_shift_sum(r, n, 1)


# --- k = 2 -----------------------------------------------------------------

def rprime_threshold(n: int) -> int:
    """Smallest integer not less than (n+1)/2."""
    _need(n, 2)
    return (n + 2) // 2


def p2(n: int) -> Fraction:
    _need(n, 2)
    r = rprime_threshold(n)
    return Fraction((r - 1) * (n - r + 1), n * (n - 1))


# --- k = 3 -----------------------------------------------------------------

@dataclass(frozen=True)
class K3Thresholds:
    n: int
    a: int
    b: int
    u: Fraction

    @property
    def f_coeffs(self) -> tuple[int, int, Fraction]:
        """Coefficients of ``f_n(x) = 3x^2 - (1+4n)x + c``."""
        n = self.n
        return 3, -(1 + 4 * n), (n - 2) * self.b + 2 * (n + 1) + self.u

    def f(self, x) -> Fraction:
        q, l, c = self.f_coeffs
        return q * x * x + l * x + c


@lru_cache(maxsize=None)
def k3_thresholds(n: int) -> K3Thresholds:
    _need(n, 3)
    # b_n: first j in 2..n with sum_{i=j+1}^n 1/(i-2) <= 1/2; the tail sum
    # increases as j decreases so the admissible j form a suffix.
    half = Fraction(1, 2)
    tail = Fraction(0)
    b = n
    while b > 2:
        nxt = tail + Fraction(1, b - 2)
        if nxt > half:
            break
        tail = nxt
        b -= 1
    u = (b - 2) * (2 * n - 4) * harmonic_shift_sum(b, n, 2)
    partial = K3Thresholds(n=n, a=0, b=b, u=u)
    for a in range(2, n + 1):
        if partial.f(a) <= 0:
            break
    else:
        raise ArithmeticError(f"f_n has no nonpositive integer point for n={n}")
    return K3Thresholds(n=n, a=a, b=b, u=u)


def f_value(n: int, x) -> Fraction:
    """``f_n(x)`` evaluated exactly."""
    return k3_thresholds(n).f(Fraction(x))


def _c_n(t: K3Thresholds) -> Fraction:
    n, a, b, u = t.n, t.a, t.b, t.u
    return (a - 1) * (a * a - (1 + 2 * n) * a + (n - 2) * b + 2 * (n + 1) + u) / Fraction(
        n * (n - 1) * (n - 2)
    )


def _middle(t: K3Thresholds, j: int) -> Fraction:
    n = t.n
    return j * (j * j + (1 - 2 * n) * j + (n - 2) * t.b + 2 + t.u) / Fraction(
        n * (n - 1) * (n - 2)
    )


def _late(t: K3Thresholds, j: int) -> Fraction:
    n = t.n
    bracket = (2 * n - 4) * harmonic_shift_sum(j + 1, n, 2) - (n - j)
    return j * (j - 1) * bracket / Fraction(n * (n - 1) * (n - 2))


def h_value(n: int, j: int, x: int) -> Fraction:
    """Closed-form success probability of the third-best rule from stage ``j``.

    Five cases on the position of ``j`` relative to ``a_n``, ``b_n`` and on
    whether the rule would stop at ``x``.
    """
    _need(n, 3)
    if not 1 <= x <= j <= n:
        raise ValueError(f"need 1 <= x <= j <= n, got (j={j}, x={x}, n={n})")
    t = k3_thresholds(n)
    if j < t.a:
        return _c_n(t)
    if x == 2:
        return reward_k3(n, j, 2)
    if j < t.b:
        return _middle(t, j)
    if x == 3:
        return reward_k3(n, j, 3)
    return _late(t, j)


def h_average(n: int, j: int) -> Fraction:
    """Closed form of ``mean(h_{j+1}(1..j+1))`` for ``1 <= j <= n-1``."""
    _need(n, 3)
    if not 1 <= j <= n - 1:
        raise ValueError(f"need 1 <= j <= n-1, got j={j}, n={n}")
    t = k3_thresholds(n)
    if j < t.a:
        return _c_n(t)
    if j < t.b:
        return _middle(t, j)
    return _late(t, j)


def p3(n: int) -> Fraction:
    return h_value(n, 1, 1)


# --- threshold policies ----------------------------------------------------

@dataclass(frozen=True)
class BestChoice:
    n: int
    r: int


@dataclass(frozen=True)
class Postdoc:
    n: int
    r: int


@dataclass(frozen=True)
class ThirdBest:
    n: int
    a: int
    b: int


ThresholdPolicy = Union[BestChoice, Postdoc, ThirdBest]


def tau_policy(desc: ThresholdPolicy) -> StagePolicy:
    """Compile a threshold rule into per-stage acceptance sets."""
    n = desc.n
    full = (1 << n) - 1
    if isinstance(desc, ThirdBest):
        if not 1 <= desc.a < desc.b <= n:
            raise ValueError(f"third-best thresholds need 1 <= a < b <= n: {desc}")
        masks = []
        for j in range(1, n):
            mask = 0
            if j >= desc.a and j >= 2:
                mask |= 0b10
            if j >= desc.b and j >= 3:
                mask |= 0b100
            masks.append(mask)
        return StagePolicy(n, tuple(masks) + (full,))
    if isinstance(desc, (BestChoice, Postdoc)):
        if not 1 <= desc.r <= n:
            raise ValueError(f"threshold must lie in 1..n: {desc}")
        bit = 0b1 if isinstance(desc, BestChoice) else 0b10
        masks = [
            bit if j >= desc.r and bit >> j == 0 else 0 for j in range(1, n)
        ]
        return StagePolicy(n, tuple(masks) + (full,))
    raise TypeError(f"unknown threshold policy {desc!r}")


def tau_for(k: int, n: int) -> StagePolicy:
    """The optimal threshold rule for ``k`` in {1, 2, 3}."""
    if k == 1:
        return tau_policy(BestChoice(n, r_threshold(n)))
    if k == 2:
        return tau_policy(Postdoc(n, rprime_threshold(n)))
    if k == 3:
        t = k3_thresholds(n)
        return tau_policy(ThirdBest(n, t.a, t.b))
    raise ValueError(f"closed-form rules exist only for k in 1..3, got {k}")


# --- limits ----------------------------------------------------------------

@dataclass(frozen=True)
class AsymptoticConstants:
    d1: Decimal
    d2: Decimal
    p3_inf: Decimal


def asymptotic_constants(digits: int = 40) -> AsymptoticConstants:
    """Limits of ``a_n/n``, ``b_n/n`` and ``p(3, n)``."""
    with localcontext() as ctx:
        ctx.prec = digits + 10
        e = Decimal(1).exp()
        root_e = e.sqrt()
        d1 = 2 / (2 * root_e + (4 * e - 6 * root_e).sqrt())
        d2 = 1 / root_e
        p3_inf = 2 * d1 * d1 * (1 - d1)
        ctx.prec = digits
        return AsymptoticConstants(+d1, +d2, +p3_inf)
