"""Exact arithmetic helpers: rationals, binomials, shifted harmonic sums.

All probabilities in this package are ``fractions.Fraction`` values, so
equality checks between formulas are exact.
"""

from __future__ import annotations

from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from math import comb

Rational = Fraction

__all__ = [
    "Rational",
    "binomial",
    "harmonic_shift_sum",
    "chu_vandermonde_lhs",
    "chu_vandermonde_rhs",
    "decimal_str",
]


@lru_cache(maxsize=1 << 16)
def binomial(m: int, l: int) -> int:
    """Binomial coefficient extended to all integers.

    Zero whenever ``m < l``, ``m < 0`` or ``l < 0``; ``binomial(0, 0) == 1``.
    With this convention Pascal's rule holds everywhere except at (0, 0),
    where only the inequality ``C(0,0) >= C(-1,0) + C(-1,-1)`` survives.
    """
    if m < 0 or l < 0 or m < l:
        return 0
    return comb(m, l)


def harmonic_shift_sum(lo: int, hi: int, shift: int) -> Fraction:
    """Exact ``sum(1/(i - shift) for i in lo..hi)``; empty ranges give 0."""
    total = Fraction(0)
    for i in range(lo, hi + 1):
        if i == shift:
            raise ZeroDivisionError(
                f"harmonic_shift_sum: term i={i} equals shift {shift}"
            )
        total += Fraction(1, i - shift)
    return total


def chu_vandermonde_lhs(c: int, d: int, n: int, j: int) -> int:
    """``sum_{i=d+1}^{c} C(c-1, i-1) C(n-c+1, j-i)``."""
    return sum(
        binomial(c - 1, i - 1) * binomial(n - c + 1, j - i)
        for i in range(d + 1, c + 1)
    )


def chu_vandermonde_rhs(c: int, d: int, n: int, j: int) -> int:
    """``sum_{l=d}^{c-1} C(l-1, d-1) C(n-l, j-d-1)``.

    Counts (j-1)-subsets of {1..n} whose d-th smallest element is below c,
    grouped by the value of that element; equals the left-hand side.
    """
    return sum(
        binomial(l - 1, d - 1) * binomial(n - l, j - d - 1)
        for l in range(d, c)
    )


def decimal_str(value: Fraction, digits: int = 15) -> str:
    """Render a rational with ``digits`` significant digits."""
    value = Fraction(value)
    with localcontext() as ctx:
        ctx.prec = digits + 10
        dec = Decimal(value.numerator) / Decimal(value.denominator)
        return format(dec, f".{digits}g")
