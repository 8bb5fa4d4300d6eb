"""Batch checks of the structural claims about p(k, n) and the k = 3 rule.

Every check returns a :class:`Report`: a pass flag, one row per instance
(JSON-friendly scalars only) and a summary. Nothing here prints or writes.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from . import closed_form as cf
from .dp_solver import p_kn, p_value, solve
from .policy_eval import conditional_value, evaluate
from .reward import RankSet, SingleRank, reward_k3

__all__ = [
    "Report",
    "REMARK31_PAIRS",
    "verify_theorem21",
    "scan_k_monotonicity",
    "check_remark31",
    "check_theorem31",
    "check_theorem32",
    "check_gamma_extremality",
    "scan_K_ratio",
    "lemma_suite",
    "threshold_invariants",
    "h_closed_form_report",
    "convergence_report",
]

# (k, n) with 1 <= k < ceil(n/2), n <= 50 and p(k, n) < p(k+1, n)
REMARK31_PAIRS = frozenset(
    {(2, 5), (2, 7), (7, 15), (9, 19), (10, 21), (12, 25), (21, 43), (22, 47), (24, 49), (24, 50)}
)


@dataclass
class Report:
    name: str
    passed: bool
    params: dict
    rows: list[dict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def failures(self) -> list[dict]:
        return [r for r in self.rows if r.get("pass") is False]

    def to_dict(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "params": self.params,
            "summary": self.summary,
            "notes": self.notes,
            "rows": self.rows,
        }


def _q(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _ceil_half(n: int) -> int:
    return (n + 1) // 2


# --- third-best rule -------------------------------------------------------

def verify_theorem21(n_lo: int, n_hi: int) -> Report:
    """Optimality of the two-threshold rule against the exact DP, per n.

    Asserted per n: equal values; {2} in the DP stop set for a_n <= j < n and
    {3} for b_n <= j < n; strict preference for continuing at x in {1,2,3}
    wherever the rule continues.
    """
    if not 3 <= n_lo <= n_hi:
        raise ValueError(f"need 3 <= n_lo <= n_hi, got {n_lo}, {n_hi}")
    rows = []
    goal = SingleRank(3)
    for n in range(n_lo, n_hi + 1):
        t = cf.k3_thresholds(n)
        table, dp_policy = solve(n, goal)
        tau = cf.tau_policy(cf.ThirdBest(n, t.a, t.b))
        tau_val = evaluate(n, goal, tau)
        contains2 = all(dp_policy.stops(j, 2) for j in range(t.a, n))
        contains3 = all(dp_policy.stops(j, 3) for j in range(t.b, n))
        strict = True
        for j in range(1, n):
            c = table.cont[j - 1]
            if j < t.a:
                xs = (1, 2, 3)
            elif j < t.b:
                xs = (1, 3)
            else:
                xs = (1,)
            if any(reward_k3(n, j, x) >= c for x in xs if x <= j):
                strict = False
                break
        first2 = next((j for j in range(1, n) if j >= 2 and dp_policy.stops(j, 2)), None)
        first3 = next((j for j in range(1, n) if j >= 3 and dp_policy.stops(j, 3)), None)
        ok = tau_val == table.value and contains2 and contains3 and strict
        rows.append(
            {
                "n": n,
                "a": t.a,
                "b": t.b,
                "dp_value": _q(table.value),
                "dp_value_float": float(table.value),
                "tau_value_equal": tau_val == table.value,
                "contains_2": contains2,
                "contains_3": contains3,
                "strict_continuation": strict,
                "dp_first_stop_x2": first2,
                "dp_first_stop_x3": first3,
                "pass": ok,
            }
        )
    passed = all(r["pass"] for r in rows)
    return Report(
        "theorem21",
        passed,
        {"n_lo": n_lo, "n_hi": n_hi},
        rows,
        {"instances": len(rows), "failures": sum(not r["pass"] for r in rows)},
    )


def h_closed_form_report(n_lo: int, n_hi: int) -> Report:
    """Compare the closed-form h_j(x) with exact evaluation of the rule.

    Agreement is required for n >= 32; below that it is only tabulated,
    except for h_1(1) which must equal p(3, n) for every n >= 3.
    """
    rows = []
    goal = SingleRank(3)
    for n in range(max(3, n_lo), n_hi + 1):
        tau = cf.tau_for(3, n)
        mismatches = 0
        for j in range(1, n + 1):
            # h depends on x only through x == 2, x == 3, or neither
            for x in sorted({1, 2, 3, 4} & set(range(1, j + 1))):
                if cf.h_value(n, j, x) != conditional_value(n, goal, tau, j, x):
                    mismatches += 1
        h11_ok = cf.h_value(n, 1, 1) == p_kn(3, n)
        required = n >= 32
        rows.append(
            {
                "n": n,
                "mismatched_cases": mismatches,
                "h11_equals_dp": h11_ok,
                "asserted": required,
                "pass": h11_ok and (mismatches == 0 or not required),
            }
        )
    return Report(
        "h_closed_form",
        all(r["pass"] for r in rows),
        {"n_lo": n_lo, "n_hi": n_hi},
        rows,
        {"n_with_mismatch": [r["n"] for r in rows if r["mismatched_cases"]]},
    )


def _inv_sqrt_e_bounds() -> tuple[Fraction, Fraction]:
    with localcontext() as ctx:
        ctx.prec = 60
        v = 1 / Decimal(1).exp().sqrt()
    eps = Fraction(1, 10**50)
    v = Fraction(v)
    return v - eps, v + eps


def lemma_suite(n_lo: int = 32, n_hi: int = 200) -> Report:
    """Exact check of every inequality the optimality proof relies on.

    Uses the closed forms for h; ``avg`` below is mean(h_{j+1}(1..j+1)).
    """
    if n_lo < 32:
        raise ValueError("the lemma inequalities are claimed for n >= 32")
    lo_ise, hi_ise = _inv_sqrt_e_bounds()
    rows = []
    for n in range(n_lo, n_hi + 1):
        t = cf.k3_thresholds(n)
        a, b, u = t.a, t.b, t.u
        y = lambda j, x: reward_k3(n, j, x)  # noqa: E731
        checks: dict[str, bool] = {}

        # threshold placement and the bounds on b_n, u_n
        checks["a_lt_b"] = a < b
        checks["b_below_larger_root"] = t.f(b) < 0
        checks["a_gt_(n+4)/3"] = 3 * a > n + 4
        checks["eq41_lower"] = (n - 1) * hi_ise + 1 < b
        checks["eq41_upper"] = b < (n - Fraction(3, 2)) * lo_ise + Fraction(5, 2)
        checks["eq42"] = Fraction(n + 5, 2) < b < Fraction(2 * n - 1, 3)
        checks["eq45"] = (b - 2) * (n - 2) < u <= b * (n - 2)

        avg = [cf.h_average(n, j) for j in range(1, n)]
        # stage average agrees with the pointwise h
        # h_{j+1}(i) takes one value for all i outside {2, 3}
        def mean_h(j: int) -> Fraction:
            m = j + 1
            special = [i for i in (2, 3) if i <= m]
            total = sum((cf.h_value(n, m, i) for i in special), Fraction(0))
            return (total + (m - len(special)) * cf.h_value(n, m, 1)) / m

        checks["lemma22_average"] = all(mean_h(j) == avg[j - 1] for j in range(1, n))

        checks["lemma23"] = all(
            y(j, x) < avg[j - 1] for j in range(1, a) for x in range(1, min(j, 3) + 1)
        ) and all(avg[j - 1] > 0 for j in range(1, a))
        checks["lemma24_i"] = all(y(j, 2) >= avg[j - 1] for j in range(a, b))
        checks["lemma24_ii"] = all(y(j, 1) < avg[j - 1] for j in range(a, b))
        checks["lemma24_iii"] = all(y(j, 3) < avg[j - 1] for j in range(a, b))
        checks["lemma25_i"] = all(y(j, 1) < avg[j - 1] for j in range(b, n))
        checks["lemma25_ii"] = all(y(j, 2) >= avg[j - 1] for j in range(b, n))
        checks["lemma25_iii"] = all(y(j, 3) >= avg[j - 1] for j in range(b, n))

        # h_j(x) = max(y_j(x), avg_j) for 1 <= j < n
        checks["h_recursion"] = all(
            cf.h_value(n, j, x) == max(y(j, x), avg[j - 1])
            for j in range(1, n)
            for x in range(1, min(j, 4) + 1)
        )
        row = {"n": n, "a": a, "b": b, **checks, "pass": all(checks.values())}
        rows.append(row)
    failed = sorted({k for r in rows for k, v in r.items() if v is False and k != "pass"})
    return Report(
        "lemmas",
        all(r["pass"] for r in rows),
        {"n_lo": n_lo, "n_hi": n_hi},
        rows,
        {"failed_checks": failed},
    )


def threshold_invariants(n_lo: int = 3, n_hi: int = 2000) -> Report:
    """Bracketing and staircase properties of (a_n, b_n) for every n in range."""
    rows = []
    prev = None
    half = Fraction(1, 2)
    for n in range(max(3, n_lo), n_hi + 1):
        t = cf.k3_thresholds(n)
        tail_b1 = cf.harmonic_shift_sum(t.b + 1, n, 2)
        tail_b = tail_b1 + Fraction(1, t.b - 2)
        checks = {
            "f_bracket": t.f(t.a) <= 0 < t.f(t.a - 1),
            "b_bracket": tail_b1 <= half < tail_b,
            "a_lt_b": t.a < t.b,
            "b_ge_3": t.b >= 3,
            "a_ge_2": t.a >= 2,
        }
        if prev is not None:
            checks["staircase_a"] = prev.a <= t.a <= prev.a + 1
            checks["staircase_b"] = prev.b <= t.b <= prev.b + 1
        prev = t
        rows.append({"n": n, "a": t.a, "b": t.b, "u": _q(t.u), **checks, "pass": all(checks.values())})
    return Report(
        "threshold_invariants",
        all(r["pass"] for r in rows),
        {"n_lo": n_lo, "n_hi": n_hi},
        rows,
        {"failures": [r["n"] for r in rows if not r["pass"]]},
    )


# --- p(k, n) inequalities ----------------------------------------------------

def scan_k_monotonicity(n_max: int) -> set[tuple[int, int]]:
    """All (k, n) with 1 <= k < ceil(n/2), n <= n_max and p(k,n) < p(k+1,n)."""
    out = set()
    for n in range(2, n_max + 1):
        for k in range(1, _ceil_half(n)):
            if p_kn(k, n) < p_kn(k + 1, n):
                out.add((k, n))
    return out


def check_remark31(n_max: int = 50) -> Report:
    """Counterexample set against the published list, plus p(2,n) > p(3,n) for n >= 8."""
    found = scan_k_monotonicity(n_max)
    expected = {p for p in REMARK31_PAIRS if p[1] <= n_max}
    within = {p for p in found if p[1] <= 50}
    rows = [{"k": k, "n": n, "listed": (k, n) in REMARK31_PAIRS} for k, n in sorted(found, key=lambda p: (p[1], p[0]))]
    second_vs_third = [n for n in range(8, n_max + 1) if not p_kn(2, n) > p_kn(3, n)]
    passed = within == expected and not second_vs_third
    return Report(
        "remark31",
        passed,
        {"n_max": n_max},
        rows,
        {
            "violations": len(found),
            "missing_from_scan": sorted(expected - within),
            "unexpected_in_scan": sorted(within - expected),
            "p2_not_above_p3": second_vs_third,
        },
    )


def check_theorem31(n_max: int, n_min: int = 3) -> Report:
    """p(1,n) = p(n,n) > p(k,n) for 1 < k < n, and p(k,n) = p(n-k+1,n)."""
    rows = []
    for n in range(n_min, n_max + 1):
        best = p_kn(1, n)
        strict = all(best > p_kn(k, n) for k in range(2, n))
        symmetric = all(p_kn(k, n) == p_kn(n - k + 1, n) for k in range(1, n + 1))
        rows.append({"n": n, "p1": _q(best), "strict_max": strict, "symmetric": symmetric, "pass": strict and symmetric})
    return Report(
        "theorem31",
        all(r["pass"] for r in rows),
        {"n_min": n_min, "n_max": n_max},
        rows,
        {"failures": [r["n"] for r in rows if not r["pass"]]},
    )


def check_theorem32(n_max: int, n_min: int = 3) -> Report:
    """p(k,n) >= p(k,n+1) and p(k,n) >= p(k+1,n+1) for 1 <= k <= n.

    Strictness is conjectured, not proved; it is counted but not asserted.
    """
    rows = []
    ties = 0
    for n in range(n_min, n_max + 1):
        dec_n = [p_kn(k, n) >= p_kn(k, n + 1) for k in range(1, n + 1)]
        dec_diag = [p_kn(k, n) >= p_kn(k + 1, n + 1) for k in range(1, n + 1)]
        eq = sum(p_kn(k, n) == p_kn(k, n + 1) for k in range(1, n + 1))
        eq += sum(p_kn(k, n) == p_kn(k + 1, n + 1) for k in range(1, n + 1))
        ties += eq
        ok = all(dec_n) and all(dec_diag)
        rows.append({"n": n, "decreasing_in_n": all(dec_n), "diagonal": all(dec_diag), "equalities": eq, "pass": ok})
    return Report(
        "theorem32",
        all(r["pass"] for r in rows),
        {"n_min": n_min, "n_max": n_max},
        rows,
        {"failures": [r["n"] for r in rows if not r["pass"]], "observed_equalities": ties},
        ["strictness is reported only"],
    )


def check_gamma_extremality(
    n: int, c: int, budget: int = 100_000, sample: int = 0, seed: int = 0
) -> Report:
    """max over |Gamma| = c of p(Gamma, n) is attained at {1..c} and {n-c+1..n}.

    Exhaustive when C(n, c) <= budget. Otherwise ``sample`` random subsets
    are checked (the two extremal sets always included), or ValueError.
    """
    if not 1 <= c < n:
        raise ValueError(f"need 1 <= c < n, got c={c}, n={n}")
    low = tuple(range(1, c + 1))
    high = tuple(range(n - c + 1, n + 1))
    total = math.comb(n, c)
    if total <= budget:
        subsets: Iterable[tuple[int, ...]] = combinations(range(1, n + 1), c)
        exhaustive = True
    elif sample > 0:
        rng = random.Random(seed)
        picked = {low, high}
        while len(picked) < min(sample + 2, total):
            picked.add(tuple(sorted(rng.sample(range(1, n + 1), c))))
        subsets = sorted(picked)
        exhaustive = False
    else:
        raise ValueError(f"C({n},{c}) = {total} subsets exceeds budget {budget}")

    values = {g: p_value(n, RankSet(g)) for g in subsets}
    best = max(values.values())
    maximizers = sorted(g for g, v in values.items() if v == best)
    ok = values[low] == values[high] == best
    rows = [
        {"gamma": list(g), "value": _q(v), "value_float": float(v), "maximizer": v == best}
        for g, v in sorted(values.items())
    ]
    return Report(
        "theorem33",
        ok,
        {"n": n, "c": c, "exhaustive": exhaustive},
        rows,
        {
            "subsets_checked": len(values),
            "max_value": _q(best),
            "maximizers": [list(g) for g in maximizers],
            "extremal_equal": values[low] == values[high],
        },
    )


def scan_K_ratio(n_max: int, n_min: int = 2) -> Report:
    """K(n): length of the longest non-increasing prefix p(1,n) >= p(2,n) >= ..., capped at ceil(n/2)."""
    rows = []
    for n in range(n_min, n_max + 1):
        K = 1
        while K < _ceil_half(n) and p_kn(K, n) >= p_kn(K + 1, n):
            K += 1
        rows.append({"n": n, "K": K, "K_over_n": K / n})
    return Report("K_ratio", True, {"n_min": n_min, "n_max": n_max}, rows, notes=["tabulation only"])


# --- limits ---------------------------------------------------------------

def _float_thresholds(n: int) -> tuple[int, int, float, float, float]:
    """Float fast path for very large n: (a, b, p1, p2, p3). Not exact."""
    tail, j = 0.0, n
    while j > 1 and tail + 1 / (j - 1) <= 1:
        tail += 1 / (j - 1)
        j -= 1
    r = j
    p1 = (r - 1) / n * sum(1 / (i - 1) for i in range(r, n + 1)) if r > 1 else 1 / n
    tail, b = 0.0, n
    while b > 2 and tail + 1 / (b - 2) <= 0.5:
        tail += 1 / (b - 2)
        b -= 1
    u = (b - 2) * (2 * n - 4) * math.fsum(1 / (i - 2) for i in range(b, n + 1))
    const = (n - 2) * b + 2 * (n + 1) + u
    a = next(x for x in range(2, n + 1) if 3 * x * x - (1 + 4 * n) * x + const <= 0)
    p3 = (a - 1) * (a * a - (1 + 2 * n) * a + const) / (n * (n - 1) * (n - 2))
    return a, b, p1, float(cf.p2(n)), p3


def _bounds(d: Decimal, digits: int) -> tuple[Fraction, Fraction]:
    eps = Fraction(1, 10 ** (digits - 3))
    return Fraction(d) - eps, Fraction(d) + eps


def convergence_report(n_points: Iterable[int], nmax_exact: int = 2000) -> Report:
    """a_n/n, b_n/n, p1, p2, p3 at each n against their limits.

    Asserted (exact rows only): p1 > 1/e, p2 >= 1/4, p3 > p(3, inf), from the
    monotone decrease of p(k, n) in n. The 2/sqrt(n) closeness of the
    threshold ratios is an empirical guard, flagged as heuristic.
    """
    digits = 40
    const = cf.asymptotic_constants(digits)
    with localcontext() as ctx:
        ctx.prec = digits + 10
        inv_e = +(Decimal(-1).exp())
    inv_e_lo, inv_e_hi = _bounds(inv_e, digits)
    p3_lo, p3_hi = _bounds(const.p3_inf, digits)
    d1, d2 = float(const.d1), float(const.d2)
    rows = []
    for n in n_points:
        if n < 3:
            raise ValueError(f"convergence points need n >= 3, got {n}")
        exact = n <= nmax_exact
        if exact:
            t = cf.k3_thresholds(n)
            a, b = t.a, t.b
            q1, q2, q3 = cf.p1(n), cf.p2(n), cf.p3(n)
            checks = {
                "p1_above_limit": q1 > inv_e_hi,
                "p2_at_least_limit": q2 >= Fraction(1, 4),
                "p3_above_limit": q3 > p3_hi,
            }
            f1, f2, f3 = float(q1), float(q2), float(q3)
        else:
            a, b, f1, f2, f3 = _float_thresholds(n)
            checks = {}
        guard = 2 / math.sqrt(n)
        rows.append(
            {
                "n": n,
                "exact": exact,
                "a": a,
                "b": b,
                "a_over_n": a / n,
                "b_over_n": b / n,
                "p1": f1,
                "p2": f2,
                "p3": f3,
                "a_gap": a / n - d1,
                "b_gap": b / n - d2,
                "p1_gap": f1 - float(inv_e),
                "p2_gap": f2 - 0.25,
                "p3_gap": f3 - float(const.p3_inf),
                "heuristic_ratio_guard": abs(a / n - d1) < guard and abs(b / n - d2) < guard,
                **checks,
                "pass": all(checks.values()),
            }
        )
    return Report(
        "convergence",
        all(r["pass"] for r in rows),
        {"n_points": [r["n"] for r in rows], "nmax_exact": nmax_exact},
        rows,
        {"d1": str(const.d1), "d2": str(const.d2), "p3_inf": str(const.p3_inf), "inv_e": str(inv_e)},
        ["heuristic_ratio_guard is an empirical bound, not a proved one; inexact rows use floats"],
    )
