import json
import math

import pytest

from kthstop import analysis
from kthstop.closed_form import p1
from kthstop.dp_solver import p_kn


def test_verify_theorem21_small_range():
    report = analysis.verify_theorem21(3, 31)
    assert report.passed, report.failures()
    assert len(report.rows) == 29


def test_verify_theorem21_n13():
    (row,) = analysis.verify_theorem21(13, 13).rows
    assert (row["a"], row["b"]) == (7, 9)
    assert row["dp_first_stop_x2"] == 7
    assert row["dp_first_stop_x3"] == 9


def test_theorem21_rejects_bad_range():
    with pytest.raises(ValueError):
        analysis.verify_theorem21(2, 5)


def test_k_monotonicity_small():
    assert analysis.scan_k_monotonicity(4) == set()
    assert analysis.scan_k_monotonicity(7) == {(2, 5), (2, 7)}


def test_scan_independent_of_order():
    forward = analysis.scan_k_monotonicity(25)
    pairs = {(k, n) for n in range(25, 1, -1) for k in range((n + 1) // 2 - 1, 0, -1) if p_kn(k, n) < p_kn(k + 1, n)}
    assert forward == pairs


def test_remark31_report():
    report = analysis.check_remark31(50)
    assert report.passed
    assert report.summary["violations"] == 10


def test_rank_ordering_sweeps():
    assert analysis.check_theorem31(30).passed
    r = analysis.check_theorem32(30)
    assert r.passed
    assert "observed_equalities" in r.summary


def test_second_beats_third_from_8():
    for n in range(8, 201):
        assert p_kn(2, n) > p_kn(3, n)


def test_best_decreases_to_inverse_e():
    assert 0 < float(p1(2000)) - 1 / math.e < 1e-3


@pytest.mark.parametrize("n, c, maximizers", [(4, 2, [[1, 2], [3, 4]]), (10, 3, [[1, 2, 3], [8, 9, 10]])])
def test_gamma_extremality(n, c, maximizers):
    r = analysis.check_gamma_extremality(n, c)
    assert r.passed
    assert r.summary["maximizers"] == maximizers


def test_gamma_boundary():
    r = analysis.check_gamma_extremality(6, 5)
    assert r.passed
    assert all(row["value_float"] < 1 for row in r.rows)


def test_gamma_budget():
    with pytest.raises(ValueError):
        analysis.check_gamma_extremality(30, 10, budget=1000)
    r = analysis.check_gamma_extremality(16, 8, budget=100, sample=20, seed=1)
    assert r.params["exhaustive"] is False
    assert r.passed


def test_K_ratio():
    rows = {r["n"]: r["K"] for r in analysis.scan_K_ratio(20).rows}
    assert rows[4] == 2
    assert rows[5] == 2
    assert rows[15] <= 7


def test_convergence_report():
    r = analysis.convergence_report([100, 2000])
    assert r.passed
    last = r.rows[-1]
    assert abs(last["b_over_n"] - 0.6065) < 0.01
    assert abs(last["p3"] - 0.2321) < 0.01
    assert last["p3_gap"] > 0
    assert all(row["heuristic_ratio_guard"] for row in r.rows)


def test_convergence_float_path():
    exact = analysis.convergence_report([500], nmax_exact=2000).rows[0]
    fast = analysis.convergence_report([500], nmax_exact=100).rows[0]
    assert fast["exact"] is False
    assert (fast["a"], fast["b"]) == (exact["a"], exact["b"])
    assert fast["p3"] == pytest.approx(exact["p3"], rel=1e-12)
    assert fast["p1"] == pytest.approx(exact["p1"], rel=1e-12)


def test_lemma_suite_range_guard():
    with pytest.raises(ValueError):
        analysis.lemma_suite(31, 40)


def test_lemma_suite_small():
    assert analysis.lemma_suite(32, 60).passed


def test_h_closed_form_below_32():
    r = analysis.h_closed_form_report(3, 45)
    assert r.passed
    assert r.summary["n_with_mismatch"] == []


def test_threshold_invariants_small():
    assert analysis.threshold_invariants(3, 300).passed


def test_reports_serialize():
    for r in (analysis.verify_theorem21(3, 5), analysis.check_gamma_extremality(4, 2), analysis.scan_K_ratio(6)):
        json.dumps(r.to_dict())
