"""Command-line interface.

Usage:
    kthstop solve -n 13 --k 3
    kthstop solve -n 5 --gamma 1,2
    kthstop thresholds -n 100
    kthstop simulate -n 100 --k 3 --policy tau3 --trials 1000000 --seed 42
    kthstop verify remark31 --nmax 50
    kthstop verify theorem21 --from 3 --to 100
    kthstop export pkn --nmax 20 --format csv -o pkn.csv

Exit codes: 0 ok, 1 verification failed, 2 usage error, 3 domain error,
4 unreadable input file, 5 unwritable output path.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import analysis
from . import closed_form as cf
from .dp_solver import StagePolicy, p_kn, solve
from .exact_math import decimal_str
from .reward import Goal, InvalidGoal, RankSet, SingleRank
from .simulator import simulate

SCHEMA = "kthstop/1"

EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN, EXIT_INPUT, EXIT_OUTPUT = 1, 2, 3, 4, 5


def rational_json(x: Fraction) -> dict:
    return {"num": str(x.numerator), "den": str(x.denominator), "decimal": decimal_str(x), "float": float(x)}


def rational_from_json(d: dict) -> Fraction:
    return Fraction(int(d["num"]), int(d["den"]))


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _goal(k: int | None, gamma: str | None) -> Goal:
    if (k is None) == (gamma is None):
        raise click.UsageError("give exactly one of --k or --gamma")
    if k is not None:
        return SingleRank(k)
    try:
        return RankSet(int(s) for s in gamma.split(",") if s.strip())
    except ValueError as exc:
        raise click.UsageError(f"bad --gamma list {gamma!r}: {exc}") from exc


def _emit(payload: dict) -> None:
    click.echo(json.dumps(payload, indent=2))


def _csv_text(rows: list[dict]) -> str:
    columns: list[str] = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in row.items()})
    return buf.getvalue()


def _write(path: Path, text: str) -> None:
    try:
        path.write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        _fail(EXIT_OUTPUT, f"cannot write {path}: {exc}")


@click.group()
def main():
    """Exact solver and checks for selecting the k-th best of n candidates."""


@main.command("solve")
@click.option("-n", "n", type=int, required=True)
@click.option("--k", "k", type=int, default=None, help="target absolute rank")
@click.option("--gamma", default=None, help="comma-separated target rank set")
def cmd_solve(n, k, gamma):
    """Optimal value and stop sets by backward induction."""
    goal = _goal(k, gamma)
    if n < 1:
        _fail(EXIT_DOMAIN, "n must be >= 1")
    try:
        table, policy = solve(n, goal)
    except InvalidGoal as exc:
        _fail(EXIT_DOMAIN, str(exc))
    _emit(
        {
            "schema": SCHEMA,
            "n": n,
            "goal": goal.to_dict(),
            "value": rational_json(table.value),
            "policy": {"n": n, "accept": policy.as_lists()},
        }
    )


@main.command("thresholds")
@click.option("-n", "n", type=int, required=True)
def cmd_thresholds(n):
    """Closed-form thresholds and optimal values for k = 1, 2, 3."""
    if n < 3:
        _fail(EXIT_DOMAIN, "thresholds need n >= 3")
    t = cf.k3_thresholds(n)
    _emit(
        {
            "schema": SCHEMA,
            "n": n,
            "r": cf.r_threshold(n),
            "rprime": cf.rprime_threshold(n),
            "a": t.a,
            "b": t.b,
            "u": rational_json(t.u),
            "p1": rational_json(cf.p1(n)),
            "p2": rational_json(cf.p2(n)),
            "p3": rational_json(cf.p3(n)),
        }
    )


def load_policy(path: str) -> StagePolicy:
    """Read ``{"n": ..., "accept": [[...], ...]}`` (1-based stages and ranks)."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        n, accept = int(data["n"]), data["accept"]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        _fail(EXIT_INPUT, f"cannot read policy file {path}: {exc}")
    try:
        return StagePolicy.from_sets(n, accept)
    except ValueError as exc:
        _fail(EXIT_DOMAIN, f"invalid policy in {path}: {exc}")


def _builtin_policy(name: str, n: int) -> StagePolicy:
    if name == "stop-at-n":
        return StagePolicy.stop_at_n(n)
    k = {"tau1": 1, "tau2": 2, "tau3": 3}[name]
    return cf.tau_for(k, n)


@main.command("simulate")
@click.option("-n", "n", type=int, required=True)
@click.option("--k", "k", type=int, default=None)
@click.option("--gamma", default=None)
@click.option("--policy", "policy_spec", required=True, help="tau1|tau2|tau3|stop-at-n or a policy JSON file")
@click.option("--trials", type=int, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--workers", type=int, default=1, show_default=True)
def cmd_simulate(n, k, gamma, policy_spec, trials, seed, workers):
    """Seeded Monte Carlo estimate of a policy's success probability."""
    goal = _goal(k, gamma)
    if trials < 1:
        raise click.UsageError("empty simulation")
    if n < 1:
        _fail(EXIT_DOMAIN, "n must be >= 1")
    try:
        goal.validate(n)
    except InvalidGoal as exc:
        _fail(EXIT_DOMAIN, str(exc))
    if policy_spec in ("tau1", "tau2", "tau3", "stop-at-n"):
        try:
            policy = _builtin_policy(policy_spec, n)
        except ValueError as exc:
            _fail(EXIT_DOMAIN, str(exc))
    else:
        policy = load_policy(policy_spec)
        if policy.n != n:
            _fail(EXIT_DOMAIN, f"policy file is for n={policy.n}, not {n}")
    report = simulate(n, goal, policy, trials, seed, workers=workers)
    _emit({"schema": SCHEMA, "policy": policy_spec, **report.to_dict()})


SUITES = ("theorem21", "theorem31", "theorem32", "remark31", "theorem33", "lemmas", "convergence")


def _run_suite(suite, n_from, n_to, nmax, n, c, points, fmax, nmax_exact) -> list[analysis.Report]:
    if suite == "theorem21":
        return [analysis.verify_theorem21(n_from or 3, n_to or 31)]
    if suite == "theorem31":
        return [analysis.check_theorem31(nmax or 30)]
    if suite == "theorem32":
        return [analysis.check_theorem32(nmax or 30)]
    if suite == "remark31":
        return [analysis.check_remark31(nmax or 50), analysis.scan_K_ratio(nmax or 50)]
    if suite == "theorem33":
        sizes = [n] if n else list(range(2, 11))
        return [
            analysis.check_gamma_extremality(m, cc)
            for m in sizes
            for cc in ([c] if c else range(1, m))
        ]
    if suite == "lemmas":
        return [
            analysis.lemma_suite(n_from or 32, n_to or 200),
            analysis.threshold_invariants(3, fmax or 2000),
            analysis.h_closed_form_report(3, min(n_to or 200, 60)),
        ]
    if suite == "convergence":
        pts = [int(s) for s in points.split(",")] if points else [100, 1000, 2000]
        return [analysis.convergence_report(pts, nmax_exact)]
    raise click.UsageError(f"unknown suite {suite}")


@main.command("verify")
@click.argument("suite", type=click.Choice(SUITES))
@click.option("--from", "n_from", type=int, default=None)
@click.option("--to", "n_to", type=int, default=None)
@click.option("--nmax", type=int, default=None)
@click.option("-n", "n", type=int, default=None)
@click.option("-c", "c", type=int, default=None)
@click.option("--points", default=None, help="comma-separated n values (convergence)")
@click.option("--fmax", type=int, default=None, help="upper n for threshold bracketing (lemmas)")
@click.option("--nmax-exact", type=int, default=2000, envvar="KTHSTOP_NMAX_EXACT", show_default=True)
@click.option("-o", "--out", "out", default=None, help="report path prefix (writes .json and .csv)")
def cmd_verify(suite, n_from, n_to, nmax, n, c, points, fmax, nmax_exact, out):
    """Run a verification suite; exit 0 iff every check passes."""
    try:
        reports = _run_suite(suite, n_from, n_to, nmax, n, c, points, fmax, nmax_exact)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    passed = all(r.passed for r in reports)
    payload = {"schema": SCHEMA, "suite": suite, "passed": passed, "reports": [r.to_dict() for r in reports]}
    prefix = Path(out or f"kthstop_{suite}")
    _write(prefix.with_suffix(".json"), json.dumps(payload, indent=2) + "\n")
    rows = [{"report": r.name, **row} for r in reports for row in r.rows]
    _write(prefix.with_suffix(".csv"), _csv_text(rows))
    summary = {"schema": SCHEMA, "suite": suite, "passed": passed, "summaries": [{r.name: r.summary} for r in reports]}
    _emit(summary)
    sys.exit(0 if passed else EXIT_FAIL)


def _pkn_rows(nmax: int) -> list[dict]:
    rows = []
    for n in range(1, nmax + 1):
        for k in range(1, n + 1):
            p = p_kn(k, n)
            rows.append({"n": n, "k": k, "p_num": str(p.numerator), "p_den": str(p.denominator), "p_decimal": decimal_str(p)})
    return rows


def _threshold_rows(lo: int, hi: int) -> list[dict]:
    rows = []
    for n in range(max(3, lo), hi + 1):
        t = cf.k3_thresholds(n)
        row = {"n": n, "r": cf.r_threshold(n), "rprime": cf.rprime_threshold(n), "a": t.a, "b": t.b,
               "u_num": str(t.u.numerator), "u_den": str(t.u.denominator)}
        for name, val in (("p1", cf.p1(n)), ("p2", cf.p2(n)), ("p3", cf.p3(n))):
            row[f"{name}_num"], row[f"{name}_den"] = str(val.numerator), str(val.denominator)
            row[f"{name}_decimal"] = decimal_str(val)
        rows.append(row)
    return rows


@main.command("export")
@click.argument("table", type=click.Choice(["pkn", "thresholds", "convergence"]))
@click.option("--nmax", type=int, default=20, show_default=True)
@click.option("--from", "n_from", type=int, default=3, show_default=True)
@click.option("--to", "n_to", type=int, default=100, show_default=True)
@click.option("--points", default="100,1000,2000", show_default=True)
@click.option("--nmax-exact", type=int, default=2000, envvar="KTHSTOP_NMAX_EXACT", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("-o", "--out", "out", default=None, help="output file (stdout if omitted)")
def cmd_export(table, nmax, n_from, n_to, points, nmax_exact, fmt, out):
    """Export a table of exact values."""
    if table == "pkn":
        rows = _pkn_rows(nmax)
    elif table == "thresholds":
        rows = _threshold_rows(n_from, n_to)
    else:
        try:
            pts = [int(s) for s in points.split(",")]
            rows = analysis.convergence_report(pts, nmax_exact).rows
        except ValueError as exc:
            raise click.UsageError(str(exc)) from exc
    if fmt == "csv":
        text = _csv_text(rows)
    else:
        text = json.dumps({"schema": SCHEMA, "table": table, "rows": rows}, indent=2) + "\n"
    if out is None:
        click.echo(text, nl=False)
    else:
        _write(Path(out), text)


if __name__ == "__main__":
    main()
