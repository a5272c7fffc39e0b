"""Acceptance criteria 1-10, one test each, at their stated tolerances."""

import time

import pytest

from thetaring import suites
from thetaring.suites import RunConfig

CONFIG = RunConfig(seed=0)


def _record(log, n, title, report, elapsed, limit=None):
    ok = report["ok"] and (limit is None or elapsed < limit)
    failed = [c["name"] for c in report["checks"] if not c["ok"]]
    extra = f" (limit {limit:.0f}s)" if limit else ""
    detail = f" failed: {', '.join(failed)}" if failed else ""
    line = f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title}  [{elapsed:.1f}s{extra}]{detail}"
    log[n] = line
    print(line)
    return ok


def _run(name):
    t = time.perf_counter()
    report = suites.run_suite(name, CONFIG)
    return report, time.perf_counter() - t


CRITERIA = [
    (1, "lambda closed form vs oracle, 2x2", "lambda2", 60),
    (2, "lambda closed form vs oracle, reduced 3x3", "lambda3", 600),
    (3, "inequality sweeps", "inequalities", None),
    (4, "decomposition contract", "decompositions", None),
    (5, "bounded q-optimality", "optimal", None),
    (6, "congruence and orbit equivalence", "orbits", None),
    (7, "theta Fourier-Jacobi", "theta-fj", 60),
    (8, "Weierstrass identities", "wp-identities", None),
    (9, "section ranks", "surjectivity", 120),
    (10, "factor-4 rank jumps", "factor4", None),
]


@pytest.mark.parametrize("n,title,suite,limit", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(n, title, suite, limit, acceptance_log):
    report, elapsed = _run(suite)
    assert _record(acceptance_log, n, title, report, elapsed, limit), suites.to_json(report)


def test_lambda2_covers_the_whole_domain():
    report, _ = _run("lambda2")
    assert report["checks"][0]["forms"] == 121


def test_lambda3_exercises_both_branches():
    report, _ = _run("lambda3")
    branches = report["checks"][0]["branches"]
    assert branches["t13<=0"] > 0 and branches["t13>0"] > 0


def test_relation_report_records_the_fit():
    report, _ = _run("wp-identities")
    checks = {c["name"]: c for c in report["checks"]}
    assert checks["F2_coefficient_fit"]["resolved"] == "15*g3*f1"
    v = checks["phi_relation"]["variants"]
    assert v["sign=-1,15g3"] < 1e-8 < v["sign=+1,15"]
