"""Acceptance criteria, one test each, at the stated (exact) tolerance.

Every test prints a ``PASS``/``FAIL`` line; the lines are repeated in the
terminal summary.  Run standalone with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import os
import subprocess
import sys
import time

import pytest

from conftest import GF5, QQ
from property_suites import SUITES
from segrekit import Shape, verify_bounds, verify_four_point_circuits, verify_kernel_patterns, verify_five_point_circuits
from segrekit.verify import key

JOBS = max(1, min(4, os.cpu_count() or 1))
ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
LINES = []


def record(n, title, ok, detail, elapsed, budget_s):
    status = "PASS" if ok else "FAIL"
    line = f"{status} criterion {n} ({title}): {detail} [{elapsed:.1f}s, budget {budget_s}s]"
    LINES.append(line)
    print("\n" + line, flush=True)
    return ok


# 1 -------------------------------------------------------------------------------

def criterion_1():
    shapes = [(2,), (3,), (1, 1), (2, 1), (1, 1, 1), (2, 2), (1, 1, 1, 1)]
    rep = verify_four_point_circuits(fields=[2, 3], shapes=shapes)
    problems = []
    for p in (2, 3):
        for sh in shapes:
            c = rep.counts[key(Shape(sh), GF(p))]
            if (sh in ((2,), (1, 1))) != (c > 0):
                problems.append(f"{sh}@GF({p}) count {c}")
    ok = rep.success and not problems
    cases = rep.details["quadric_cases"]
    detail = (f"circuits only on (2),(1,1); (1,1) circuits checked {sum(cases.values())} "
              f"(cases {cases}); counterexamples {rep.counterexample_count}")
    if problems or rep.failures:
        detail += f"; problems {problems + rep.failures}"
    return ok, detail


def GF(p):
    from segrekit import FieldSpec
    return FieldSpec.prime(p)


# 2 -------------------------------------------------------------------------------

def criterion_2():
    rep = verify_five_point_circuits(fields_exclusion=[2, 3], positive=False, jobs=JOBS)
    zero = all(v == 0 for v in rep.counts.values())
    ok = rep.success and zero and rep.reduction_used and len(rep.counts) == 8
    return ok, f"5-point nondegenerate circuits per shape/field: {rep.counts}"


# 3 -------------------------------------------------------------------------------

def criterion_3():
    rep = verify_five_point_circuits(fields_exclusion=[], field_positive=5, jobs=JOBS)
    c = rep.counts
    k = key(Shape((1, 1, 1)), GF5)
    checks = {
        "B3 = 14400 (dedupe)": c["B3"] == 14400 == c["B3_distinct_point_sets"],
        "curve 5-subsets 86400/86400": c["curve_subsets_checked"] == 86400 == c["curve_subsets_passing"],
        "every circuit fits exactly one curve": rep.counterexample_count == 0,
        "total circuits = 86400": c[k] == 86400,
    }
    ok = all(checks.values())
    detail = "; ".join(f"{name}: {'ok' if v else 'NO'}" for name, v in checks.items())
    detail += (f" | observed total {c[k]}, minimal {c[k + '/minimal']}, "
               f"non-fitting through base point {rep.counterexample_count} "
               f"of {c[k + '/through_base_point']}")
    return ok, detail


# 4 -------------------------------------------------------------------------------

def criterion_4():
    rep = verify_kernel_patterns(field=5, jobs=JOBS)
    ok = rep.success and len(rep.details["realized"]) == 4
    return ok, f"cases realized {rep.details['realized']}; counterexamples {rep.counterexample_count}"


# 5 -------------------------------------------------------------------------------

def criterion_5():
    parts = {
        "n3": verify_bounds("n3", field=2, shapes=[(2, 1), (3, 1), (2, 2)], max_cardinality=6, jobs=JOBS),
        "n4a": verify_bounds("n4a", field=3, shapes=[(1, 1), (1, 1, 1)], max_cardinality=6, jobs=JOBS),
        "n400": verify_bounds("n400", field=5, shapes=[(2, 1), (1, 1, 1)], e_target=1, jobs=JOBS, seed=1),
    }
    sizes = {s: parts["n400"].counts[f"{key(Shape(s), GF5)}/witness_size"] for s in ((2, 1), (1, 1, 1))}
    exact = sizes == {(2, 1): 5, (1, 1, 1): 5}
    ok = all(r.success for r in parts.values()) and exact
    detail = ", ".join(f"{n}: {'ok' if r.success else 'counterexamples %d' % r.counterexample_count}"
                       for n, r in parts.items())
    return ok, detail + f"; minimum m+k+e witnessed at sizes {sizes}"


# 6 -------------------------------------------------------------------------------

def criterion_6():
    bad = []
    summary = []
    for suite in SUITES:
        for F in (GF5, QQ):
            res = suite(F, 1000, seed=2024)
            if res.cases < 1000 or not res.ok:
                bad.append(f"{res.name}@{F}: {res.failures[:2]}")
            summary.append(f"{res.name}@{F}")
    return not bad, f"{len(summary)} suites x 1000 cases" + (f"; failures {bad}" if bad else ", zero failures")


# 7 -------------------------------------------------------------------------------

def criterion_7():
    fixtures = os.path.join(ROOT, "docs", "fixtures")
    mismatched = []
    for name in ("diagonal-5", "kernel-split", "p2p1-conic-line"):
        out = subprocess.run([sys.executable, "-m", "segrekit.cli", "analyze",
                              os.path.join(fixtures, name + ".json"), "--no-timestamp"],
                             capture_output=True, check=True).stdout
        with open(os.path.join(fixtures, name + ".report.json"), "rb") as fh:
            if fh.read() != out:
                mismatched.append(name)
    return not mismatched, "3 fixtures byte-identical" if not mismatched else f"mismatch {mismatched}"


CRITERIA = [
    (1, "4-point circuits", criterion_1, 300),
    (2, "5-point exclusion", criterion_2, 900),
    (3, "(P1)^3 5-circuits and B3 curves", criterion_3, 1200),
    (4, "5-point kernels with e >= 2", criterion_4, 600),
    (5, "cardinality bounds", criterion_5, 600),
    (6, "property suites", criterion_6, 300),
    (7, "CLI golden reports", criterion_7, 10),
]


@pytest.mark.slow
@pytest.mark.parametrize("n,title,fn,budget_s", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(n, title, fn, budget_s):
    t0 = time.perf_counter()
    ok, detail = fn()
    record(n, title, ok, detail, time.perf_counter() - t0, budget_s)
    assert ok, detail


if __name__ == "__main__":
    for n, title, fn, budget_s in CRITERIA:
        t0 = time.perf_counter()
        ok, detail = fn()
        record(n, title, ok, detail, time.perf_counter() - t0, budget_s)
