"""Exhaustive finite-field checks of the classification statements.

Every verifier returns a :class:`VerificationReport`.  Counterexamples are
point sets that violate the statement; ``failures`` holds violations that are
not witnessed by a single set (a wrong count, an unrealized case, a failed
construction).  Exclusion results over small fields are evidence, not proofs.
"""

from __future__ import annotations

import random
import time
from collections import defaultdict
from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Dict, Iterable, List, Optional

from .curves import (construct_extremal, curve_points, enumerate_b_k,
                     fit_multidegree_one)
from .enumerate import DEFAULT_BUDGET, EnumTask, Filters, run_parallel, search_points
from .errors import PreconditionError
from .field import FieldSpec
from .linalg import det, nullspace
from .segre import (PointSet, Shape, circuit_partition_point, e, essential_partition,
                    is_minimal, is_nondegenerate, minimal_subspace, x_rank)

STATEMENTS = ("e2", "e3", "e301", "n3", "n4a", "n4b", "n400")

FOUR_POINT_SHAPES = [(2,), (3,), (1, 1), (2, 1), (1, 1, 1), (2, 2), (1, 1, 1, 1)]
FIVE_POINT_EXCLUDED = [(2, 2), (3, 1), (2, 1, 1), (1, 1, 1, 1)]
KERNEL_SHAPES = [(1,), (2,), (3,), (1, 1), (2, 1), (1, 1, 1)]
KERNEL_CASES = {(3, 5, (1,)), (2, 5, (2,)), (2, 5, (1, 1)), (2, 4, (1,))}

# keep reports readable when a statement fails massively
MAX_KEPT = 25


def key(shape: Shape, field: FieldSpec) -> str:
    return ",".join(map(str, shape.dims)) + "@" + str(field)


@dataclass
class VerificationReport:
    statement_id: str
    shapes_checked: List[Shape] = dc_field(default_factory=list)
    fields_checked: List[FieldSpec] = dc_field(default_factory=list)
    counterexamples: List[PointSet] = dc_field(default_factory=list)
    counterexample_count: int = 0
    failures: List[str] = dc_field(default_factory=list)
    counts: Dict[str, int] = dc_field(default_factory=dict)
    details: Dict[str, object] = dc_field(default_factory=dict)
    elapsed: float = 0.0
    reduction_used: bool = False

    @property
    def success(self) -> bool:
        return not self.counterexample_count and not self.failures

    def add_counterexample(self, S: PointSet):
        self.counterexample_count += 1
        if len(self.counterexamples) < MAX_KEPT:
            self.counterexamples.append(S)

    def note(self, shape: Shape, field: FieldSpec):
        if shape not in self.shapes_checked:
            self.shapes_checked.append(shape)
        if field not in self.fields_checked:
            self.fields_checked.append(field)

    def to_json(self, with_elapsed: bool = True) -> dict:
        from .io import point_set_to_json
        out = {
            "statement_id": self.statement_id,
            "success": self.success,
            "shapes_checked": [list(s.dims) for s in self.shapes_checked],
            "fields_checked": [f.to_json() for f in self.fields_checked],
            "counterexample_count": self.counterexample_count,
            "counterexamples": [point_set_to_json(S) for S in self.counterexamples],
            "failures": list(self.failures),
            "counts": dict(self.counts),
            "details": self.details,
            "reduction_used": self.reduction_used,
        }
        if with_elapsed:
            out["elapsed"] = round(self.elapsed, 3)
        return out


def _shape(x) -> Shape:
    return x if isinstance(x, Shape) else Shape(tuple(x))


def _field(x) -> FieldSpec:
    return x if isinstance(x, FieldSpec) else FieldSpec.prime(int(x))


def _run(shape, field, s, filters, reduction=True, jobs=1, budget=DEFAULT_BUDGET, collect=True):
    task = EnumTask(shape, field, s, filters,
                    "fix_first_point" if reduction else "none", budget=budget)
    return run_parallel(task, jobs, collect)


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        rep = fn(*args, **kwargs)
        rep.elapsed = time.perf_counter() - t0
        return rep
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# --- 4-point circuits --------------------------------------------------------

def _form_matrix(S: PointSet):
    """Coefficients of the (1,1)-forms through S, as 2x2 matrices."""
    ker = nullspace(list(S.embedded), S.field, S.shape.N)
    return [[[v[0], v[1]], [v[2], v[3]]] for v in ker]


def check_quadric_circuit(S: PointSet) -> List[str]:
    """Problems with a 4-point circuit of P^1 x P^1 (empty list when fine)."""
    problems = []
    forms = _form_matrix(S)
    if len(forms) != 1:
        return [f"{len(forms)} independent (1,1)-forms vanish on S"]
    reducible = not det(forms[0], S.field)
    minimal = is_minimal(S)[0]
    if reducible == minimal:
        problems.append("reducible quadric does not match non-minimality")
    pts = list(S)
    for other in pts[1:]:
        A = [pts[0], other]
        B = [p for p in pts if p not in A]
        if reducible and (_aligned(*A) or _aligned(*B)):
            continue
        PA, PB = PointSet(S.shape, S.field, A), PointSet(S.shape, S.field, B)
        q = circuit_partition_point(S, PA)
        wit = x_rank(q, S.shape, S.field, cap=2)
        if wit.rank != 2:
            problems.append(f"partition {A!r} gives r_X(q) = {wit.rank}")
        elif PA not in wit.witnesses or PB not in wit.witnesses:
            problems.append(f"partition {A!r}: halves are not rank-2 witnesses")
    return problems


def _aligned(a, b) -> bool:
    return sum(x != y for x, y in zip(a.factors, b.factors)) == 1


@_timed
def verify_four_point_circuits(fields: Iterable = (2, 3), shapes: Optional[Iterable] = None,
                   jobs: int = 1, budget: int = DEFAULT_BUDGET) -> VerificationReport:
    """4-point nondegenerate circuits exist only on P^2 and P^1 x P^1."""
    rep = VerificationReport("e2", reduction_used=True)
    shapes = [_shape(s) for s in (shapes or FOUR_POINT_SHAPES)]
    allowed = {Shape((2,)), Shape((1, 1))}
    cases = defaultdict(int)
    for F in map(_field, fields):
        for sh in shapes:
            rep.note(sh, F)
            flt = Filters(circuit=True, nondegenerate=True)
            # the quadric case is checked on every set, so run it unreduced
            quadric = sh == Shape((1, 1))
            res = _run(sh, F, 4, flt, reduction=not quadric, jobs=jobs, budget=budget,
                       collect=quadric or sh not in allowed)
            rep.counts[key(sh, F)] = res.total
            if sh not in allowed:
                for S in res.point_sets():
                    rep.add_counterexample(S)
            elif not res.total:
                rep.failures.append(f"no 4-point circuit found on {key(sh, F)}")
            if quadric:
                for S in res.point_sets():
                    problems = check_quadric_circuit(S)
                    cases["(a)" if not is_minimal(S)[0] else "(b)"] += 1
                    if problems:
                        rep.add_counterexample(S)
                        rep.details.setdefault("quadric_problems", []).extend(problems[:3])
    rep.details["quadric_cases"] = dict(cases)
    return rep


# --- 5-point circuits --------------------------------------------------------

def _curve_index(field: FieldSpec, k: int):
    """All multidegree-(1,...,1) curves with their point sets, and the curves through each point."""
    count, it = enumerate_b_k(field, k)
    curves = []
    through = defaultdict(list)
    for C in it:
        pts = frozenset(curve_points(C))
        for pt in pts:
            through[pt].append(len(curves))
        curves.append((C, pts))
    return count, curves, through


def curves_containing(S: PointSet, curves, through) -> List[int]:
    pts = list(S)
    return [j for j in through[pts[0]] if all(p in curves[j][1] for p in pts)]


@_timed
def verify_five_point_circuits(fields_exclusion: Iterable = (2, 3), field_positive=5, jobs: int = 1,
                  budget: int = DEFAULT_BUDGET, exclusion_shapes: Optional[Iterable] = None,
                  positive: bool = True) -> VerificationReport:
    """5-point nondegenerate circuits: exclusion on four shapes, curve description on (P^1)^3."""
    rep = VerificationReport("e3", reduction_used=True)
    flt = Filters(circuit=True, nondegenerate=True)
    for F in map(_field, fields_exclusion):
        for sh in map(_shape, exclusion_shapes or FIVE_POINT_EXCLUDED):
            rep.note(sh, F)
            res = _run(sh, F, 5, flt, jobs=jobs, budget=budget)
            rep.counts[key(sh, F)] = res.total
            for S in res.point_sets():
                rep.add_counterexample(S)
    if not positive:
        return rep

    F = _field(field_positive)
    if F.p + 1 < 5:
        raise PreconditionError("the positive check needs p + 1 >= 5")
    sh = Shape((1, 1, 1))
    rep.note(sh, F)

    count, curves, through = _curve_index(F, 3)
    distinct = len({pts for _, pts in curves})
    rep.counts["B3"] = count
    rep.counts["B3_distinct_point_sets"] = distinct
    if distinct != count or len(curves) != count:
        rep.failures.append(f"B_3 count {count} but {distinct} distinct curves")

    # every 5 points of every curve form a minimal nondegenerate circuit
    per_curve = comb(F.p + 1, 5)
    good = 0
    full = Filters(circuit=True, nondegenerate=True, minimal=True)
    for C, pts in curves:
        hist, _ = search_points(sh, F, sorted(pts), 5, full, collect=False)
        good += sum(hist)
        if sum(hist) != per_curve:
            rep.failures.append(f"curve {C.maps} has {sum(hist)} of {per_curve} subsets passing")
    rep.counts["curve_subsets_checked"] = count * per_curve
    rep.counts["curve_subsets_passing"] = good

    # every enumerated circuit is minimal and lies on exactly one curve
    res = _run(sh, F, 5, flt, jobs=jobs, budget=budget)
    rep.counts[key(sh, F)] = res.total
    rep.counts[key(sh, F) + "/through_base_point"] = res.emitted
    minimal_hits = 0
    for S in res.point_sets():
        if not is_minimal(S)[0]:
            rep.add_counterexample(S)
            continue
        minimal_hits += 1
        fit = fit_multidegree_one(S)
        hits = curves_containing(S, curves, through)
        if fit is None or len(hits) != 1 or curves[hits[0]][0] != fit:
            rep.add_counterexample(S)
    rep.counts[key(sh, F) + "/minimal_through_base_point"] = minimal_hits
    rep.counts[key(sh, F) + "/minimal"] = minimal_hits * len(_points(sh, F)) // 5
    expected = count * per_curve
    rep.counts["expected_from_curves"] = expected
    if res.total != expected:
        rep.failures.append(f"circuit total {res.total} != |B_3| * C({F.p + 1}, 5) = {expected}")
    return rep


def _points(shape, field):
    from .enumerate import ambient
    return ambient(shape, field).points


# --- 5-point sets with e >= 2 -------------------------------------------------

def kernel_case(S: PointSet):
    """``(e, #kernel, nonzero dims of the kernel's minimal subspace)``."""
    A, _ = essential_partition(S)
    dims = tuple(sorted(d for d in minimal_subspace(A).dims if d > 0)) if len(A) else ()
    return e(S), len(A), dims


@_timed
def verify_kernel_patterns(field=5, shapes: Optional[Iterable] = None, jobs: int = 1,
                     budget: int = DEFAULT_BUDGET) -> VerificationReport:
    """Kernel structure of 5-point nondegenerate sets with e >= 2."""
    rep = VerificationReport("e301", reduction_used=True)
    F = _field(field)
    realized = defaultdict(int)
    for sh in map(_shape, shapes or KERNEL_SHAPES):
        rep.note(sh, F)
        res = _run(sh, F, 5, Filters(nondegenerate=True, min_defect=2), jobs=jobs, budget=budget)
        rep.counts[key(sh, F)] = res.total
        for S in res.point_sets():
            case = kernel_case(S)
            if case in KERNEL_CASES:
                realized[case] += 1
            else:
                rep.add_counterexample(S)
    rep.details["realized"] = {f"e={c[0]},#A={c[1]},dims={list(c[2])}": n
                               for c, n in sorted(realized.items())}
    for case in sorted(KERNEL_CASES):
        if not realized.get(case):
            rep.failures.append(f"case {case} not realized")
    return rep


# --- cardinality bounds -------------------------------------------------------

def _bound_scan(rep, sh, F, sizes, flt_for, jobs, budget):
    for s in sizes:
        flt = flt_for(s)
        if flt is None:
            continue
        res = _run(sh, F, s, flt, jobs=jobs, budget=budget, collect=False)
        rep.counts[f"{key(sh, F)}/s={s}"] = res.total
        if res.total:
            res = _run(sh, F, s, flt, jobs=jobs, budget=budget, collect=True)
            for S in res.point_sets():
                rep.add_counterexample(S)


@_timed
def verify_bounds(which: str, field=2, shapes: Optional[Iterable] = None, max_cardinality: int = 6,
                  e_target: int = 1, jobs: int = 1, budget: int = DEFAULT_BUDGET,
                  seed: int = 0) -> VerificationReport:
    """Check one of the cardinality bounds n3, n4a, n4b or n400."""
    if which not in ("n3", "n4a", "n4b", "n400"):
        raise ValueError(f"unknown bound {which!r}")
    F = _field(field)
    rep = VerificationReport(which, reduction_used=True)
    defaults = {"n3": [(2, 1), (3, 1), (2, 2)], "n4a": [(1, 1), (1, 1, 1)],
                "n4b": [(1, 1)], "n400": [(2, 1), (1, 1, 1)]}
    for sh in map(_shape, shapes or defaults[which]):
        rep.note(sh, F)
        k = sh.k
        if which == "n3":
            if sh.dims[0] != max(sh.dims):
                raise PreconditionError("the first factor must have maximal dimension")
            n1 = sh.dims[0]
            # violation: e > 0 and rank = s - e <= n1
            _bound_scan(rep, sh, F, range(2, max_cardinality + 1),
                        lambda s: Filters(nondegenerate=True, min_defect=max(1, s - n1)), jobs, budget)
        elif which == "n4a":
            if not sh.all_ones:
                raise PreconditionError("n4a needs an all-ones shape")
            _bound_scan(rep, sh, F, range(2, max_cardinality + 1),
                        lambda s: Filters(nondegenerate=True, minimal=True, min_defect=max(1, s - k)),
                        jobs, budget)
        elif which == "n4b":
            _check_fit_criterion(rep, sh, F, max_cardinality, jobs, budget)
        else:
            m = max(sh.dims)
            bound = m + k + e_target
            flt = Filters(nondegenerate=True, minimal=True, min_defect=e_target, max_defect=e_target)
            _bound_scan(rep, sh, F, range(2, bound), lambda s: flt, jobs, budget)
            S = construct_extremal(sh, F, e_target, random.Random(seed))
            ok = len(S) == bound and e(S) == e_target and is_minimal(S)[0] and is_nondegenerate(S)
            rep.counts[f"{key(sh, F)}/witness_size"] = len(S)
            rep.details.setdefault("witnesses", {})[key(sh, F)] = bound
            if not ok:
                rep.failures.append(f"constructed witness on {key(sh, F)} does not meet the bound")
    return rep


def _check_fit_criterion(rep, sh, F, max_cardinality, jobs, budget):
    """The equivalence test agrees with a brute-force search over all curves."""
    if not sh.all_ones:
        raise PreconditionError("n4b needs an all-ones shape")
    _, curves, through = _curve_index(F, sh.k)
    agree = non_injective = 0
    for s in range(3, max_cardinality + 1):
        res = _run(sh, F, s, Filters(nondegenerate=True, minimal=True, min_defect=1),
                   jobs=jobs, budget=budget)
        rep.counts[f"{key(sh, F)}/s={s}"] = res.total
        for S in res.point_sets():
            try:
                fit = fit_multidegree_one(S)
            except PreconditionError:
                # minimal does not force injective projections once k >= 3
                fit = None
                non_injective += 1
            hits = curves_containing(S, curves, through)
            if (fit is not None) != bool(hits) or (fit is not None and curves[hits[0]][0] != fit):
                rep.add_counterexample(S)
            else:
                agree += 1
    rep.counts[f"{key(sh, F)}/agreements"] = agree
    rep.counts[f"{key(sh, F)}/non_injective"] = non_injective


def run_statement(statement_id: str, **kw) -> VerificationReport:
    """Dispatch used by the command line."""
    if statement_id == "e2":
        return verify_four_point_circuits(**kw)
    if statement_id == "e3":
        return verify_five_point_circuits(**kw)
    if statement_id == "e301":
        return verify_kernel_patterns(**kw)
    if statement_id in ("n3", "n4a", "n4b", "n400"):
        return verify_bounds(statement_id, **kw)
    raise ValueError(f"unknown statement {statement_id!r}; expected one of {STATEMENTS}")
