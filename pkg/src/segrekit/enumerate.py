"""Exhaustive enumeration of point subsets of Y(F_p).

Subsets are visited in lexicographic order over the canonically sorted
points of Y(F_p).  With ``reduction="fix_first_point"`` only subsets that
contain the first point are visited; since the group of factor-wise
projectivities acts transitively on Y(F_p) and every filter is invariant
under it, the full count is recovered as ``emitted * #Y / s``.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass, replace
from functools import lru_cache
from math import comb
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from . import kernel
from .errors import BudgetExceededError, UnsupportedFieldError
from .field import FieldSpec
from .segre import DefectReport, MPoint, PointSet, Shape, analyze, points_of, segre_embed

DEFAULT_BUDGET = 2 * 10**8
REDUCTIONS = ("none", "fix_first_point")


@dataclass(frozen=True)
class Filters:
    nondegenerate: bool = False
    minimal: bool = False
    circuit: bool = False
    min_defect: int = 0
    max_defect: Optional[int] = None

    def to_json(self) -> dict:
        return {"nondegenerate": self.nondegenerate, "minimal": self.minimal,
                "circuit": self.circuit, "min_defect": self.min_defect,
                "max_defect": self.max_defect}


@dataclass(frozen=True)
class EnumTask:
    shape: Shape
    field: FieldSpec
    cardinality: int
    filters: Filters = Filters()
    reduction: str = "none"
    partition: Optional[Tuple[int, int]] = None
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if not self.field.is_prime:
            raise UnsupportedFieldError("enumeration needs a prime field")
        if self.cardinality < 2:
            raise ValueError("cardinality must be >= 2")
        if self.reduction not in REDUCTIONS:
            raise ValueError(f"reduction must be one of {REDUCTIONS}")
        if self.partition is not None:
            w, n = self.partition
            if not (n >= 1 and 0 <= w < n):
                raise ValueError(f"bad partition {self.partition}")

    def to_json(self) -> dict:
        return {"shape": list(self.shape.dims), "field": self.field.to_json(),
                "cardinality": self.cardinality, "filters": self.filters.to_json(),
                "reduction": self.reduction,
                "partition": list(self.partition) if self.partition else None}


@dataclass(frozen=True)
class Ambient:
    """Y(F_p) with everything the kernel needs, built once per (shape, p)."""

    shape: Shape
    field: FieldSpec
    points: Tuple[MPoint, ...]
    vecs: np.ndarray
    fac: np.ndarray
    fac_off: Tuple[int, ...]
    conflict: np.ndarray

    def point_set(self, indices: Sequence[int]) -> PointSet:
        return PointSet(self.shape, self.field, [self.points[i] for i in indices])

    def index(self) -> dict:
        return {pt: i for i, pt in enumerate(self.points)}


@lru_cache(maxsize=32)
def ambient(shape: Shape, field: FieldSpec) -> Ambient:
    pts = tuple(points_of(shape, field))
    vecs = np.array([segre_embed(shape, pt, field) for pt in pts], dtype=np.int64)
    fac = np.array([[c for f in pt.factors for c in f.coords] for pt in pts], dtype=np.int64)
    off = [0]
    for n in shape.dims:
        off.append(off[-1] + n + 1)
    # conflict[a, b]: a and b differ in exactly one factor, i.e. lie on a line of X
    codes = np.zeros((len(pts), shape.k), dtype=np.int64)
    for i in range(shape.k):
        label = {}
        for a, pt in enumerate(pts):
            codes[a, i] = label.setdefault(pt.factors[i], len(label))
    diff = (codes[:, None, :] != codes[None, :, :]).sum(axis=2)
    conflict = np.ascontiguousarray(diff == 1, dtype=np.uint8)
    return Ambient(shape, field, pts, vecs, fac, tuple(off), conflict)


def leaf_estimate(task: EnumTask) -> int:
    n = len(ambient(task.shape, task.field).points)
    s = task.cardinality
    return comb(n - 1, s - 1) if task.reduction == "fix_first_point" else comb(n, s)


def _check_budget(task: EnumTask):
    est = leaf_estimate(task)
    if est > task.budget:
        raise BudgetExceededError(
            f"{est} candidate subsets for s={task.cardinality} on {task.shape} over {task.field} "
            f"exceed the budget of {task.budget}", est)


@dataclass
class EnumResult:
    task: EnumTask
    n_points: int
    hist: List[int]
    matches: List[Tuple[int, ...]]
    leaves: int
    backend: str = kernel.BACKEND

    @property
    def emitted(self) -> int:
        return sum(self.hist)

    @property
    def total(self) -> Optional[int]:
        """Count over all of Y(F_p), undoing the first-point reduction."""
        if self.task.partition is not None and self.task.partition[1] > 1:
            return None
        if self.task.reduction == "none":
            return self.emitted
        num = self.emitted * self.n_points
        assert num % self.task.cardinality == 0, "incidence count is not integral"
        return num // self.task.cardinality

    def defect_histogram(self) -> dict:
        s = self.task.cardinality
        return {s - r: c for r, c in enumerate(self.hist) if c}

    def point_sets(self) -> Iterator[PointSet]:
        amb = ambient(self.task.shape, self.task.field)
        for idx in self.matches:
            yield amb.point_set(idx)

    def __iter__(self) -> Iterator[Tuple[PointSet, DefectReport]]:
        for S in self.point_sets():
            yield S, analyze(S)


def run_task(task: EnumTask, collect: bool = True) -> EnumResult:
    """Run one (possibly partitioned) task through the kernel."""
    _check_budget(task)
    amb = ambient(task.shape, task.field)
    s = task.cardinality
    f = task.filters
    min_rank = 0 if f.max_defect is None else max(0, s - f.max_defect)
    max_rank = s - f.min_defect
    w, n = task.partition or (0, 1)
    hist, matches, leaves = kernel.search(
        amb.vecs, task.field.p, s, amb.fac, amb.fac_off, amb.conflict,
        task.reduction == "fix_first_point", w, n, min_rank, max_rank,
        f.circuit, f.nondegenerate, f.minimal, collect)
    return EnumResult(task, len(amb.points), list(hist), list(matches), leaves)


def merge(results: Sequence[EnumResult]) -> EnumResult:
    """Combine per-worker results of one task (sum of counts, union of sets)."""
    if not results:
        raise ValueError("nothing to merge")
    base = replace(results[0].task, partition=None)
    for r in results:
        if replace(r.task, partition=None) != base:
            raise ValueError("results come from different tasks")
    hist = [sum(col) for col in zip(*(r.hist for r in results))]
    matches = sorted(m for r in results for m in r.matches)
    return EnumResult(base, results[0].n_points, hist, matches, sum(r.leaves for r in results),
                      results[0].backend)


def _run_part(args):
    task, collect = args
    return run_task(task, collect)


def run_parallel(task: EnumTask, jobs: int = 1, collect: bool = True) -> EnumResult:
    """Split a task into ``jobs`` partitions, run them, and merge."""
    _check_budget(task)
    if jobs <= 1:
        return run_task(replace(task, partition=None), collect)
    parts = [(replace(task, partition=(w, jobs)), collect) for w in range(jobs)]
    with multiprocessing.get_context("fork").Pool(jobs) as pool:
        results = pool.map(_run_part, parts)
    return merge(results)


def enumerate_sets(task: EnumTask, jobs: int = 1) -> EnumResult:
    """Run ``task``; iterate the result for ``(PointSet, DefectReport)`` pairs."""
    return run_parallel(task, jobs, collect=True)


def search_points(shape: Shape, field: FieldSpec, points: Sequence[MPoint], s: int,
                  filters: Filters = Filters(), collect: bool = True):
    """Run the kernel over an explicit list of points instead of all of Y(F_p).

    Returns ``(hist, matches)`` with matches as tuples of points.
    """
    pts = list(points)
    if len(pts) < s:
        return [0] * (s + 1), []
    vecs = np.array([segre_embed(shape, pt, field) for pt in pts], dtype=np.int64)
    fac = np.array([[c for f in pt.factors for c in f.coords] for pt in pts], dtype=np.int64)
    off = [0]
    for n in shape.dims:
        off.append(off[-1] + n + 1)
    conflict = np.array([[sum(x != y for x, y in zip(a.factors, b.factors)) == 1 for b in pts]
                         for a in pts], dtype=np.uint8)
    min_rank = 0 if filters.max_defect is None else max(0, s - filters.max_defect)
    hist, matches, _ = kernel.search(vecs, field.p, s, fac, off, conflict, False, 0, 1,
                                     min_rank, s - filters.min_defect, filters.circuit,
                                     filters.nondegenerate, filters.minimal, collect)
    return list(hist), [tuple(pts[i] for i in m) for m in matches]
