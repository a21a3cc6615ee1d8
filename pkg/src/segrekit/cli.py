"""Command-line interface: ``segrekit <command> ...``.

Exit codes: 0 success, 1 bad input or failed construction, 2 counterexample
found by ``verify``, 3 budget refusal, 64 usage error.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from typing import List, Optional

from . import __version__
from .curves import (P2P1_KINDS, construct_collinear_block, construct_extremal,
                     construct_p2p1_circuit, equivalence_witnesses, fit_multidegree_one)
from .enumerate import DEFAULT_BUDGET, REDUCTIONS, EnumTask, Filters, run_parallel
from .errors import BudgetExceededError, FieldTooSmallError, SegreError
from .field import FieldSpec
from .io import dumps, load_point_set, make_report, point_set_to_json, write_text
from .segre import Shape, analyze, e, is_circuit, is_minimal, is_nondegenerate, segre_embed
from .verify import STATEMENTS, run_statement

EXIT_OK, EXIT_INPUT, EXIT_COUNTEREXAMPLE, EXIT_BUDGET, EXIT_USAGE = 0, 1, 2, 3, 64

CONSTRUCT_KINDS = ("n2", "extremal") + tuple("p2p1:" + k for k in P2P1_KINDS)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _shape_arg(text: str) -> Shape:
    try:
        return Shape.parse(text)
    except (ValueError, SegreError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _field_arg(text: str) -> FieldSpec:
    try:
        return FieldSpec.parse(text)
    except (ValueError, SegreError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _prime_list(text: str) -> List[int]:
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
        for p in vals:
            FieldSpec.prime(p)
    except (ValueError, SegreError) as exc:
        raise argparse.ArgumentTypeError(str(exc))
    return vals


def _emit(args, kind: str, inputs: dict, results, t0: float):
    stamp = not args.no_timestamp
    rep = make_report(kind, inputs, results, time.perf_counter() - t0, timestamp=stamp)
    write_text(dumps(rep), args.out)


def cmd_analyze(args) -> int:
    t0 = time.perf_counter()
    S = load_point_set(args.path)
    _emit(args, "analyze", {"point_set": point_set_to_json(S)}, analyze(S).to_json(), t0)
    return EXIT_OK


def cmd_embed(args) -> int:
    t0 = time.perf_counter()
    S = load_point_set(args.path)
    vecs = [[int(x) if S.field.is_prime else str(x) for x in segre_embed(S.shape, pt, S.field)]
            for pt in S]
    _emit(args, "embed", {"point_set": point_set_to_json(S)},
          {"ambient_dim": S.shape.r, "vectors": vecs}, t0)
    return EXIT_OK


def cmd_fit_curve(args) -> int:
    t0 = time.perf_counter()
    S = load_point_set(args.path)
    C = fit_multidegree_one(S)
    wit = equivalence_witnesses(S)
    results = {
        "curve": None if C is None else C.to_json()["maps"],
        "found": C is not None,
        "witnesses": [None if M is None else [list(r) for r in M] for M in wit],
    }
    _emit(args, "fit-curve", {"point_set": point_set_to_json(S)}, results, t0)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    t0 = time.perf_counter()
    flt = Filters(nondegenerate=args.nondegenerate, minimal=args.minimal, circuit=args.circuit,
                  min_defect=args.min_defect, max_defect=args.max_defect)
    task = EnumTask(args.shape, args.field, args.size, flt, args.reduction, budget=args.budget)
    res = run_parallel(task, args.jobs, collect=args.limit != 0)
    sets = []
    for j, (S, rep) in enumerate(res):
        if args.limit is not None and j >= args.limit:
            break
        sets.append({"points": point_set_to_json(S)["points"], "report": rep.to_json()})
    results = {
        "emitted": res.emitted,
        "total": res.total,
        "defect_histogram": {str(k): v for k, v in sorted(res.defect_histogram().items())},
        "leaves": res.leaves,
        "sets": sets,
    }
    _emit(args, "enumerate", task.to_json(), results, t0)
    return EXIT_OK


def _verify_kwargs(args) -> dict:
    sid = args.statement
    shapes = args.shape or None
    common = {"jobs": args.jobs, "budget": args.budget}
    if sid == "e2":
        return dict(common, fields=args.fields or [2, 3], shapes=shapes)
    if sid == "e3":
        kw = dict(common, fields_exclusion=args.fields or [2, 3],
                  field_positive=args.positive_field, exclusion_shapes=shapes)
        if args.no_positive:
            kw["positive"] = False
        return kw
    if sid == "e301":
        return dict(common, field=_single_field(args, 5), shapes=shapes)
    defaults = {"n3": 2, "n4a": 3, "n4b": 5, "n400": 5}
    return dict(common, field=_single_field(args, defaults[sid]), shapes=shapes,
                max_cardinality=args.cap, e_target=args.e, seed=args.seed or 0)


def _single_field(args, default: int) -> int:
    if args.field is not None:
        if not args.field.is_prime:
            raise SegreError("verification needs a prime field")
        return args.field.p
    if args.fields:
        return args.fields[0]
    return default


def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    kw = _verify_kwargs(args)
    rep = run_statement(args.statement, **kw)
    inputs = {"statement_id": args.statement}
    inputs.update({k: ([list(s.dims) for s in v] if k in ("shapes", "exclusion_shapes") and v else v)
                   for k, v in kw.items() if k != "jobs"})
    _emit(args, "verify", inputs, rep.to_json(with_elapsed=not args.no_timestamp), t0)
    return EXIT_OK if rep.success else EXIT_COUNTEREXAMPLE


def cmd_construct(args) -> int:
    rng = random.Random(args.seed)
    kind = args.kind
    F = args.field
    if kind == "n2":
        S = construct_collinear_block(args.shape, F, args.e, rng)
        ok = is_nondegenerate(S) and e(S) == args.e
    elif kind == "extremal":
        S = construct_extremal(args.shape, F, args.e, rng)
        ok = is_nondegenerate(S) and is_minimal(S)[0] and e(S) == args.e \
            and len(S) == max(args.shape.dims) + args.shape.k + args.e
    else:
        if not F.is_prime:
            raise SegreError("p2p1 constructions need a prime field")
        S = construct_p2p1_circuit(F, kind.split(":", 1)[1], rng)
        ok = is_circuit(S) and is_nondegenerate(S)
    assert ok, "construction contract violated"
    write_text(dumps(point_set_to_json(S)), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="segrekit", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"segrekit {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, out=True):
        if out:
            p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--no-timestamp", action="store_true",
                       help="omit timestamp and timing so output is byte-stable")

    p = sub.add_parser("analyze", help="defect, kernel, minimality of a point-set file")
    p.add_argument("path")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("embed", help="Segre coordinates of each point")
    p.add_argument("path")
    common(p)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("fit-curve", help="fit a multidegree-(1,...,1) curve")
    p.add_argument("path")
    common(p)
    p.set_defaults(func=cmd_fit_curve)

    p = sub.add_parser("enumerate", help="exhaustive subset enumeration over GF(p)")
    p.add_argument("--shape", type=_shape_arg, required=True)
    p.add_argument("--field", type=_field_arg, required=True)
    p.add_argument("--size", type=int, required=True, help="subset cardinality")
    p.add_argument("--circuit", action="store_true")
    p.add_argument("--minimal", action="store_true")
    p.add_argument("--nondegenerate", action="store_true")
    p.add_argument("--min-defect", type=int, default=0)
    p.add_argument("--max-defect", type=int)
    p.add_argument("--reduction", choices=REDUCTIONS, default="none")
    p.add_argument("--limit", type=int, default=100, help="max sets listed in the report")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    common(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify", help="check a classification statement exhaustively")
    p.add_argument("statement", choices=STATEMENTS)
    p.add_argument("--fields", type=_prime_list, help="comma-separated primes")
    p.add_argument("--field", type=_field_arg)
    p.add_argument("--shape", type=_shape_arg, action="append", help="repeatable")
    p.add_argument("--positive-field", type=int, default=5)
    p.add_argument("--no-positive", action="store_true", help="e3: exclusion part only")
    p.add_argument("--cap", type=int, default=6, help="largest cardinality for bound checks")
    p.add_argument("--e", type=int, default=1, help="defect for n400")
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("construct", help="build a point set with a prescribed structure")
    p.add_argument("kind", choices=CONSTRUCT_KINDS)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--shape", type=_shape_arg, default=Shape((2, 1)))
    p.add_argument("--e", type=int, default=1)
    p.add_argument("--field", type=_field_arg, default=FieldSpec.prime(5))
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct, no_timestamp=True)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"segrekit: budget refused: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except FieldTooSmallError as exc:
        hint = f" (smallest admissible p: {exc.min_p})" if exc.min_p else ""
        print(f"segrekit: field too small: {exc}{hint}", file=sys.stderr)
        return EXIT_INPUT
    except (SegreError, ValueError, OSError) as exc:
        print(f"segrekit: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
