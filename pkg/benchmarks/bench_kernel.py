"""Time the compiled and pure-Python subset-search kernels on the same tasks.

    python benchmarks/bench_kernel.py [--repeat 3] [--quick]

Both backends are called directly with identical inputs, and their outputs
are compared before any timing is reported.
"""

from __future__ import annotations

import argparse
import statistics
import time

from segrekit import FieldSpec, Shape, _pykernel
from segrekit.enumerate import ambient

try:
    from segrekit import _ckernel
except ImportError:  # extension not built
    _ckernel = None

TASKS = [
    # (label, shape, p, s, circuit, nondegenerate, minimal, fix_first)
    ("P1xP1 GF(3) s=4 circuits", (1, 1), 3, 4, True, True, False, False),
    ("P2 GF(3) s=4 circuits", (2,), 3, 4, True, False, False, False),
    ("P2xP1 GF(2) s=5 all", (2, 1), 2, 5, False, False, False, False),
    ("(P1)^3 GF(3) s=5 circuits, first point", (1, 1, 1), 3, 5, True, True, False, True),
    ("P1xP1 GF(5) s=5 minimal e>=1, first point", (1, 1), 5, 5, False, True, True, True),
]
QUICK = 2


def run(backend, amb, p, s, circuit, nondeg, minimal, fix_first):
    return backend.search(amb.vecs, p, s, amb.fac, amb.fac_off, amb.conflict, fix_first, 0, 1,
                          1 if circuit else 0, s, circuit, nondeg, minimal, False)


def timed(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="only the first two tasks")
    args = ap.parse_args(argv)
    if _ckernel is None:
        print("compiled kernel not available; build with `pip install -e . --no-build-isolation`")
        return 1
    tasks = TASKS[:QUICK] if args.quick else TASKS
    print(f"{'task':44s} {'leaves':>9s} {'cython s':>9s} {'python s':>9s} {'speedup':>8s}")
    for label, dims, p, s, *flags in tasks:
        amb = ambient(Shape(dims), FieldSpec.prime(p))
        tc, out_c = timed(lambda: run(_ckernel, amb, p, s, *flags), args.repeat)
        tp, out_p = timed(lambda: run(_pykernel, amb, p, s, *flags), max(1, args.repeat // 2))
        if list(out_c[0]) != list(out_p[0]) or out_c[2] != out_p[2]:
            raise SystemExit(f"backends disagree on {label}: {out_c[0]} vs {out_p[0]}")
        print(f"{label:44s} {out_c[2]:9d} {tc:9.4f} {tp:9.4f} {tp / tc:7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
