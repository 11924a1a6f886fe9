#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Runs the box-counting and rectangle-maximization kernels on a few seeded
instances with both backends, checks that the results agree, and prints a
timing table.  Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import random
import time

from rbox import _kernels_py
from rbox.relation import Relation

try:
    from rbox import _kernels  # compiled

    HAVE_COMPILED = True
except ImportError:
    _kernels = None
    HAVE_COMPILED = False


def make_instance(seed: int, sizes: tuple[int, ...], alpha: float) -> Relation:
    rng = random.Random(seed)
    total = 1
    for n in sizes:
        total *= n
    m = int(alpha * total)
    codes = sorted(rng.sample(range(total), m))

    def decode(c: int) -> tuple[int, ...]:
        out = []
        for n in reversed(sizes):
            out.append(c % n)
            c //= n
        return tuple(reversed(out))

    return Relation.from_tuples(sizes, [decode(c) for c in codes])


CASES = [
    ("count r=2 n=48 a=.30 s=(3,3)", (48, 48), 0.30, (3, 3), "count"),
    ("count r=2 n=96 a=.15 s=(4,2)", (96, 96), 0.15, (4, 2), "count"),
    ("count r=3 n=14 a=.40 s=(2,2,2)", (14, 14, 14), 0.40, (2, 2, 2), "count"),
    ("max   r=2 n=64 a=.25 s=(3,)", (64, 64), 0.25, (3,), "max"),
    ("max   r=3 n=12 a=.45 s=(2,2)", (12, 12, 12), 0.45, (2, 2), "max"),
]


def run(fn, args, repeat: int) -> tuple[object, float]:
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return result, best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    opts = parser.parse_args()

    if not HAVE_COMPILED:
        print("compiled kernels unavailable; timing the pure backend only")
    header = f"{'case':34} {'pure':>10} {'compiled':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for label, sizes, alpha, shape, kind in CASES:
        rel = make_instance(1234, sizes, alpha)
        enc = rel.encoded
        if kind == "count":
            pure_fn = _kernels_py.count_boxes_dense
            comp_fn = _kernels.count_boxes_flat if HAVE_COMPILED else None
        else:
            pure_fn = _kernels_py.best_rectangle_dense
            comp_fn = _kernels.best_rectangle_flat if HAVE_COMPILED else None
        pure_res, pure_t = run(pure_fn, (sizes, enc, shape), opts.repeat)
        if comp_fn is None:
            print(f"{label:34} {pure_t * 1e3:9.2f}ms {'-':>10} {'-':>8}")
            continue
        comp_res, comp_t = run(comp_fn, (sizes, enc, shape), opts.repeat)
        if pure_res != comp_res:
            print(f"MISMATCH on {label}: pure={pure_res} compiled={comp_res}")
            return 1
        print(f"{label:34} {pure_t * 1e3:9.2f}ms {comp_t * 1e3:9.2f}ms {pure_t / comp_t:7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
