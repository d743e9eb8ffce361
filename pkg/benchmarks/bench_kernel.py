#!/usr/bin/env python3
"""Benchmark the compiled kernel against the pure-Python twin on the three
workloads that dominate the verification suites: sparse polynomial products,
Dorfman bracket sweeps, and a Nijenhuis vanishing pass.

Run from the repository root after building the extension in place:

    python setup.py build_ext --inplace
    python benchmarks/bench_kernel.py
"""

import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from gencliff._core import pykernel

try:
    from gencliff._core import _ckernel
except ImportError:
    _ckernel = None


def make_polys(rng, count, nvars=4, terms=6, deg=3):
    out = []
    for _ in range(count):
        p = {}
        for _ in range(terms):
            m = tuple(rng.randint(0, deg) for _ in range(nvars))
            p[m] = pykernel.c_make(rng.randint(-9, 9) or 1,
                                   rng.randint(-9, 9), rng.randint(1, 9))
        out.append(p)
    return out


def make_sections(rng, count, n=4):
    out = []
    for _ in range(count):
        sec = [{} for _ in range(2 * n)]
        a = rng.randrange(2 * n)
        m = tuple(rng.randint(0, 2) for _ in range(n))
        sec[a] = {m: (1, 0, 1)}
        out.append(sec)
    return out


def bench(kernel, polys, sections, n=4):
    t0 = time.perf_counter()
    acc = {}
    for i in range(len(polys) - 1):
        acc = kernel.p_add(acc, kernel.p_mul(polys[i], polys[i + 1]))
    t_poly = time.perf_counter() - t0

    H = {(0, 1, 2): {(0,) * n: (1, 0, 1)}}
    t0 = time.perf_counter()
    for A in sections:
        for B in sections:
            kernel.sec_dorfman(n, A, B, H)
    t_dorf = time.perf_counter() - t0

    # mini Nijenhuis pass with a constant endomorphism (frame rotation)
    M = []
    for i in range(2 * n):
        M.append([(((i + 1) % (2 * n)), (1, 0, 1))])
    t0 = time.perf_counter()
    for A in sections:
        MA = kernel.mat_apply_const(M, A)
        for B in sections:
            MB = kernel.mat_apply_const(M, B)
            t1 = kernel.sec_dorfman(n, MA, MB, None)
            t2 = kernel.mat_apply_const(M, kernel.sec_dorfman(n, MA, B, None))
            t3 = kernel.mat_apply_const(M, kernel.sec_dorfman(n, A, MB, None))
            t4 = kernel.sec_dorfman(n, A, B, None)
            res = kernel.sec_sub(kernel.sec_sub(kernel.sec_sub(t1, t2), t3), t4)
            kernel.sec_is_zero(res)
    t_nij = time.perf_counter() - t0
    return t_poly, t_dorf, t_nij


def main():
    rng = random.Random(20240817)
    polys = make_polys(rng, 400)
    sections = make_sections(rng, 60)
    rows = []
    results = {}
    for name, kernel in (("python", pykernel), ("c", _ckernel)):
        if kernel is None:
            print("compiled kernel not built; run "
                  "`python setup.py build_ext --inplace` first")
            continue
        tp, td, tn = bench(kernel, polys, sections)
        results[name] = (tp, td, tn)
        rows.append((name, tp, td, tn))
    print(f"{'kernel':<8} {'poly-mul':>10} {'dorfman':>10} {'nijenhuis':>10}")
    for name, tp, td, tn in rows:
        print(f"{name:<8} {tp:>9.3f}s {td:>9.3f}s {tn:>9.3f}s")
    if "python" in results and "c" in results:
        speedups = [p / c if c else float("inf")
                    for p, c in zip(results["python"], results["c"])]
        print(f"{'speedup':<8} " + " ".join(f"{s:>9.1f}x" for s in speedups))


if __name__ == "__main__":
    main()
