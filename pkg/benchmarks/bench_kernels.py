#!/usr/bin/env python3
"""Benchmark: compiled kernels vs the pure-Python fallback.

Times the four hot kernels on G(n, 1/2) instances and a full
run-plus-check cycle through each backend.  Usage:

    python benchmarks/bench_kernels.py [--n 2000] [--repeat 5]
"""

import argparse
import statistics
import subprocess
import sys
import time
from fractions import Fraction

from rbl import _kernels_py, kernels
from rbl.colouring import random_colouring

try:
    from rbl import _kernels_c
except ImportError:
    _kernels_c = None


def time_call(fn, repeat):
    best = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best.append(time.perf_counter() - t0)
    return min(best), statistics.median(best)


def bench_kernels(n, repeat):
    c = random_colouring(n, Fraction(1, 2), 42)
    xbits = (1 << (n // 2)) - 1
    ybits = ((1 << n) - 1) ^ xbits
    w = (n + 63) // 64
    packed = c.packed()
    xm = kernels.bits_to_words(xbits, w)
    ym = kernels.bits_to_words(ybits, w)

    cases = {
        "pair_count": (
            lambda: _kernels_py.pair_count(c.red, xbits, ybits),
            (lambda: _kernels_c.pair_count(packed, xm, ym)) if _kernels_c else None),
        "degrees_into": (
            lambda: _kernels_py.degrees_into(c.red, xbits, ybits),
            (lambda: _kernels_c.degrees_into(packed, xm, ym)) if _kernels_c else None),
        "sum_sq_degrees": (
            lambda: _kernels_py.sum_sq_degrees(c.red, xbits, ybits),
            (lambda: _kernels_c.sum_sq_degrees(packed, xm, ym)) if _kernels_c else None),
        "walk_sums": (
            lambda: _kernels_py.walk_sums(c.red, xbits, ybits, n),
            (lambda: _kernels_c.walk_sums(packed, xm, ym, n)) if _kernels_c else None),
    }

    print(f"kernels on G({n}, 1/2), best of {repeat}:")
    print(f"{'kernel':<16} {'pure (ms)':>12} {'compiled (ms)':>14} {'speedup':>9}")
    for name, (py_fn, c_fn) in cases.items():
        py_best, _ = time_call(py_fn, repeat)
        if c_fn is None:
            print(f"{name:<16} {py_best * 1e3:>12.2f} {'n/a':>14} {'n/a':>9}")
        else:
            c_best, _ = time_call(c_fn, repeat)
            print(f"{name:<16} {py_best * 1e3:>12.2f} {c_best * 1e3:>14.2f} "
                  f"{py_best / c_best:>8.1f}x")


# mu = 0.65 with the big-blue trigger disabled keeps the run in the
# red / density-boost regime, where the central-vertex weight scan over the
# full working set is the dominant cost
RUN_SNIPPET = """
import time
from fractions import Fraction
from rbl.book import BookParams, run
from rbl.checks import check_trace
from rbl.colouring import random_colouring, VertexSet
n = {n}
c = random_colouring(n, Fraction(1, 2), 42)
params = BookParams(k=12, ell=12, mu=Fraction(13, 20), epsilon=Fraction(1, 20),
                    x_min=12, w_min=10**9, p_floor=Fraction(1, 100))
t0 = time.perf_counter()
tr = run(c, VertexSet.interval(0, n // 2, n), VertexSet.interval(n // 2, n, n), params)
rep = check_trace(c, tr)
assert rep.ok()
print(time.perf_counter() - t0)
"""


def bench_run_cycle(n):
    import os

    print(f"\nfull run + check on G({n}, 1/2):")
    for backend in ("py", "c"):
        if backend == "c" and _kernels_c is None:
            print("  compiled: not built")
            continue
        env = dict(os.environ, RBL_KERNEL=backend)
        proc = subprocess.run([sys.executable, "-c", RUN_SNIPPET.format(n=n)],
                              capture_output=True, text=True, env=env)
        if proc.returncode != 0:
            print(f"  {backend}: failed\n{proc.stderr}")
            continue
        print(f"  {'pure' if backend == 'py' else 'compiled':<9} "
              f"{float(proc.stdout) * 1e3:9.1f} ms")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=2000)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    print(f"active backend: {kernels.BACKEND}")
    bench_kernels(args.n, args.repeat)
    bench_run_cycle(args.n)


if __name__ == "__main__":
    main()
