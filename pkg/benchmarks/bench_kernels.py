#!/usr/bin/env python3
"""Time the numba kernels against the numpy fallbacks.

    python3 benchmarks/bench_kernels.py            # both paths
    LAZARD_NUMBA=0 python3 benchmarks/bench_kernels.py   # numpy only

The numba path is warmed up once before timing so that JIT compilation is
not counted.  Both paths must return identical results; the script exits
non-zero if they do not.
"""
import argparse
import sys
import time

import numpy as np

from lazard import _accel
from lazard.bchgroup import LazardGroup
from lazard.kernels import first_cocycle_violation, first_nonassociative, howell, smith
from lazard.liering import heisenberg


def timed(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return a == b


def cases(p, rows, cols, seed):
    rng = np.random.default_rng(seed)
    E = 2
    A = rng.integers(0, p**E, size=(rows, cols), dtype=np.int64)
    table = LazardGroup(heisenberg(p)).table()
    n = table.shape[0]
    phi = np.broadcast_to(np.eye(1, dtype=np.int64), (n, 1, 1)).copy()
    f = np.zeros((n, n, 1), np.int64)
    orders = np.array([p], np.int64)
    return {
        f"howell {rows}x{cols} mod {p}^{E}": lambda nb: howell(A, p, E, use_numba=nb),
        f"smith {rows}x{cols} mod {p}^{E}": lambda nb: smith(A, p, E, use_numba=nb),
        f"associativity |G|={n}": lambda nb: first_nonassociative(table, use_numba=nb),
        f"2-cocycle check |G|={n}": lambda nb: first_cocycle_violation(table, phi, f, orders, use_numba=nb),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=5)
    ap.add_argument("--rows", type=int, default=300)
    ap.add_argument("--cols", type=int, default=120)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args(argv)

    paths = [False] + ([True] if _accel.USE_NUMBA else [])
    print(f"numba enabled: {_accel.USE_NUMBA}")
    print(f"{'kernel':<34}{'numpy s':>10}{'numba s':>10}{'speedup':>9}")
    ok = True
    for name, run in cases(a.p, a.rows, a.cols, a.seed).items():
        res = {}
        for nb in paths:
            if nb:
                run(True)  # compile
            res[nb] = timed(lambda: run(nb), a.repeat)
        t_np = res[False][0]
        if True in res:
            t_nb = res[True][0]
            match = same(res[False][1], res[True][1])
            ok &= match
            flag = "" if match else "  MISMATCH"
            print(f"{name:<34}{t_np:>10.4f}{t_nb:>10.4f}{t_np / t_nb:>8.1f}x{flag}")
        else:
            print(f"{name:<34}{t_np:>10.4f}{'-':>10}{'-':>9}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
