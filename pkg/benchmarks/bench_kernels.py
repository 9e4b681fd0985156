"""Numba vs numpy timings for the theta ladder and the representation counter.

    python benchmarks/bench_kernels.py [--repeat 3]

Both backends run on identical inputs; results are checked bit for bit.
"""

import argparse
import time


from cntheta import kernels
from cntheta.arith import CMPoint, validate_curve, tau_point
from cntheta.hpc import PrecisionContext
from cntheta.theta import Chi, evaluate


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_theta(n, bits, repeat):
    ctx = PrecisionContext(bits)
    _, tau = tau_point(validate_curve(n))
    rows = []
    for backend in ("numba", "numpy"):
        t, v = best_of(lambda: evaluate(Chi(n), tau, ctx, backend=backend), repeat)
        rows.append((backend, t, v))
    same = rows[0][2].value == rows[1][2].value
    return rows, same


def bench_counts(target, repeat):
    rows = []
    for backend in ("numba", "numpy"):
        t, v = best_of(lambda: kernels.count_reps(target, 2, 1, 8, backend=backend), repeat)
        rows.append((backend, t, v))
    return rows, rows[0][2] == rows[1][2]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not kernels.HAVE_NUMBA:
        raise SystemExit("numba is not available (or CNTHETA_DISABLE_NUMBA is set)")

    print("warming up numba ...")
    evaluate(Chi(5), CMPoint(18, 50), PrecisionContext(128), backend="numba")
    kernels.count_reps(5, 2, 1, 8, backend="numba")

    print(f"{'workload':34s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}  identical")
    for n, bits in ((41, 128), (401, 128), (401, 256), (2113, 192)):
        rows, same = bench_theta(n, bits, args.repeat)
        (_, tn, _), (_, tp, _) = rows
        print(f"{f'theta_chi_{n}(tau_n), p={bits}':34s} {tn:10.4f} {tp:10.4f} {tp / tn:8.1f}  {same}")
    for target in (10_001, 1_000_001):
        rows, same = bench_counts(target, args.repeat)
        (_, tn, _), (_, tp, _) = rows
        print(f"{f'count 2x^2+y^2+8z^2={target}':34s} {tn:10.4f} {tp:10.4f} {tp / tn:8.1f}  {same}")


if __name__ == "__main__":
    main()
