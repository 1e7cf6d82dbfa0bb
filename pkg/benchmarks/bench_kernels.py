"""Time the finite-field kernels under both backends.

    python3 benchmarks/bench_kernels.py --primes 31,47,71 --repeat 3

The numba column excludes JIT compilation (one warm-up call per kernel).
"""

import argparse
import time

import numpy as np

from moonexp import _accel, kernels
from moonexp.ffield import nonresidue
from moonexp.supersingular import hasse_poly


def _inputs(p: int, rng):
    n = p * p
    A0, A1, B0, B1 = rng.integers(0, p, (4, n))
    return A0, A1, B0, B1


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(primes, repeat):
    rows = []
    rng = np.random.default_rng(0)
    backends = ["numpy"] + (["numba"] if _accel.HAVE_NUMBA else [])
    for p in primes:
        s = nonresidue(p)
        A0, A1, B0, B1 = _inputs(p, rng)
        H = np.array(hasse_poly(p).coeffs, dtype=np.int64)
        jobs = {
            "count_fp": lambda: kernels.count_affine_fp(A0[:p * p], B0[:p * p], p),
            "count_fp2": lambda: kernels.count_affine_fp2(A0, A1, B0, B1, p, s),
            "roots_mask": lambda: kernels.roots_mask(H, p, s),
        }
        for name, job in jobs.items():
            times = {}
            results = {}
            for be in backends:
                _accel.set_backend(be)
                results[be] = job()  # warm-up, compiles under numba
                times[be] = _time(job, repeat)
            if len(results) == 2:
                assert np.array_equal(results["numpy"], results["numba"]), (p, name)
            rows.append((p, name, times.get("numpy"), times.get("numba")))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--primes", default="31,47,71")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    primes = [int(x) for x in args.primes.split(",")]
    print(f"{'p':>4} {'kernel':>11} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for p, name, t_np, t_nb in bench(primes, args.repeat):
        sp = f"{t_np / t_nb:8.1f}" if t_nb else "     n/a"
        nb = f"{t_nb:10.4f}" if t_nb is not None else "       n/a"
        print(f"{p:>4} {name:>11} {t_np:10.4f} {nb} {sp}")


if __name__ == "__main__":
    main()
