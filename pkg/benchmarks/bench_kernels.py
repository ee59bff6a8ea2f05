#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the two hot maps (Pauli coefficients -> probability table, and
probability table -> design-adjoint sums) on random inputs for a range of
qubit counts and prints a comparison table. The numba kernels are warmed up
before timing so compilation is excluded.

Run:
    python benchmarks/bench_kernels.py --n 2,3,4,5,6 --repeats 5
"""

import argparse
import time

import numpy as np

from qtomo import _kernels


def best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", default="2,3,4,5,6", help="comma-separated qubit counts")
    parser.add_argument("--repeats", type=int, default=5, help="timing repeats (best-of)")
    args = parser.parse_args()
    n_values = [int(x) for x in args.n.split(",") if x.strip()]

    if not _kernels._HAVE_NUMBA:
        print("numba is not installed; only the numpy path is available")

    header = f"{'n':>3} {'cells':>10} {'direction':>9} {'numpy':>10} {'numba':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for n in n_values:
        rng = np.random.default_rng(n)
        coeffs = rng.normal(size=4**n)
        table = rng.normal(size=(3**n, 2**n))
        jobs = [
            ("forward", lambda: _kernels.table_from_coeffs_numpy(coeffs, n),
             lambda: _kernels.table_from_coeffs_numba(coeffs, n)),
            ("adjoint", lambda: _kernels.design_adjoint_sums_numpy(table, n),
             lambda: _kernels.design_adjoint_sums_numba(table, n)),
        ]
        for name, np_fn, nb_fn in jobs:
            t_np = best_of(np_fn, args.repeats)
            if _kernels._HAVE_NUMBA:
                nb_fn()  # warm-up / compile
                t_nb = best_of(nb_fn, args.repeats)
                print(f"{n:>3} {6**n:>10} {name:>9} {t_np:>9.4f}s {t_nb:>9.4f}s {t_np / t_nb:>7.1f}x")
            else:
                print(f"{n:>3} {6**n:>10} {name:>9} {t_np:>9.4f}s {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
