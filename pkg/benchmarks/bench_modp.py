"""Benchmark the prime-field rank kernels: numba vs pure numpy.

Times the raw kernels on dense random matrices and on matrices with the
sparse +-1 profile of Koszul strand differentials, then an end-to-end
three-pipeline verdict under each backend.

Run:  python3 benchmarks/bench_modp.py
"""

import time

import numpy as np

from nskoszul.modp import HAS_NUMBA, rank_mod
from nskoszul.koszul_check import koszul_verdict
from nskoszul.ring import RingSpec

P = 32003


def strand_like(rng, rows, cols, nnz_per_col=3):
    mat = np.zeros((rows, cols), dtype=np.int64)
    for c in range(cols):
        picks = rng.choice(rows, size=min(nnz_per_col, rows), replace=False)
        mat[picks, c] = rng.choice([1, P - 1], size=len(picks))
    return mat


def time_kernel(mat, backend, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        r = rank_mod(mat, P, backend)
        best = min(best, time.perf_counter() - start)
    return r, best


def main():
    if not HAS_NUMBA:
        print("numba not importable; only the numpy path can run")
    rng = np.random.default_rng(7)
    backends = ["numba", "numpy"] if HAS_NUMBA else ["numpy"]

    # warm-up (includes numba compilation)
    for be in backends:
        rank_mod(np.eye(4, dtype=np.int64), P, be)

    print(f"{'matrix':<28}" + "".join(f"{be:>12}" for be in backends))
    for label, mat in [
        ("dense 200x200", rng.integers(0, P, (200, 200))),
        ("dense 600x600", rng.integers(0, P, (600, 600))),
        ("dense 1200x1100", rng.integers(0, P, (1200, 1100))),
        ("strand 600x550", strand_like(rng, 600, 550)),
        ("strand 1400x1300", strand_like(rng, 1400, 1300)),
    ]:
        times = []
        ranks = []
        for be in backends:
            r, t = time_kernel(np.ascontiguousarray(mat), be)
            ranks.append(r)
            times.append(t)
        assert len(set(ranks)) == 1, f"backends disagree on {label}"
        print(f"{label:<28}" + "".join(f"{t * 1000:>10.1f}ms" for t in times))

    print()
    spec = RingSpec((1, 1, 2))
    for be in backends:
        import os

        os.environ["NSKOSZUL_BACKEND"] = be
        start = time.perf_counter()
        report = koszul_verdict(spec, 10)
        elapsed = time.perf_counter() - start
        print(
            f"koszul verdict (1,1,2) e=10  [{be:>5}]: {elapsed:.2f}s "
            f"(all true: {report.all_true})"
        )
    os.environ.pop("NSKOSZUL_BACKEND", None)


if __name__ == "__main__":
    main()
