"""Time the numba and numpy elimination kernels against each other.

    python3 benchmarks/bench_kernels.py [--sizes 20 60 120] [--repeat 5]

Both backends reduce the same random matrices mod a 31-bit prime; the script
checks that they agree before reporting the best wall-clock time of each.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from p1k._kernels import NUMBA_AVAILABLE, rref_mod_p

P = 2147483647


def best_time(a, backend, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        rref_mod_p(a, P, backend)
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[20, 60, 120, 240])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if not NUMBA_AVAILABLE:
        raise SystemExit("numba is not importable; nothing to compare")

    rng = np.random.default_rng(args.seed)
    rref_mod_p(np.eye(2, dtype=np.int64), P, "numba")  # compile outside the timing
    print(f"{'n':>5} {'numba (ms)':>12} {'numpy (ms)':>12} {'speedup':>8}")
    for n in args.sizes:
        # rank-deficient on purpose so pivot skipping is exercised
        a = rng.integers(0, P, size=(n, n // 2)) @ rng.integers(0, 3, size=(n // 2, n + 5))
        a %= P
        r1, p1 = rref_mod_p(a, P, "numba")
        r2, p2 = rref_mod_p(a, P, "numpy")
        assert np.array_equal(r1, r2) and np.array_equal(p1, p2)
        t_nb, t_np = best_time(a, "numba", args.repeat), best_time(a, "numpy", args.repeat)
        print(f"{n:>5} {1e3 * t_nb:>12.3f} {1e3 * t_np:>12.3f} {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
