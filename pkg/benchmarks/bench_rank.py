"""Compare the numba and numpy backends of the modular rank kernel.

    python3 benchmarks/bench_rank.py [--sizes 50 100 200] [--repeat 5]

Both backends must agree on every matrix; timings exclude numba compilation.
"""
import argparse
import time

import numpy as np

from koszulkit import _kernels


def random_matrix(rng, n, rank):
    # integer matrix of prescribed rank: product of two thin random factors
    left = rng.integers(-3, 4, size=(n, rank))
    right = rng.integers(-3, 4, size=(rank, n))
    return left @ right


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return out, min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 200, 400])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    if not _kernels.HAS_NUMBA:
        print("numba unavailable; timing the numpy backend only")
    else:
        _kernels.rank_mod_p(np.eye(3, dtype=np.int64), backend="numba")  # compile
    print(f"{'n':>5} {'rank':>5} {'numpy [s]':>10} {'numba [s]':>10} {'speedup':>8}")
    for n in args.sizes:
        mat = random_matrix(rng, n, n - n // 5)
        r_np, t_np = best_of(lambda: _kernels.rank_mod_p(mat, backend="numpy"), args.repeat)
        if _kernels.HAS_NUMBA:
            r_nb, t_nb = best_of(lambda: _kernels.rank_mod_p(mat, backend="numba"), args.repeat)
            assert r_np == r_nb, (n, r_np, r_nb)
            print(f"{n:>5} {r_np:>5} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>7.1f}x")
        else:
            print(f"{n:>5} {r_np:>5} {t_np:>10.4f} {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
