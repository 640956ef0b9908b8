"""Time the numba kernels against the numpy fallbacks.

    python benchmarks/bench_kernels.py [--q 729] [--n 200000] [--repeat 5]

Each kernel runs once per backend to warm up (numba compiles on first
call), then the best of --repeat runs is reported.  Outputs are compared
so a fast wrong kernel cannot pass.
"""
import argparse
import time

import numpy as np

from padditive import _kernels
from padditive.gfq import GF, parse_field_size


def best_of(fn, repeat):
    fn()
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases(F, n, rng):
    a = rng.integers(0, F.q, n, dtype=np.int64)
    b = rng.integers(0, F.q, n, dtype=np.int64)
    ca = rng.integers(0, F.q, 400, dtype=np.int64)
    cb = rng.integers(0, F.q, 400, dtype=np.int64)
    # x0^p - g x1 over a small field of the same characteristic: a full
    # odometer sweep up to the zero x1 = x0^p / g
    G = GF(F.p, 2 if F.p < 11 else 1)
    coeffs = np.array([1, G.neg(G.p if G.e > 1 else 2)], dtype=np.int64)
    pows = np.array([G.p, 1], dtype=np.int64)
    qm1 = F.q - 1
    return {
        "add_vec": lambda k: k(a, b, F.p, F.e),
        "mul_vec": lambda k: k(a, b, F.exp, F.log, qm1),
        "pow_vec": lambda k: k(a, 5, F.exp, F.log, qm1),
        "as_image": lambda k: k(F.q, F.p, F.e, F.exp, F.log),
        "conv": lambda k: k(ca, cb, F.p, F.e, F.exp, F.log, qm1),
        "grid_zero": lambda k: k(coeffs, pows, G.q, G.p, G.e, G.exp, G.log),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, default=729)
    ap.add_argument("--n", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    F = GF(*parse_field_size(args.q))
    rng = np.random.default_rng(args.seed)
    if not _kernels.HAVE_NUMBA:
        print("numba not installed: only the numpy fallback can run")
    print(f"F_{F.q} (p={F.p}, e={F.e}), n={args.n}, best of {args.repeat}")
    print(f"{'kernel':<10} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}  same")
    for name, run in cases(F, args.n, rng).items():
        t_np, out_np = best_of(lambda: run(_kernels.kernel(name, "numpy")), args.repeat)
        if not _kernels.HAVE_NUMBA:
            print(f"{name:<10} {t_np * 1e3:>10.2f}")
            continue
        t_nb, out_nb = best_of(lambda: run(_kernels.kernel(name, "numba")), args.repeat)
        same = all(np.array_equal(x, y) for x, y in zip(
            out_np if isinstance(out_np, tuple) else (out_np,),
            out_nb if isinstance(out_nb, tuple) else (out_nb,)))
        print(f"{name:<10} {t_np * 1e3:>10.2f} {t_nb * 1e3:>10.2f} "
              f"{t_np / max(t_nb, 1e-9):>7.1f}x  {same}")


if __name__ == "__main__":
    main()
