"""Time the numba kernels against their pure-numpy twins.

Both backends are importable side by side, so one process can compare them.
Each kernel is warmed up once (numba compiles on first call), then timed as
the best of a few repeats. Outputs of the two backends are compared too.

    python benchmarks/bench_kernels.py [--sieve 2000000] [--repeat 3]
"""

import argparse
import time

import numpy as np

from taulab import kernels
from taulab.quadrature import NODES, WEIGHTS
from taulab.zeta import bernoulli_numbers


def best_of(fn, repeat):
    fn()  # warm-up / compile
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def max_diff(a, b):
    if isinstance(a, tuple):
        return max(max_diff(x, y) for x, y in zip(a, b))
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sieve", type=int, default=2_000_000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    lam, _ = kernels.mangoldt_numpy(args.sieve)
    excess = np.cumsum(lam) - np.arange(lam.size)
    B = bernoulli_numbers(24)
    from math import factorial

    corr = np.array([float(B[2 * k] / factorial(2 * k)) for k in range(1, 13)])
    ws = 0.5 + 1j * np.linspace(0.1, 60.0, 4000)
    zs = 0.3 + 1j * np.linspace(-20.0, 20.0, 200)
    us = np.linspace(-200.0, 200.0, 4000)

    cases = [
        ("mangoldt sieve", lambda m: (lambda: m.mangoldt(args.sieve)[0])),
        ("prefix sum", lambda m: (lambda: m.prefix_sum(lam))),
        ("em_zeta (4000 pts)", lambda m: (lambda: m.em_zeta(ws, 64, corr))),
        ("pnt step transform", lambda m: (lambda: m.pnt_step_transform(excess[: 200_001], 200_000.0, zs))),
        ("trapezoid hat (4000 pts)", lambda m: (lambda: m.trapezoid_hat(us, 1.0, 1.0, NODES, WEIGHTS))),
    ]

    class Backend:
        def __init__(self, suffix):
            for name in ("mangoldt", "prefix_sum", "em_zeta", "pnt_step_transform", "trapezoid_hat"):
                setattr(self, name, getattr(kernels, f"{name}_{suffix}"))

    nb, npy = Backend("numba"), Backend("numpy")
    print(f"{'kernel':<26}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}{'max |diff|':>14}")
    for label, make in cases:
        t_nb, out_nb = best_of(make(nb), args.repeat)
        t_np, out_np = best_of(make(npy), args.repeat)
        print(f"{label:<26}{t_nb:>12.4f}{t_np:>12.4f}{t_np / t_nb:>10.1f}{max_diff(out_nb, out_np):>14.2e}")


if __name__ == "__main__":
    main()
