"""Compare the compiled and numpy kernel backends.

Usage::

    python benchmarks/bench_kernels.py [--sizes 512 1024 2048 4096] [--repeat 5]

Reports the best wall time per call for each backend and the largest
difference between their outputs.
"""
import argparse
import time
from unittest import mock

import numpy as np

from metaplectica import kernels, metaplectic as mp, wavefield as wf
from metaplectica.symplectic import lens_system


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_toeplitz(mod, n, repeat, rng):
    psi = rng.normal(size=n) + 1j * rng.normal(size=n)
    kern = np.exp(1j * rng.uniform(0, 2 * np.pi, 2 * n - 1))
    return best_of(lambda: mod.fresnel_toeplitz(psi, kern), repeat)


def bench_horner(mod, n, repeat, rng):
    coeffs = rng.normal(size=n) + 1j * rng.normal(size=n)
    z = np.exp(1j * rng.uniform(0, 2 * np.pi, n))
    return best_of(lambda: mod.horner_unit(coeffs, z), repeat)


def bench_double_pass(mod, n, repeat):
    probe = wf.gaussian(n=n, x_min=-20.0, x_max=20.0)
    M = mp.lift_system(lens_system(1, 2))
    with mock.patch.object(kernels, "fresnel_toeplitz", mod.fresnel_toeplitz):
        return best_of(lambda: mp.apply(M, probe, method="quadrature").samples, repeat)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[512, 1024, 2048, 4096])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    backends = kernels.available_backends()
    print(f"default backend: {kernels.BACKEND}; available: {', '.join(sorted(backends))}")
    if "cython" not in backends:
        print("compiled extension not built; only the numpy backend is timed")
    names = sorted(backends)
    header = f"{'kernel':<22}{'N':>6}" + "".join(f"{b + ' [ms]':>16}" for b in names) + f"{'max |diff|':>14}"
    print(header)
    for label, fn in (
        ("fresnel_toeplitz", lambda m, n: bench_toeplitz(m, n, args.repeat, np.random.default_rng(n))),
        ("horner_unit", lambda m, n: bench_horner(m, n, args.repeat, np.random.default_rng(n))),
        ("double pass (quad)", lambda m, n: bench_double_pass(m, n, args.repeat)),
    ):
        for n in args.sizes:
            results = {b: fn(backends[b], n) for b in names}
            outs = [r[1] for r in results.values()]
            diff = max(float(np.max(np.abs(o - outs[0]))) for o in outs)
            row = f"{label:<22}{n:>6}" + "".join(f"{results[b][0] * 1e3:>16.3f}" for b in names)
            print(row + f"{diff:>14.2e}")


if __name__ == "__main__":
    main()
