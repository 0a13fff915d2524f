"""Time the compiled kernels against the numpy fallback.

Usage::

    python benchmarks/bench_kernels.py [--repeat 5] [--size 400]

Each row reports the best of ``--repeat`` runs per backend and the speed-up.
Both backends are called through :mod:`dynmahler.kernels` with an explicit
``impl`` so the comparison does not depend on ``DYNMAHLER_PURE_PYTHON``.
"""

import argparse
import timeit

import numpy as np

from dynmahler import kernels
from dynmahler.dynamics import escape_radius
from dynmahler.poly import ZPoly, coeff_array


def cases(size):
    t = np.linspace(-2, 2, size)
    grid = t[None, :] + 1j * t[:, None]
    f2 = ZPoly((-1, 0, 1))
    f3 = ZPoly((1, -1, 0, 1))
    rng = np.random.default_rng(0)
    w = rng.normal(size=size * 25) + 1j * rng.normal(size=size * 25)
    return {
        f"escape_counts z^2-1 {size}x{size}":
            lambda impl: kernels.escape_counts(coeff_array(f2), grid, 200, escape_radius(f2), impl=impl),
        f"multibrot_counts d=2 {size}x{size}":
            lambda impl: kernels.multibrot_counts(2, grid, 200, impl=impl),
        f"green_values z^3-z+1 {size}x{size}":
            lambda impl: kernels.green_values(coeff_array(f3), 1.5 * grid, 256, escape_radius(f3), impl=impl),
        f"preimage_roots z^3-z+1 n={w.size}":
            lambda impl: kernels.preimage_roots(coeff_array(f3), w, impl=impl),
    }


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--size", type=int, default=400)
    args = p.parse_args(argv)
    impls = kernels.backends()
    if "cython" not in impls:
        print("compiled extension not built; only the numpy backend is available")
    names = sorted(impls, reverse=True)
    print(f"{'kernel':45s} " + " ".join(f"{n + ' [ms]':>14s}" for n in names) + f" {'speed-up':>9s}")
    for label, fn in cases(args.size).items():
        best = {n: min(timeit.repeat(lambda: fn(impls[n]), number=1, repeat=args.repeat)) for n in names}
        ratio = best["python"] / best["cython"] if "cython" in best else float("nan")
        print(f"{label:45s} " + " ".join(f"{1e3 * best[n]:14.2f}" for n in names) + f" {ratio:8.1f}x")


if __name__ == "__main__":
    main()
