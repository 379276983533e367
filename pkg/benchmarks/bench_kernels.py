"""Timing comparison: compiled kernels vs the pure-python reference.

Run from the repository root:

    python3 benchmarks/bench_kernels.py

The compiled backend is imported directly when present; the reference
backend is always available. Each kernel is timed on the same inputs.
"""

import time

import numpy as np

from brionlab import ConeDecomposition, load_polytope
from brionlab.kernels import _ref

try:
    from brionlab.kernels import _core
except ImportError:
    _core = None

N_POINTS = 2000
N_REPEATS = 5
BESSEL_ORDERS = 40
BESSEL_ARGS = 400


def _time(fn, *args):
    best = float("inf")
    for _ in range(N_REPEATS):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_brion(backend):
    cube = load_polytope(
        {"dim": 3, "vertices": [[x, y, z] for x in (0, 1) for y in (0, 1) for z in (0, 1)]}
    )
    decomp = ConeDecomposition.from_polytope(cube)
    rng = np.random.default_rng(0)
    zs = rng.uniform(0.3, 1.7, (N_POINTS, 3)) + 1j * rng.uniform(0.1, 0.9, (N_POINTS, 3))
    return _time(backend.brion_sum_many, decomp.apexes, decomp.gens, decomp.dets, zs)


def bench_bessel(backend):
    rng = np.random.default_rng(1)
    zs = rng.uniform(0.1, 30.0, BESSEL_ARGS) + 1j * rng.uniform(-2.0, 2.0, BESSEL_ARGS)

    def run():
        for n in range(BESSEL_ORDERS):
            for z in zs:
                backend.bessel_j_pos(n, z)

    return _time(run)


def main():
    rows = [("brion_sum_many", bench_brion), ("bessel_j_pos", bench_bessel)]
    print(f"{'kernel':<18}{'reference':>12}{'compiled':>12}{'speedup':>10}")
    for name, bench in rows:
        t_ref = bench(_ref)
        if _core is None:
            print(f"{name:<18}{t_ref * 1e3:>10.2f}ms{'n/a':>12}{'n/a':>10}")
            continue
        t_core = bench(_core)
        print(
            f"{name:<18}{t_ref * 1e3:>10.2f}ms{t_core * 1e3:>10.2f}ms"
            f"{t_ref / t_core:>9.1f}x"
        )


if __name__ == "__main__":
    main()
