"""Integer-order Bessel functions of the first kind on complex arguments.

Only the modest parameter box needed by the circle diagnostics is supported:
|n| <= 512 and |z| <= 64. Inside that box the ascending power series with an
absolute-plus-relative stopping rule delivers near machine precision; outside
it we refuse rather than silently degrade.
"""

from __future__ import annotations

import numpy as np

from . import kernels

MAX_ORDER = 512
MAX_ARG = 64.0


def _check_range(n: int, z: complex) -> None:
    if abs(n) > MAX_ORDER:
        raise ValueError(f"order |{n}| exceeds supported maximum {MAX_ORDER}")
    if abs(z) > MAX_ARG:
        raise ValueError(f"|z| = {abs(z):.3g} exceeds supported maximum {MAX_ARG}")


def bessel_j(n: int, z: complex) -> complex:
    """J_n(z) for any integer n, complex z.

    Negative orders use the reflection J_{-n}(z) = (-1)^n J_n(z).
    """
    n = int(n)
    z = complex(z)
    _check_range(n, z)
    if n >= 0:
        return kernels.bessel_j_pos(n, z)
    value = kernels.bessel_j_pos(-n, z)
    return value if n % 2 == 0 else -value


def asymptotic_ratio(n: int, z: complex) -> complex:
    """The normalized value J_n(z) * n! * (2/z)^n, which tends to 1 in n.

    Computed directly from the hypergeometric tail series, so it stays
    accurate for orders where J_n itself underflows.
    """
    n = int(n)
    z = complex(z)
    if n < 0:
        raise ValueError("asymptotic_ratio requires n >= 0")
    _check_range(n, z)
    return kernels.bessel_j_ratio(n, z)


def jacobi_anger_partial(z: complex, t: float, n_max: int) -> complex:
    """Partial sum sum_{|n| <= n_max} J_n(z) e^{int} of e^{iz sin t}."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    z = complex(z)
    _check_range(n_max, z)
    js = [kernels.bessel_j_pos(n, z) for n in range(n_max + 1)]
    total = js[0]
    for n in range(1, n_max + 1):
        phase = np.exp(1j * n * t)
        # J_{-n} e^{-int} folded in via the reflection formula
        if n % 2 == 0:
            total += js[n] * (phase + 1.0 / phase)
        else:
            total += js[n] * (phase - 1.0 / phase)
    return complex(total)
