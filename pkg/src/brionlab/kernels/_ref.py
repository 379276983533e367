"""Reference kernels in pure numpy.

These carry the hot inner loops: the rational-exponential sum over the
simplicial vertex cones and the Bessel power series. The compiled extension
in ``_core`` implements the same four functions with identical semantics;
either module can back the public surface of ``brionlab.kernels``.
"""

from __future__ import annotations

import math

import numpy as np

SERIES_TOL = 1e-18
SERIES_MAX_TERMS = 400


def brion_sum_many(apexes, gens, dets, zs):
    """Vertex-cone sum at a batch of evaluation points.

    Computes S(z) = sum_m dets[m] * exp(-2*pi*i*<apexes[m], z>) /
    prod_l <gens[m, l], z> for each row z of ``zs`` (complex, shape (n, d)),
    without the global (2*pi*i)^(-d) prefactor.

    Returns (values, min_denoms): values has shape (n,), min_denoms[k] is
    the smallest |<w, z_k>| over every linear factor w. When a factor
    vanishes the value is meaningless (inf/nan); callers must test
    min_denoms before trusting values.
    """
    zs = np.ascontiguousarray(zs, dtype=np.complex128)
    apexes = np.asarray(apexes, dtype=float)
    gens = np.asarray(gens, dtype=float)
    dets = np.asarray(dets, dtype=float)

    phases = np.exp(-2j * np.pi * (zs @ apexes.T))  # (n, m)
    factors = np.einsum("mld,nd->nml", gens, zs)  # (n, m, d)
    min_denoms = np.abs(factors).min(axis=(1, 2))
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        denom = factors.prod(axis=2)
        values = (phases * dets[None, :] / denom).sum(axis=1)
    return values, min_denoms


def brion_sum(apexes, gens, dets, z):
    """Single-point version of :func:`brion_sum_many`."""
    z = np.asarray(z, dtype=np.complex128)
    values, min_denoms = brion_sum_many(apexes, gens, dets, z[None, :])
    return complex(values[0]), float(min_denoms[0])


def bessel_j_pos(n: int, z: complex) -> complex:
    """Bessel J_n(z) for integer n >= 0 by the ascending power series.

    The leading term is formed in log space so large orders underflow to
    zero instead of overflowing the (z/2)^n power.
    """
    z = complex(z)
    if z == 0:
        return 1.0 + 0.0j if n == 0 else 0.0 + 0.0j
    log_t0 = n * np.log(z / 2.0) - math.lgamma(n + 1)
    term = np.exp(log_t0)
    total = term
    ratio_base = -(z / 2.0) ** 2
    for k in range(SERIES_MAX_TERMS):
        term = term * ratio_base / ((k + 1) * (n + k + 1))
        total += term
        if abs(term) <= SERIES_TOL * (1.0 + abs(total)):
            break
    return complex(total)


def bessel_j_ratio(n: int, z: complex) -> complex:
    """Leading-term-normalized Bessel series J_n(z) * n! * (2/z)^n.

    This is the hypergeometric tail sum_k (-1)^k (z/2)^(2k) /
    (k! (n+1)...(n+k)); it tends to 1 as n grows with z fixed and stays
    well-conditioned where J_n itself underflows.
    """
    z = complex(z)
    term = 1.0 + 0.0j
    total = term
    ratio_base = -(z / 2.0) ** 2
    for k in range(SERIES_MAX_TERMS):
        term = term * ratio_base / ((k + 1) * (n + k + 1))
        total += term
        if abs(term) <= SERIES_TOL * (1.0 + abs(total)):
            break
    return complex(total)
