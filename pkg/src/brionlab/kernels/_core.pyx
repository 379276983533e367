# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: the vertex-cone rational-exponential sum and the Bessel
power series. Semantics match the pure-Python reference module `_ref`
function for function; see that module for the full contracts.
"""

import numpy as np

from libc.math cimport INFINITY, lgamma

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)
    double complex clog(double complex)
    double cabs(double complex)

cdef double complex MINUS_TWO_PI_I = -6.283185307179586j
cdef double SERIES_TOL = 1e-18
cdef int SERIES_MAX_TERMS = 400


cdef void _sum_rows(const double[:, ::1] apexes,
                    const double[:, :, ::1] gens,
                    const double[::1] dets,
                    const double complex[:, ::1] zs,
                    double complex[::1] out_vals,
                    double[::1] out_mins) nogil:
    cdef Py_ssize_t n = zs.shape[0]
    cdef Py_ssize_t m = apexes.shape[0]
    cdef Py_ssize_t d = apexes.shape[1]
    cdef Py_ssize_t i, j, c, l
    cdef double complex dot, fac, denom, total
    cdef double min_d, mag
    for i in range(n):
        total = 0
        min_d = INFINITY
        for j in range(m):
            dot = 0
            for l in range(d):
                dot = dot + apexes[j, l] * zs[i, l]
            denom = 1
            for c in range(d):
                fac = 0
                for l in range(d):
                    fac = fac + gens[j, c, l] * zs[i, l]
                mag = cabs(fac)
                if mag < min_d:
                    min_d = mag
                denom = denom * fac
            total = total + dets[j] * cexp(MINUS_TWO_PI_I * dot) / denom
        out_vals[i] = total
        out_mins[i] = min_d


def brion_sum_many(apexes, gens, dets, zs):
    """Batch vertex-cone sum; see `_ref.brion_sum_many`."""
    cdef const double[:, ::1] a = np.ascontiguousarray(apexes, dtype=np.float64)
    cdef const double[:, :, ::1] g = np.ascontiguousarray(gens, dtype=np.float64)
    cdef const double[::1] dt = np.ascontiguousarray(dets, dtype=np.float64)
    cdef const double complex[:, ::1] z = np.ascontiguousarray(zs, dtype=np.complex128)
    vals = np.empty(z.shape[0], dtype=np.complex128)
    mins = np.empty(z.shape[0], dtype=np.float64)
    cdef double complex[::1] vals_v = vals
    cdef double[::1] mins_v = mins
    with nogil:
        _sum_rows(a, g, dt, z, vals_v, mins_v)
    return vals, mins


def brion_sum(apexes, gens, dets, z):
    """Single-point vertex-cone sum; see `_ref.brion_sum`."""
    zs = np.ascontiguousarray(z, dtype=np.complex128).reshape(1, -1)
    vals, mins = brion_sum_many(apexes, gens, dets, zs)
    return complex(vals[0]), float(mins[0])


cdef double complex _series(int n, double complex z, double complex lead) nogil:
    cdef double complex term = lead
    cdef double complex total = lead
    cdef double complex q = -(z / 2.0) * (z / 2.0)
    cdef int k
    for k in range(SERIES_MAX_TERMS):
        term = term * q / ((k + 1.0) * (n + k + 1.0))
        total = total + term
        if cabs(term) <= SERIES_TOL * (1.0 + cabs(total)):
            break
    return total


def bessel_j_pos(int n, double complex z):
    """J_n(z) for n >= 0 by the ascending power series; see `_ref`."""
    if z == 0:
        return 1.0 + 0.0j if n == 0 else 0.0j
    cdef double complex lead = cexp(n * clog(z / 2.0) - lgamma(n + 1.0))
    return complex(_series(n, z, lead))


def bessel_j_ratio(int n, double complex z):
    """J_n(z) * n! * (2/z)^n by the normalized series; see `_ref`."""
    return complex(_series(n, z, 1.0 + 0.0j))
