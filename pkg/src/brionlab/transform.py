"""Fourier-Laplace transform of polytopes.

The primary evaluator sums meromorphic vertex-cone terms (one per simplicial
piece of each tangent cone); removable singularities are resolved by a
deterministic perturbation plus Richardson extrapolation. Three independent
oracles (product formula for boxes, divided differences for simplices,
stratified Monte Carlo for anything) exist purely to cross-check it.

All inner products are bilinear: <x, z> = sum x_j z_j with no conjugation.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from . import geometry, kernels
from .geometry import Polytope, SimplicialCone

# Relative singularity threshold: factors below TAU_SING_REL * scale trigger
# the limiting procedure, where scale = (max generator norm) * |z|_inf.
TAU_SING_REL = 1e-8
# Perturbation ladder, relative to the same scale.
EPS_LADDER_REL = (1e-3, 5e-4, 2.5e-4)
MAX_PERTURB_ATTEMPTS = 16

# Node pairs closer than this switch the divided-difference table to the
# confluent series.
DD_CONFLUENT_TOL = 1e-6
DD_SERIES_TERMS = 30


class TransformError(ArithmeticError):
    """Evaluation could not be completed (no usable perturbation found)."""


@dataclass(frozen=True)
class TransformValue:
    """Transform value plus limiting-procedure diagnostics.

    min_denom is the smallest |<w, z>| met at the unperturbed point;
    perturbed is true iff that fell below the singularity threshold, in
    which case err_estimate holds the last Richardson extrapolation delta.
    """

    value: complex
    min_denom: float
    perturbed: bool
    err_estimate: float


class ConeValue(NamedTuple):
    """Closed-form cone transform plus integral-convergence flag."""

    value: complex
    convergent: bool


@dataclass(frozen=True)
class MonteCarloValue:
    value: complex
    stderr: float


@lru_cache(maxsize=32)
def two_pi_i_power(d: int) -> complex:
    """(2*pi*i)^d by repeated multiplication, computed once per dimension."""
    out = 1.0 + 0.0j
    for _ in range(d):
        out = out * (2j * np.pi)
    return out


@dataclass(frozen=True, eq=False)
class ConeDecomposition:
    """Packed simplicial vertex-cone data for a polytope.

    One row per simplicial cone: apexes (m, d), gens (m, d, d), dets (m,),
    vertex_index (m,). Immutable and shareable across threads; building it
    once and reusing it is the intended pattern for scans.
    """

    dim: int
    apexes: np.ndarray
    gens: np.ndarray
    dets: np.ndarray
    vertex_index: np.ndarray
    gmax: float
    seed_bytes: bytes

    @classmethod
    def from_cones(cls, dim: int, cones_per_vertex, seed_bytes: bytes) -> "ConeDecomposition":
        """Pack a list (per vertex) of lists of SimplicialCone."""
        apexes, gens, dets, vidx = [], [], [], []
        for v, cones in enumerate(cones_per_vertex):
            for cone in cones:
                apexes.append(cone.apex)
                gens.append(cone.generators)
                dets.append(cone.det_abs)
                vidx.append(v)
        return cls(
            dim=dim,
            apexes=np.array(apexes, dtype=float),
            gens=np.array(gens, dtype=float),
            dets=np.array(dets, dtype=float),
            vertex_index=np.array(vidx, dtype=int),
            gmax=float(max(np.linalg.norm(g, axis=1).max() for g in gens)),
            seed_bytes=seed_bytes,
        )

    @classmethod
    def from_polytope(cls, poly: Polytope) -> "ConeDecomposition":
        cones = geometry.vertex_cones(poly)
        return cls.from_cones(poly.dim, cones, poly.vertices.tobytes())


def _perturb_direction(seed_bytes: bytes, attempt: int, d: int):
    """Deterministic generic unit direction from a hash of the vertex data."""
    raw = hashlib.sha256(seed_bytes + attempt.to_bytes(4, "little")).digest()
    while len(raw) < 8 * d:
        raw += hashlib.sha256(raw).digest()
    u = np.frombuffer(raw[: 8 * d], dtype="<u8").astype(float)
    eta = u / 2.0**63 - 1.0
    norm = np.linalg.norm(eta)
    if norm < 1e-6:
        return None
    return eta / norm


def _scale_for(decomp: ConeDecomposition, z: np.ndarray) -> float:
    z_inf = float(np.abs(z).max())
    # |z|_inf = 0 would make the threshold and ladder degenerate; fall back
    # to the generator scale alone so z = 0 still perturbs sensibly.
    return decomp.gmax * z_inf if z_inf > 0 else decomp.gmax


def _evaluate_one(decomp: ConeDecomposition, z: np.ndarray) -> TransformValue:
    prefactor = two_pi_i_power(decomp.dim)
    scale = _scale_for(decomp, z)
    tau = TAU_SING_REL * scale
    raw, min_denom = kernels.brion_sum(decomp.apexes, decomp.gens, decomp.dets, z)
    if min_denom >= tau:
        return TransformValue(raw / prefactor, min_denom, False, 0.0)

    eps0 = EPS_LADDER_REL[0] * scale
    for attempt in range(MAX_PERTURB_ATTEMPTS):
        eta = _perturb_direction(decomp.seed_bytes, attempt, decomp.dim)
        if eta is None:
            continue
        zs = np.array([z + eps * eta for eps in (eps0, eps0 / 2, eps0 / 4)])
        vals, denoms = kernels.brion_sum_many(decomp.apexes, decomp.gens, decomp.dets, zs)
        if denoms.min() < tau:
            continue
        f0, f1, f2 = vals / prefactor
        a1 = 2.0 * f1 - f0
        a1_half = 2.0 * f2 - f1
        a2 = (4.0 * a1_half - a1) / 3.0
        return TransformValue(complex(a2), min_denom, True, abs(a2 - a1_half))
    raise TransformError(
        f"no usable perturbation direction after {MAX_PERTURB_ATTEMPTS} attempts"
    )


def brion_transform(poly: Polytope, z, decomp: ConeDecomposition | None = None) -> TransformValue:
    """Transform of the polytope at z by the vertex-cone sum.

    Direct evaluation when every linear factor |<w, z>| stays at or above
    the singularity threshold; otherwise the value is the third-order
    Richardson extrapolation of evaluations at z + eps * eta along a fixed
    generic direction eta derived from the vertex data.

    Pass a prebuilt ConeDecomposition to skip re-triangulating (and to
    evaluate alternative triangulations of the same polytope).
    """
    if decomp is None:
        decomp = ConeDecomposition.from_polytope(poly)
    z = np.asarray(z, dtype=np.complex128)
    if z.shape != (decomp.dim,):
        raise ValueError(f"z must have shape ({decomp.dim},), got {z.shape}")
    return _evaluate_one(decomp, z)


def brion_transform_many(decomp: ConeDecomposition, zs) -> list:
    """Batch evaluation; regular points vectorize, singular ones extrapolate."""
    zs = np.ascontiguousarray(zs, dtype=np.complex128)
    if zs.ndim != 2 or zs.shape[1] != decomp.dim:
        raise ValueError(f"zs must have shape (n, {decomp.dim})")
    prefactor = two_pi_i_power(decomp.dim)
    raws, denoms = kernels.brion_sum_many(decomp.apexes, decomp.gens, decomp.dets, zs)
    out = []
    for i in range(zs.shape[0]):
        tau = TAU_SING_REL * _scale_for(decomp, zs[i])
        if denoms[i] >= tau:
            # divide as a python complex so batch and single paths agree bitwise
            out.append(TransformValue(complex(raws[i]) / prefactor, float(denoms[i]), False, 0.0))
        else:
            out.append(_evaluate_one(decomp, zs[i]))
    return out


def cone_transform(cone: SimplicialCone, z) -> ConeValue:
    """Meromorphic vertex-cone term with its convergence flag.

    value = det * e^{-2 pi i <apex, z>} / ((2 pi i)^d prod_l <w_l, z>);
    convergent is true iff Im<w_l, z> < 0 for every generator, the region
    where the defining integral over the cone actually converges.
    """
    z = np.asarray(z, dtype=np.complex128)
    d = cone.generators.shape[0]
    factors = cone.generators @ z
    if float(np.abs(factors).min()) == 0.0:
        raise ZeroDivisionError("vanishing denominator factor <w, z>")
    value = (
        cone.det_abs
        * np.exp(-2j * np.pi * (cone.apex @ z))
        / (two_pi_i_power(d) * np.prod(factors))
    )
    convergent = bool(np.all(factors.imag < 0.0))
    return ConeValue(complex(value), convergent)


def box_transform_exact(lo, hi, z) -> complex:
    """Transform of the axis box [lo, hi]: a product of 1-d integrals."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    z = np.asarray(z, dtype=np.complex128)
    if np.any(hi <= lo):
        raise ValueError("box requires lo < hi componentwise")
    out = 1.0 + 0.0j
    for a, b, zeta in zip(lo, hi, z):
        if abs(zeta) <= 1e-12:
            out *= b - a
        else:
            out *= (np.exp(-2j * np.pi * a * zeta) - np.exp(-2j * np.pi * b * zeta)) / (
                2j * np.pi * zeta
            )
    return complex(out)


def _dd_exp(mu: np.ndarray) -> complex:
    """Divided difference of exp over the nodes mu.

    Recursive table for well-separated nodes; for any pair closer than
    DD_CONFLUENT_TOL the whole table is replaced by the shifted series
    dd = e^{mean} * sum_j h_j(mu - mean) / (j + d)! with h_j the complete
    homogeneous symmetric polynomials.
    """
    n = mu.shape[0]
    if n == 1:
        return complex(np.exp(mu[0]))
    sep = np.abs(mu[:, None] - mu[None, :])
    np.fill_diagonal(sep, np.inf)
    if sep.min() >= DD_CONFLUENT_TOL:
        vals = np.exp(mu)
        for lvl in range(1, n):
            vals = (vals[1:] - vals[:-1]) / (mu[lvl:] - mu[:-lvl])
        return complex(vals[0])
    center = mu.mean()
    nu = mu - center
    h = np.zeros(DD_SERIES_TERMS, dtype=np.complex128)
    h[0] = 1.0
    for x in nu:
        for j in range(1, DD_SERIES_TERMS):
            h[j] = h[j] + x * h[j - 1]
    d = n - 1
    total = 0.0 + 0.0j
    for j in range(DD_SERIES_TERMS):
        total += h[j] / math.factorial(j + d)
    return complex(np.exp(center) * total)


def simplex_transform_exact(vertices, z) -> complex:
    """Transform of a d-simplex via the exponential divided difference.

    integral = |det(v_1 - v_0, ..., v_d - v_0)| * dd[exp](mu_0, ..., mu_d)
    with mu_k = -2 pi i <v_k, z>.
    """
    vertices = np.asarray(vertices, dtype=float)
    d = vertices.shape[1]
    if vertices.shape[0] != d + 1:
        raise ValueError("need exactly d+1 vertices")
    det = float(np.linalg.det(vertices[1:] - vertices[0]))
    if abs(det) <= 1e-12:
        raise ValueError("degenerate simplex")
    z = np.asarray(z, dtype=np.complex128)
    mu = -2j * np.pi * (vertices @ z)
    return complex(abs(det) * _dd_exp(mu))


def _allocate(volumes: np.ndarray, samples: int) -> np.ndarray:
    """Largest-remainder allocation proportional to volume, at least 1 each."""
    quota = samples * volumes / volumes.sum()
    base = np.floor(quota).astype(int)
    frac = quota - base
    for i in np.argsort(-frac, kind="stable")[: samples - base.sum()]:
        base[i] += 1
    return np.maximum(base, 1)


def monte_carlo_transform(poly: Polytope, z, samples: int, seed: int) -> MonteCarloValue:
    """Stochastic oracle: stratified uniform sampling over a triangulation.

    Samples are allocated to the simplices of the pulling triangulation
    proportionally to volume and drawn from a single seeded stream, so the
    result is bit-identical for identical (poly, z, samples, seed).
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    z = np.asarray(z, dtype=np.complex128)
    rng = np.random.default_rng(seed)
    d = poly.dim
    fact = math.factorial(d)

    simplices = geometry.triangulate_polytope(poly)
    corner_sets = [poly.vertices[list(s)] for s in simplices]
    volumes = np.array(
        [abs(float(np.linalg.det(c[1:] - c[0]))) / fact for c in corner_sets]
    )
    counts = _allocate(volumes, samples)

    value = 0.0 + 0.0j
    var_sum = 0.0
    for corners, vol, count in zip(corner_sets, volumes, counts):
        u = np.sort(rng.random((count, d)), axis=1)
        bary = np.diff(u, axis=1, prepend=0.0, append=1.0)
        pts = bary @ corners
        f = np.exp(-2j * np.pi * (pts @ z))
        value += vol * f.mean()
        if count >= 2:
            var_sum += vol**2 * float(np.var(f, ddof=1)) / count
    return MonteCarloValue(complex(value), math.sqrt(var_sum))
