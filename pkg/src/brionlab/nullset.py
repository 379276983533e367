"""Circle diagnostics for the polytope transform.

Parameterize a complex circle z(t) = alpha (cos t, sin t) inside a fixed
2-plane. Every denominator factor <w, z(t)> of the vertex-cone sum is then a
degree-1 trigonometric polynomial; multiplying the sum by the product p(t)
of all factors clears denominators and leaves a trigonometric polynomial

    F(t) = sum_v p_v(t) e^{-2 pi i <v, z(t)>} = (2 pi i)^d p(t) 1-hat_P(z(t))

whose Fourier coefficients are explicit Bessel sums over the vertices in
polar form. The coefficient identity, its dominant-term asymptotics, and a
direct minimum-modulus scan over circles all live here.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass

import numpy as np

from . import bessel, geometry, transform
from .geometry import GeometryError, Plane2, Polytope

logger = logging.getLogger(__name__)

# Relative threshold for dropping float-noise coefficients; keeps the
# top-degree-nonzero invariant meaningful.
TRIM_REL = 1e-14
# Scan minima below this are flagged for manual inspection, never asserted
# as zeros.
FLAG_THRESHOLD = 1e-10
# Probe/normalization margin: the top vertex radius must beat the runner-up
# by at least this fraction.
RADIUS_MARGIN = 0.05

_I_POW = (1 + 0j, 1j, -1 + 0j, -1j)  # i^k for k mod 4, exact


@dataclass(frozen=True, eq=False)
class CircleSpec:
    """A complex circle C_alpha inside a 2-plane: z(t) = alpha(e cos t + f sin t)."""

    plane: Plane2
    alpha: complex

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        if self.alpha == 0:
            raise ValueError("alpha must be nonzero")


@dataclass(frozen=True)
class PolarVertex:
    """Vertex with its first two coordinates in polar form (r, phi, tail)."""

    r: float
    phi: float
    tail: tuple


@dataclass(frozen=True, eq=False)
class TrigPoly:
    """Trigonometric polynomial sum_{|k| <= N} c_k e^{ikt}.

    Stored as a dense complex array of length 2N+1 with c_k at index k+N.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.ndim != 1 or c.size % 2 == 0:
            raise ValueError("coefficient array must be 1-d with odd length")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return (self.coeffs.size - 1) // 2

    def coeff(self, k: int) -> complex:
        if abs(k) > self.degree:
            return 0j
        return complex(self.coeffs[k + self.degree])

    def items(self):
        """Nonzero (k, c_k) pairs in increasing k."""
        n = self.degree
        for i, c in enumerate(self.coeffs):
            if c != 0:
                yield i - n, complex(c)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        ks = np.arange(-self.degree, self.degree + 1)
        vals = np.exp(1j * np.multiply.outer(t, ks)) @ self.coeffs
        return complex(vals) if vals.ndim == 0 else vals


def _trimmed(coeffs: np.ndarray) -> TrigPoly:
    """Symmetric trim of a centered coefficient array at TRIM_REL."""
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    top = float(np.abs(coeffs).max())
    if top == 0.0:
        return TrigPoly(np.zeros(1, dtype=np.complex128))
    center = (coeffs.size - 1) // 2
    keep = np.nonzero(np.abs(coeffs) > TRIM_REL * top)[0]
    reach = int(max(abs(keep.min() - center), abs(keep.max() - center)))
    out = coeffs[center - reach : center + reach + 1].copy()
    out[np.abs(out) <= TRIM_REL * top] = 0.0
    return TrigPoly(out)


def trig_const(c: complex) -> TrigPoly:
    return TrigPoly(np.array([c], dtype=np.complex128))


def trig_mul(a: TrigPoly, b: TrigPoly) -> TrigPoly:
    """Product by coefficient convolution, trimmed."""
    return _trimmed(np.convolve(a.coeffs, b.coeffs))


def trig_add(a: TrigPoly, b: TrigPoly) -> TrigPoly:
    n = max(a.degree, b.degree)
    out = np.zeros(2 * n + 1, dtype=np.complex128)
    out[n - a.degree : n + a.degree + 1] += a.coeffs
    out[n - b.degree : n + b.degree + 1] += b.coeffs
    return _trimmed(out)


def circle_point(spec: CircleSpec, t: float) -> np.ndarray:
    """The point z(t) = alpha(cos(t) e + sin(t) f), complex vector in C^d."""
    return spec.alpha * (
        math.cos(t) * spec.plane.e + math.sin(t) * spec.plane.f
    ).astype(np.complex128)


def _circle_points(spec: CircleSpec, ts: np.ndarray) -> np.ndarray:
    basis = np.outer(np.cos(ts), spec.plane.e) + np.outer(np.sin(ts), spec.plane.f)
    return spec.alpha * basis.astype(np.complex128)


def polar_vertex(v) -> PolarVertex:
    """First two coordinates in polar form; phi in (-pi, pi], phi = 0 when r = 0."""
    v = np.asarray(v, dtype=float)
    r = math.hypot(v[0], v[1])
    phi = math.atan2(v[1], v[0]) if r > 0 else 0.0
    if phi <= -math.pi:
        phi = math.pi
    return PolarVertex(r, phi, tuple(float(x) for x in v[2:]))


def factor_poly(w, spec: CircleSpec) -> TrigPoly:
    """The factor <w, z(t)> as a degree-1 trigonometric polynomial.

    c_{+1} = alpha(<w,e> - i<w,f>)/2 and c_{-1} = alpha(<w,e> + i<w,f>)/2,
    with no constant term.
    """
    w = np.asarray(w, dtype=float)
    we = float(w @ spec.plane.e)
    wf = float(w @ spec.plane.f)
    if we * we + wf * wf <= (geometry.PREDICATE_TOL**2) * float(w @ w):
        raise GeometryError("edge direction orthogonal to the scan plane")
    a = spec.alpha
    return TrigPoly(
        np.array([a * (we + 1j * wf) / 2, 0.0, a * (we - 1j * wf) / 2], dtype=np.complex128)
    )


def _vertex_factor_data(poly: Polytope, spec: CircleSpec) -> list:
    """Per vertex: list of (det, [factor TrigPoly] * d) over its simplicial cones."""
    report = geometry.edge_orthogonality_check(poly, spec.plane)
    if not report.ok:
        raise GeometryError(
            f"edges orthogonal to the scan plane: {list(report.offending)}"
        )
    out = []
    for v in range(poly.n_vertices):
        cells = geometry.triangulate_cone(geometry.tangent_cone(poly, v))
        out.append(
            [(cone.det_abs, [factor_poly(w, spec) for w in cone.generators]) for cone in cells]
        )
    return out


def _own_product(cell_entries) -> TrigPoly:
    prod = trig_const(1.0)
    for _, factors in cell_entries:
        for f in factors:
            prod = trig_mul(prod, f)
    return prod


def big_p(poly: Polytope, spec: CircleSpec) -> TrigPoly:
    """p(t): the product of every factor of every simplicial cone of every vertex."""
    prod = trig_const(1.0)
    for cell_entries in _vertex_factor_data(poly, spec):
        prod = trig_mul(prod, _own_product(cell_entries))
    return prod


def _inner_sum(cell_entries) -> TrigPoly:
    """sum_j det_j * prod_{k != j} (all factors of cell k), division-free."""
    inner = trig_const(0.0)
    for j, (det_j, _) in enumerate(cell_entries):
        prod = trig_const(det_j)
        for k, (_, factors_k) in enumerate(cell_entries):
            if k == j:
                continue
            for f in factors_k:
                prod = trig_mul(prod, f)
        inner = trig_add(inner, prod)
    return inner


def _all_vertex_polys(poly: Polytope, spec: CircleSpec) -> list:
    """p_v(t) for every vertex, computed division-free."""
    data = _vertex_factor_data(poly, spec)
    own = [_own_product(entries) for entries in data]
    polys = []
    for v in range(len(data)):
        q_v = trig_const(1.0)
        for v2, other in enumerate(own):
            if v2 != v:
                q_v = trig_mul(q_v, other)
        polys.append(trig_mul(q_v, _inner_sum(data[v])))
    return polys


def p_v_poly(poly: Polytope, spec: CircleSpec, v: int) -> TrigPoly:
    """p_v(t) = p(t) * sum_j det K_{v,j} / prod_l <w_{j,l}, z(t)>, division-free.

    Equals q_v(t) * sum_j det K_{v,j} prod_{k != j} prod_l <w_{k,l}, z(t)>
    where q_v collects every other vertex's factors.
    """
    data = _vertex_factor_data(poly, spec)
    if not 0 <= v < len(data):
        raise IndexError(f"vertex index {v} out of range")
    q_v = trig_const(1.0)
    for v2, entries in enumerate(data):
        if v2 != v:
            q_v = trig_mul(q_v, _own_product(entries))
    return trig_mul(q_v, _inner_sum(data[v]))


def _series_f_grid(poly: Polytope, vertex_polys: list, spec: CircleSpec, ts: np.ndarray):
    zs = _circle_points(spec, ts)
    total = np.zeros(ts.shape, dtype=np.complex128)
    for v, pv in enumerate(vertex_polys):
        total += pv(ts) * np.exp(-2j * np.pi * (zs @ poly.vertices[v]))
    return total


def series_F(poly: Polytope, spec: CircleSpec, t: float) -> complex:
    """F(t) = sum_v p_v(t) e^{-2 pi i <v, z(t)>}, the cleared-denominator sum."""
    polys = _all_vertex_polys(poly, spec)
    return complex(_series_f_grid(poly, polys, spec, np.asarray([float(t)]))[0])


@dataclass(frozen=True, eq=False)
class FourierTable:
    """DFT coefficient table a_n of a 2-pi-periodic function, n-indexed mod m_grid."""

    m_grid: int
    values: np.ndarray

    def coeff(self, n: int) -> complex:
        if abs(n) > self.m_grid // 2 - 1:
            raise ValueError(
                f"coefficient {n} outside the resolved range of an m_grid={self.m_grid} table"
            )
        return complex(self.values[n % self.m_grid])


def table_from_function(fn, m_grid: int = 512) -> FourierTable:
    """Fourier coefficients of a callable on [0, 2pi), doubling the grid
    until the tail coefficients fall below 1e-13 (aliasing guard)."""
    if m_grid < 8 or m_grid & (m_grid - 1):
        raise ValueError("m_grid must be a power of two >= 8")
    m = m_grid
    while True:
        ts = 2.0 * np.pi * np.arange(m) / m
        coeffs = np.fft.fft(np.asarray(fn(ts), dtype=np.complex128)) / m
        tail = max(abs(coeffs[m // 2 - 1]), abs(coeffs[m // 2 + 1]))
        if tail < 1e-13 or m >= (1 << 15):
            if tail >= 1e-13:
                logger.warning("fourier table tail %.3g at grid cap %d", tail, m)
            return FourierTable(m, coeffs)
        m *= 2


def fourier_coeffs(poly: Polytope, spec: CircleSpec, m_grid: int = 512) -> FourierTable:
    """Fourier coefficients of t -> F(t) on an auto-doubling power-of-two grid."""
    polys = _all_vertex_polys(poly, spec)
    return table_from_function(lambda ts: _series_f_grid(poly, polys, spec, ts), m_grid)


def _coordinate_plane(d: int) -> Plane2:
    e = np.zeros(d)
    e[0] = 1.0
    f = np.zeros(d)
    f[1] = 1.0
    return Plane2(e, f)


def _require_coordinate_plane(plane: Plane2) -> None:
    ref = _coordinate_plane(plane.dim)
    if (
        np.abs(plane.e - ref.e).max() > 1e-12
        or np.abs(plane.f - ref.f).max() > 1e-12
    ):
        raise GeometryError(
            "plane must be in coordinate position span(e1, e2); "
            "rotate the polytope with rotation_to_plane first"
        )


def _lemma_coefficient(poly: Polytope, vertex_polys: list, alpha: complex, n: int) -> complex:
    """a_n = sum_v sum_k c_{v,k} J_{n-k}(2 pi alpha r_v) e^{-i(n-k)(phi_v + pi/2)}."""
    total = 0j
    for v, pvpoly in enumerate(vertex_polys):
        pv = polar_vertex(poly.vertices[v])
        x_v = 2.0 * np.pi * alpha * pv.r
        for k, c in pvpoly.items():
            total += (
                c
                * bessel.bessel_j(n - k, x_v)
                * cmath.exp(-1j * (n - k) * (pv.phi + np.pi / 2))
            )
    return complex(total)


def lemma_lhs(poly: Polytope, spec: CircleSpec, n: int) -> complex:
    """The coefficient-identity value at index n (equals the n-th Fourier
    coefficient of F when the circle machinery is consistent).

    Requires the plane in coordinate position: the polar form of the
    vertices pairs the first coordinate with cos t.
    """
    _require_coordinate_plane(spec.plane)
    polys = _all_vertex_polys(poly, spec)
    return _lemma_coefficient(poly, polys, spec.alpha, n)


@dataclass(frozen=True, eq=False)
class LemmaReport:
    """Coefficient-identity check: per-n identity values vs FFT coefficients."""

    ns: tuple
    lhs: tuple
    fft: tuple
    mismatch: float
    degree: int
    coeff_tables: tuple


def _rotate_to_coordinates(poly: Polytope, spec: CircleSpec):
    """Rotate polytope and circle into coordinate-plane position."""
    rot = geometry.rotation_to_plane(spec.plane)
    poly2 = poly.rotate(rot)
    spec2 = CircleSpec(_coordinate_plane(poly.dim), spec.alpha)
    return poly2, spec2


def lemma_report(poly: Polytope, spec: CircleSpec, n_max: int | None = None,
                 m_grid: int = 512) -> LemmaReport:
    """Check the coefficient identity for |n| <= n_max (default N + 40).

    The polytope is rotated into coordinate-plane position internally; the
    FFT side and the Bessel-sum side are then computed independently.
    """
    poly2, spec2 = _rotate_to_coordinates(poly, spec)
    polys = _all_vertex_polys(poly2, spec2)
    degree = max(p.degree for p in polys)
    if n_max is None:
        n_max = degree + 40
    x_max = 2.0 * np.pi * abs(spec.alpha) * max(
        polar_vertex(v).r for v in poly2.vertices
    )
    if x_max > bessel.MAX_ARG:
        raise ValueError(
            f"|2 pi alpha r_max| = {x_max:.3g} beyond the supported Bessel range"
        )
    table = fourier_coeffs(poly2, spec2, m_grid)
    ns = tuple(range(-n_max, n_max + 1))
    lhs = tuple(_lemma_coefficient(poly2, polys, spec2.alpha, n) for n in ns)
    fft = tuple(table.coeff(n) for n in ns)
    mismatch = max(abs(a - b) for a, b in zip(lhs, fft))
    tables = tuple(tuple(p.items()) for p in polys)
    return LemmaReport(ns, lhs, fft, float(mismatch), degree, tables)


@dataclass(frozen=True, eq=False)
class ProbeResult:
    """Dominant-term asymptotics: scaled coefficient sequence and its limit."""

    ns: tuple
    values: tuple
    target: complex
    degree: int
    u_index: int


def dominant_probe(poly: Polytope, spec: CircleSpec, n_max: int | None = None) -> ProbeResult:
    """Scaled high-order coefficients converging to the top coefficient of
    the farthest vertex.

    scaled(n) = e^{in phi_u} (n-N)! (2 / (2 pi alpha r_u))^{n-N} i^n a_n
    with every Bessel factor J_{n-k}(x_v) replaced by its leading term
    (x_v/2)^{n-k} / (n-k)!, assembled in log space term by term.  The
    (u, N) term then equals the limit c_{u,N} i^N e^{iN phi_u} exactly and
    the rest decays: other vertices are suppressed by (r_v / r_u)^{n-N},
    lower orders of the same vertex by inverse factorial ratios.  Keeping
    the full Bessel series instead would add a (pi alpha r_u)^2 / (n-N)
    deviation from the (u, N) term itself, which at n = N + 40 exceeds any
    practical tolerance for radii beyond ~1.
    """
    poly2, spec2 = _rotate_to_coordinates(poly, spec)
    polys = _all_vertex_polys(poly2, spec2)
    polar = [polar_vertex(v) for v in poly2.vertices]
    radii = np.array([p.r for p in polar])
    u = int(np.argmax(radii))
    r_u = float(radii[u])
    runner_up = float(np.sort(radii)[-2]) if radii.size >= 2 else 0.0
    if r_u <= 0 or runner_up > (1.0 - RADIUS_MARGIN) * r_u:
        raise GeometryError(
            "maximal vertex radius is not unique with a 5% margin; "
            "apply normalize_for_probe first"
        )
    degree = max(p.degree for p in polys)
    c_top = polys[u].coeff(degree)
    # relative to the poly's own scale: coefficients shrink like alpha^N
    if abs(c_top) < 1e-12 * float(np.max(np.abs(polys[u].coeffs))):
        raise GeometryError("degenerate configuration: top coefficient c_{u,N} vanishes")
    if n_max is None:
        n_max = degree + 40
    if n_max <= degree:
        raise ValueError("n_max must exceed the degree N")

    alpha = spec2.alpha
    phi_u = polar[u].phi
    log_xu = cmath.log(np.pi * alpha * r_u)  # log(x_u / 2)
    target = c_top * _I_POW[degree % 4] * cmath.exp(1j * degree * phi_u)

    values = []
    for n in range(degree + 1, n_max + 1):
        m = n - degree
        total = 0j
        lg_m = math.lgamma(m + 1)
        for v, pvpoly in enumerate(polys):
            r_v = polar[v].r
            if r_v == 0.0:
                continue
            x_v = 2.0 * np.pi * alpha * r_v
            log_xv = cmath.log(x_v / 2.0)
            phi_v = polar[v].phi
            for k, c in pvpoly.items():
                log_mag = lg_m - math.lgamma(n - k + 1) + (n - k) * log_xv - m * log_xu
                phase = (
                    _I_POW[n % 4]
                    * cmath.exp(1j * n * phi_u)
                    * cmath.exp(-1j * (n - k) * (phi_v + np.pi / 2))
                )
                total += c * cmath.exp(log_mag) * phase
        values.append(complex(total))
    return ProbeResult(
        tuple(range(degree + 1, n_max + 1)), tuple(values), complex(target), degree, u
    )


def normalize_for_probe(poly: Polytope, plane: Plane2) -> Polytope:
    """Translate the polytope in-plane until one vertex radius dominates.

    Returns the input unchanged when the maximal radius is already unique
    with a 5% margin; otherwise translates by tau * u0 along the in-plane
    unit direction of the first maximal-projection vertex, doubling tau from
    the polytope diameter until the margin holds.
    """

    def radii(p: Polytope) -> np.ndarray:
        return np.hypot(p.vertices @ plane.e, p.vertices @ plane.f)

    def margin_ok(r: np.ndarray) -> bool:
        top = np.sort(r)[::-1]
        return top[0] > 0 and (r.size < 2 or top[1] <= (1.0 - RADIUS_MARGIN) * top[0])

    r = radii(poly)
    if margin_ok(r):
        return poly
    i = int(np.argmax(r))
    if r[i] <= 0:
        raise GeometryError("all vertices project to a single point (cannot separate)")
    u0 = ((poly.vertices[i] @ plane.e) * plane.e + (poly.vertices[i] @ plane.f) * plane.f) / r[i]
    tau = poly.diameter()
    for _ in range(60):
        candidate = poly.translate(tau * u0)
        if margin_ok(radii(candidate)):
            return candidate
        tau *= 2.0
    raise GeometryError("all vertices project to a single point (cannot separate)")


@dataclass(frozen=True)
class ScanRow:
    alpha: complex
    min_modulus: float
    argmin_t: float
    flagged: bool


@dataclass(frozen=True, eq=False)
class ScanReport:
    """Per-alpha minimum transform modulus over the circle, rows sorted by alpha."""

    rows: tuple
    t_grid: int
    threshold: float = FLAG_THRESHOLD


def circle_scan(poly: Polytope, plane: Plane2, alphas, t_grid: int = 256) -> ScanReport:
    """Scan min_t |1-hat_P(z(t))| over circles C_alpha in the given plane.

    The t grid uses cell midpoints t_k = 2 pi (k + 1/2) / t_grid, which keeps
    the samples away from the parameter angles where denominator factors
    vanish by construction (those limits are handled, but a removable-point
    extrapolation residual would be reported instead of a nearby honest
    value). Minima below FLAG_THRESHOLD are flagged for manual inspection
    and never asserted to be zeros.
    """
    if t_grid < 4:
        raise ValueError("t_grid must be at least 4")
    report = geometry.edge_orthogonality_check(poly, plane)
    if not report.ok:
        raise GeometryError(
            f"edges orthogonal to the scan plane: {list(report.offending)}"
        )
    alphas = [complex(a) for a in alphas]
    if any(a == 0 for a in alphas):
        raise ValueError("alpha must be nonzero")

    decomp = transform.ConeDecomposition.from_polytope(poly)
    ts = 2.0 * np.pi * (np.arange(t_grid) + 0.5) / t_grid
    cos_e = np.outer(np.cos(ts), plane.e) + np.outer(np.sin(ts), plane.f)
    rows = []
    for a in sorted(alphas, key=lambda a: (a.real, a.imag)):
        zs = a * cos_e.astype(np.complex128)
        values = transform.brion_transform_many(decomp, zs)
        mods = np.array([abs(tv.value) for tv in values])
        idx = int(np.argmin(mods))
        rows.append(
            ScanRow(a, float(mods[idx]), float(ts[idx]), bool(mods[idx] < FLAG_THRESHOLD))
        )
    return ScanReport(tuple(rows), t_grid)
