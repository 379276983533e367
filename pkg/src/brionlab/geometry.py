"""Polytope geometry: vertex/edge representation, tangent cones, simplicial
triangulations of cones and of the polytope body, and plane utilities.

Polytopes are given by their vertices (V-representation) with an optional
edge list; everything else (facets, edges, cones, triangulations) is derived
by brute-force enumeration, which is exact enough at desk scale (n <= 64
vertices, small-integer-ish coordinates).
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np
from scipy.optimize import linprog

logger = logging.getLogger(__name__)

# Absolute tolerance for geometric predicates (sidedness, incidence).
PREDICATE_TOL = 1e-9
# Tolerance for orthonormality invariants of planes and rotations.
ORTHO_TOL = 1e-12

MAX_VERTICES = 64


class GeometryError(ValueError):
    """Invalid or degenerate geometric input."""


@dataclass(frozen=True, eq=False)
class Polytope:
    """Full-dimensional convex polytope in R^d given by vertices and edges.

    vertices has shape (n, d); edges is a tuple of sorted index pairs.
    Instances are immutable and safe to share between threads.
    """

    dim: int
    vertices: np.ndarray
    edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", np.asarray(self.vertices, dtype=float))
        object.__setattr__(self, "edges", tuple(tuple(sorted(e)) for e in self.edges))

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    def neighbors(self, v: int) -> list[int]:
        """Indices adjacent to vertex v, in increasing order."""
        out = []
        for i, j in self.edges:
            if i == v:
                out.append(j)
            elif j == v:
                out.append(i)
        return sorted(out)

    def translate(self, c) -> "Polytope":
        c = np.asarray(c, dtype=float)
        return Polytope(self.dim, self.vertices + c, self.edges)

    def rotate(self, rot: np.ndarray) -> "Polytope":
        """Apply an orthogonal map x -> rot @ x to every vertex."""
        return Polytope(self.dim, self.vertices @ np.asarray(rot, dtype=float).T, self.edges)

    def diameter(self) -> float:
        diffs = self.vertices[:, None, :] - self.vertices[None, :, :]
        return float(np.sqrt((diffs**2).sum(-1)).max())


@dataclass(frozen=True, eq=False)
class TangentCone:
    """Cone of directions into the polytope at a vertex.

    Generators are the unnormalized edge directions u - v, one per neighbor
    u of the apex vertex, in neighbor-index order.
    """

    apex_index: int
    apex: np.ndarray
    generators: np.ndarray  # (m, d)


@dataclass(frozen=True, eq=False)
class SimplicialCone:
    """Pointed cone with exactly d linearly independent generators."""

    apex: np.ndarray
    generators: np.ndarray  # (d, d), one generator per row
    det_abs: float = field(default=0.0)

    def __post_init__(self):
        gens = np.asarray(self.generators, dtype=float)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "apex", np.asarray(self.apex, dtype=float))
        if self.det_abs == 0.0:
            object.__setattr__(self, "det_abs", abs(float(np.linalg.det(gens))))
        if self.det_abs <= 0.0:
            raise GeometryError("simplicial cone has linearly dependent generators")


@dataclass(frozen=True, eq=False)
class Plane2:
    """Two-dimensional plane given by an orthonormal basis pair (e, f)."""

    e: np.ndarray
    f: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.e, dtype=float)
        f = np.asarray(self.f, dtype=float)
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "f", f)
        if abs(e @ e - 1.0) > ORTHO_TOL or abs(f @ f - 1.0) > ORTHO_TOL:
            raise GeometryError("plane basis vectors must be unit length")
        if abs(e @ f) > ORTHO_TOL:
            raise GeometryError("plane basis vectors must be orthogonal")

    @property
    def dim(self) -> int:
        return self.e.shape[0]


@dataclass(frozen=True)
class OrthogonalityReport:
    """Result of checking a plane against all edge directions."""

    ok: bool
    offending: tuple


def plane_from_vectors(u, v) -> Plane2:
    """Orthonormalize two spanning vectors into a Plane2.

    Raises GeometryError if the vectors do not span a 2-dimensional space.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    nu = np.linalg.norm(u)
    if nu <= PREDICATE_TOL:
        raise GeometryError("plane vector has zero length")
    e = u / nu
    w = v - (v @ e) * e
    nw = np.linalg.norm(w)
    if nw <= PREDICATE_TOL * max(1.0, np.linalg.norm(v)):
        raise GeometryError("plane vectors are collinear (rank < 2)")
    f = w / nw
    return Plane2(e, f)


# ---------------------------------------------------------------------------
# Facet and edge enumeration
# ---------------------------------------------------------------------------


def _hyperplane_through(points: np.ndarray):
    """Unit normal and offset of the hyperplane through d points, or None if
    the points are affinely dependent."""
    diffs = points[1:] - points[0]
    _, s, vt = np.linalg.svd(diffs)
    # all d-1 difference vectors must be independent for a unique hyperplane
    if s.size == 0 or s[-1] <= PREDICATE_TOL * max(1.0, s[0]):
        return None
    normal = vt[-1]
    return normal, float(normal @ points[0])


def polytope_facets(vertices: np.ndarray, dim: int) -> list:
    """Enumerate facet hyperplanes of conv(vertices) by brute force.

    Tests every affinely independent d-subset's hyperplane for one-sidedness
    of the remaining vertices and merges coplanar subsets (same incident
    vertex set). Returns a list of (outward_unit_normal, offset,
    incident_index_tuple) triples, deterministically ordered.

    Raises GeometryError if the vertex set is not full-dimensional or some
    vertex lies on no facet (strictly inside the hull).
    """
    vertices = np.asarray(vertices, dtype=float)
    n = vertices.shape[0]
    if n > MAX_VERTICES:
        raise GeometryError(f"too many vertices ({n} > {MAX_VERTICES})")
    if n < dim + 1:
        raise GeometryError("need at least d+1 vertices")
    rank = np.linalg.matrix_rank(vertices[1:] - vertices[0], tol=PREDICATE_TOL)
    if rank < dim:
        raise GeometryError("vertex set is not full-dimensional (degenerate input)")

    facets = {}
    for subset in combinations(range(n), dim):
        hp = _hyperplane_through(vertices[list(subset)])
        if hp is None:
            continue
        normal, offset = hp
        side = vertices @ normal - offset
        if np.all(side <= PREDICATE_TOL):
            pass  # normal already points away from the body
        elif np.all(side >= -PREDICATE_TOL):
            normal, offset, side = -normal, -offset, -side
        else:
            continue
        incident = tuple(np.nonzero(np.abs(side) <= PREDICATE_TOL)[0])
        facets.setdefault(incident, (normal, offset))

    covered = set()
    for incident in facets:
        covered.update(incident)
    missing = sorted(set(range(n)) - covered)
    if missing:
        raise GeometryError(f"vertices {missing} lie strictly inside the hull")

    return [(nrm, off, inc) for inc, (nrm, off) in sorted(facets.items())]


def derive_edges(vertices: np.ndarray, dim: int) -> list:
    """Edge pairs of conv(vertices) from facet incidence.

    A pair (i, j) is an edge iff the normals of the facets containing both
    endpoints span a space of rank d-1.
    """
    facets = polytope_facets(vertices, dim)
    n = np.asarray(vertices).shape[0]
    edges = []
    for i, j in combinations(range(n), 2):
        normals = [nrm for nrm, _, inc in facets if i in inc and j in inc]
        if len(normals) < dim - 1:
            continue
        if np.linalg.matrix_rank(np.array(normals), tol=PREDICATE_TOL) == dim - 1:
            edges.append((i, j))
    return edges


# ---------------------------------------------------------------------------
# Loading and validation
# ---------------------------------------------------------------------------

_SCHEMA_FIELDS = {"dim", "vertices", "edges"}


def _vertex_is_redundant(vertices: np.ndarray, i: int) -> bool:
    """Linear feasibility test: is vertex i a convex combination of the others?"""
    others = np.delete(vertices, i, axis=0)
    a_eq = np.vstack([others.T, np.ones(others.shape[0])])
    b_eq = np.concatenate([vertices[i], [1.0]])
    res = linprog(
        c=np.zeros(others.shape[0]),
        A_eq=a_eq,
        b_eq=b_eq,
        bounds=(0, None),
        method="highs",
    )
    return bool(res.status == 0)


def load_polytope(source) -> Polytope:
    """Build a validated Polytope from a schema document.

    ``source`` may be a mapping, a JSON string, or a path to a JSON file with
    fields {"dim": int, "vertices": [[float, ...], ...], "edges":
    [[int, int], ...]} where "edges" is optional (derived when absent).
    Unknown fields are rejected.
    """
    if isinstance(source, (str, Path)):
        path = Path(source)
        if path.exists():
            doc = json.loads(path.read_text())
        else:
            doc = json.loads(str(source))
    else:
        doc = source
    if not isinstance(doc, dict):
        raise GeometryError("polytope document must be a JSON object")
    unknown = set(doc) - _SCHEMA_FIELDS
    if unknown:
        raise GeometryError(f"unknown fields in polytope document: {sorted(unknown)}")
    if "dim" not in doc or "vertices" not in doc:
        raise GeometryError("polytope document requires 'dim' and 'vertices'")

    dim = doc["dim"]
    if not isinstance(dim, int) or dim < 2:
        raise GeometryError("'dim' must be an integer >= 2")
    vertices = np.asarray(doc["vertices"], dtype=float)
    if vertices.ndim != 2 or vertices.shape[1] != dim:
        raise GeometryError(f"'vertices' must be an n x {dim} array")
    n = vertices.shape[0]
    if n < dim + 1:
        raise GeometryError("need at least d+1 vertices")
    if n > MAX_VERTICES:
        raise GeometryError(f"too many vertices ({n} > {MAX_VERTICES})")

    dists = np.sqrt(((vertices[:, None, :] - vertices[None, :, :]) ** 2).sum(-1))
    np.fill_diagonal(dists, np.inf)
    if dists.min() <= PREDICATE_TOL:
        raise GeometryError("vertices are not pairwise distinct")
    rank = np.linalg.matrix_rank(vertices[1:] - vertices[0], tol=PREDICATE_TOL)
    if rank < dim:
        raise GeometryError("vertex set is not full-dimensional (degenerate input)")
    for i in range(n):
        if _vertex_is_redundant(vertices, i):
            raise GeometryError(f"vertex {i} is a convex combination of the others")

    if doc.get("edges") is None:
        edges = derive_edges(vertices, dim)
    else:
        edges = []
        for pair in doc["edges"]:
            i, j = int(pair[0]), int(pair[1])
            if not (0 <= i < n and 0 <= j < n):
                raise GeometryError(f"edge {pair} references a missing vertex")
            if i == j:
                raise GeometryError(f"edge {pair} is reflexive")
            edges.append((min(i, j), max(i, j)))
        edges = sorted(set(edges))

    incidence = np.zeros(n, dtype=int)
    for i, j in edges:
        incidence[i] += 1
        incidence[j] += 1
    lonely = np.nonzero(incidence < dim)[0]
    if lonely.size:
        raise GeometryError(
            f"vertices {lonely.tolist()} have fewer than {dim} incident edges"
        )
    logger.debug("loaded polytope: d=%d, %d vertices, %d edges", dim, n, len(edges))
    return Polytope(dim, vertices, tuple(edges))


# ---------------------------------------------------------------------------
# Tangent cones and their triangulation
# ---------------------------------------------------------------------------


def tangent_cone(poly: Polytope, v: int) -> TangentCone:
    """Tangent cone at vertex v, generated by its edge directions."""
    if not 0 <= v < poly.n_vertices:
        raise IndexError(f"vertex index {v} out of range")
    nbrs = poly.neighbors(v)
    gens = poly.vertices[nbrs] - poly.vertices[v]
    return TangentCone(v, poly.vertices[v], gens)


def det_cone(cone: SimplicialCone) -> float:
    """Absolute determinant of the generator matrix."""
    return abs(float(np.linalg.det(cone.generators)))


def _pointed_direction(unit_gens: np.ndarray):
    """A vector a with <a, w> > 0 for all unit generators w, or None."""
    a = unit_gens.mean(axis=0)
    norm = np.linalg.norm(a)
    if norm > PREDICATE_TOL:
        a = a / norm
        if (unit_gens @ a).min() > PREDICATE_TOL:
            return a
    # Feasibility solve: maximize s subject to <a, w> >= s, |a_i| <= 1.
    m, d = unit_gens.shape
    c = np.zeros(d + 1)
    c[-1] = -1.0
    a_ub = np.hstack([-unit_gens, np.ones((m, 1))])
    res = linprog(
        c,
        A_ub=a_ub,
        b_ub=np.zeros(m),
        bounds=[(-1, 1)] * d + [(0, 1)],
        method="highs",
    )
    if res.status != 0 or res.x[-1] <= PREDICATE_TOL:
        return None
    a = res.x[:-1]
    return a / np.linalg.norm(a)


def _facet_outward_normal(facet_pts: np.ndarray, opposite: np.ndarray):
    """Unit normal of a cell facet, oriented away from the opposite vertex."""
    k = facet_pts.shape[1]
    diffs = facet_pts[1:] - facet_pts[0]
    if diffs.shape[0] == 0:
        normal = np.ones(k)
    else:
        _, _, vt = np.linalg.svd(diffs)
        normal = vt[-1]
    if normal @ (opposite - facet_pts[0]) > 0:
        normal = -normal
    return normal


def placing_triangulation(points: np.ndarray) -> list:
    """Incremental (placing) triangulation of points in R^k, in input order.

    The initial cell is the earliest affinely independent (k+1)-subset;
    each later point is joined to the boundary facets it sees. Points inside
    the current hull (non-extreme) are skipped. Returns sorted index tuples.
    """
    points = np.asarray(points, dtype=float)
    m, k = points.shape
    scale = max(1.0, float(np.abs(points).max()))
    tol = PREDICATE_TOL * scale

    init = [0]
    for i in range(1, m):
        cand = points[init + [i]]
        if np.linalg.matrix_rank(cand[1:] - cand[0], tol=tol) > len(init) - 1:
            init.append(i)
        if len(init) == k + 1:
            break
    if len(init) < k + 1:
        raise GeometryError("points do not affinely span the space")

    cells = [tuple(sorted(init))]
    placed = set(init)
    for q in range(m):
        if q in placed:
            continue
        placed.add(q)
        counts = {}
        owner = {}
        for cell in cells:
            for drop in cell:
                facet = tuple(i for i in cell if i != drop)
                counts[facet] = counts.get(facet, 0) + 1
                owner[facet] = drop
        new_cells = []
        for facet, cnt in counts.items():
            if cnt != 1:
                continue
            fpts = points[list(facet)]
            normal = _facet_outward_normal(fpts, points[owner[facet]])
            if normal @ (points[q] - fpts[0]) > tol:
                new_cells.append(tuple(sorted(facet + (q,))))
        cells.extend(new_cells)
    return cells


def triangulate_cone(cone: TangentCone) -> list:
    """Split a pointed tangent cone into simplicial cones with no new rays.

    Cuts the cone with a hyperplane <a, x> = 1 chosen so all generators
    cross it, triangulates the cross-section polytope by a placing
    triangulation in generator input order, and lifts each cell back.
    """
    gens = np.asarray(cone.generators, dtype=float)
    m, d = gens.shape
    if m < d:
        raise GeometryError("cone has fewer generators than the dimension")
    norms = np.linalg.norm(gens, axis=1)
    if norms.min() <= PREDICATE_TOL:
        raise GeometryError("zero-length generator")
    if np.linalg.matrix_rank(gens, tol=PREDICATE_TOL) < d:
        raise GeometryError("generators do not span the space")
    if m == d:
        return [SimplicialCone(cone.apex, gens)]

    unit = gens / norms[:, None]
    a = _pointed_direction(unit)
    if a is None:
        raise GeometryError("cone is not pointed")
    cross = unit / (unit @ a)[:, None]
    center = a / (a @ a)
    _, _, vt = np.linalg.svd(a[None, :])
    basis = vt[1:]  # orthonormal basis of the cutting hyperplane
    local = (cross - center) @ basis.T

    cells = placing_triangulation(local)
    cones = []
    for cell in cells:
        cones.append(SimplicialCone(cone.apex, gens[list(cell)]))
    logger.debug(
        "triangulated cone at vertex %d: %d generators -> %d cells",
        cone.apex_index, m, len(cones),
    )
    return cones


def vertex_cones(poly: Polytope) -> list:
    """Simplicial cones of every vertex tangent cone, as a list per vertex."""
    return [triangulate_cone(tangent_cone(poly, v)) for v in range(poly.n_vertices)]


# ---------------------------------------------------------------------------
# Planes, rotations, polytope triangulation
# ---------------------------------------------------------------------------


def rotation_to_plane(plane: Plane2) -> np.ndarray:
    """Orthogonal matrix sending the plane basis (e, f) to (e1, e2).

    Rows beyond the first two are completed by orthonormalizing standard
    basis vectors against {e, f}.
    """
    d = plane.dim
    rows = [plane.e.copy(), plane.f.copy()]
    for i in range(d):
        if len(rows) == d:
            break
        cand = np.zeros(d)
        cand[i] = 1.0
        for _ in range(2):  # twice-is-enough reorthogonalization
            for r in rows:
                cand = cand - (cand @ r) * r
        norm = np.linalg.norm(cand)
        if norm > 1e-6:
            rows.append(cand / norm)
    if len(rows) < d:
        raise GeometryError("failed to complete orthonormal basis")
    return np.array(rows)


def edge_orthogonality_check(poly: Polytope, plane: Plane2) -> OrthogonalityReport:
    """Check that no edge direction is orthogonal to the plane.

    An edge w offends when <w,e>^2 + <w,f>^2 <= tol^2 * |w|^2.
    """
    offending = []
    for i, j in poly.edges:
        w = poly.vertices[j] - poly.vertices[i]
        in_plane = (w @ plane.e) ** 2 + (w @ plane.f) ** 2
        if in_plane <= (PREDICATE_TOL**2) * float(w @ w):
            offending.append((i, j))
    return OrthogonalityReport(not offending, tuple(offending))


def _affine_basis(points: np.ndarray, k: int) -> np.ndarray:
    """Orthonormal basis (k rows) of the affine hull direction space."""
    diffs = points[1:] - points[0]
    _, s, vt = np.linalg.svd(diffs)
    if s.size < k or s[k - 1] <= PREDICATE_TOL * max(1.0, s[0]):
        raise GeometryError("face is degenerate")
    return vt[:k]


def _triangulate_face(vertices: np.ndarray, idxs: tuple, k: int) -> list:
    if len(idxs) == k + 1:
        return [tuple(sorted(idxs))]
    apex = min(idxs)
    sub = vertices[list(idxs)]
    basis = _affine_basis(sub, k)
    local = (sub - sub[0]) @ basis.T
    simplices = []
    for _, _, inc in polytope_facets(local, k):
        face = tuple(idxs[i] for i in inc)
        if apex in face:
            continue
        for cell in _triangulate_face(vertices, face, k - 1):
            simplices.append(tuple(sorted((apex,) + cell)))
    return simplices


def triangulate_polytope(poly: Polytope) -> list:
    """Pulling triangulation of the polytope body into d-simplices.

    Cones from the smallest vertex index over recursively triangulated
    facets that do not contain it. Returns (d+1)-index tuples.
    """
    return _triangulate_face(poly.vertices, tuple(range(poly.n_vertices)), poly.dim)


def polytope_volume(poly: Polytope) -> float:
    """Volume via the pulling triangulation."""
    total = 0.0
    fact = math.factorial(poly.dim)
    for simplex in triangulate_polytope(poly):
        pts = poly.vertices[list(simplex)]
        total += abs(float(np.linalg.det(pts[1:] - pts[0]))) / fact
    return total
