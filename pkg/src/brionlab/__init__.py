"""Fourier-Laplace transforms of convex polytopes via the vertex-cone sum,
with Bessel-series circle diagnostics."""

from .bessel import asymptotic_ratio, bessel_j, jacobi_anger_partial
from .geometry import (
    GeometryError,
    Plane2,
    Polytope,
    SimplicialCone,
    TangentCone,
    derive_edges,
    det_cone,
    edge_orthogonality_check,
    load_polytope,
    plane_from_vectors,
    polytope_volume,
    rotation_to_plane,
    tangent_cone,
    triangulate_cone,
    triangulate_polytope,
    vertex_cones,
)
from .nullset import (
    CircleSpec,
    FourierTable,
    LemmaReport,
    PolarVertex,
    ProbeResult,
    ScanReport,
    TrigPoly,
    big_p,
    circle_point,
    circle_scan,
    dominant_probe,
    factor_poly,
    fourier_coeffs,
    lemma_lhs,
    lemma_report,
    normalize_for_probe,
    p_v_poly,
    polar_vertex,
    series_F,
    table_from_function,
    trig_add,
    trig_const,
    trig_mul,
)
from .transform import (
    ConeDecomposition,
    MonteCarloValue,
    TransformError,
    TransformValue,
    box_transform_exact,
    brion_transform,
    brion_transform_many,
    cone_transform,
    monte_carlo_transform,
    simplex_transform_exact,
    two_pi_i_power,
)

__version__ = "0.1.0"

__all__ = [
    "GeometryError",
    "Plane2",
    "Polytope",
    "SimplicialCone",
    "TangentCone",
    "derive_edges",
    "det_cone",
    "edge_orthogonality_check",
    "load_polytope",
    "plane_from_vectors",
    "polytope_volume",
    "rotation_to_plane",
    "tangent_cone",
    "triangulate_cone",
    "triangulate_polytope",
    "vertex_cones",
    "ConeDecomposition",
    "MonteCarloValue",
    "TransformError",
    "TransformValue",
    "box_transform_exact",
    "brion_transform",
    "brion_transform_many",
    "cone_transform",
    "monte_carlo_transform",
    "simplex_transform_exact",
    "two_pi_i_power",
    "asymptotic_ratio",
    "bessel_j",
    "jacobi_anger_partial",
    "CircleSpec",
    "FourierTable",
    "LemmaReport",
    "PolarVertex",
    "ProbeResult",
    "ScanReport",
    "TrigPoly",
    "big_p",
    "circle_point",
    "circle_scan",
    "dominant_probe",
    "factor_poly",
    "fourier_coeffs",
    "lemma_lhs",
    "lemma_report",
    "normalize_for_probe",
    "p_v_poly",
    "polar_vertex",
    "series_F",
    "table_from_function",
    "trig_add",
    "trig_const",
    "trig_mul",
    "__version__",
]
