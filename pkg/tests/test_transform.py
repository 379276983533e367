import cmath

import mpmath
import numpy as np
import pytest

from brionlab import (
    ConeDecomposition,
    SimplicialCone,
    box_transform_exact,
    brion_transform,
    brion_transform_many,
    cone_transform,
    load_polytope,
    monte_carlo_transform,
    polytope_volume,
    simplex_transform_exact,
    two_pi_i_power,
)
from brionlab.transform import TAU_SING_REL

BOX_REL_TOL = 1e-10
SIMPLEX_REL_TOL = 1e-9
VOLUME_ABS_TOL = 1e-6
EXACT_TOL = 1e-12

# [0,1]^2 at z = (1/2, 0): product of (e^{-2 pi i a} - 1)/(-2 pi i a) factors,
# here (-2)/(-pi i) * 1 = -(2/pi) i
BOX_HALF_VALUE = -0.63661977236758134308j
# [0,1]^2 at z = (1/2, 1/4): (-2 i / pi) * (2/pi)(1 - i) = -(4/pi^2)(1 + i)
BOX_QUARTER_VALUE = -0.40528473456935108578 * (1 + 1j)


def _rel(a, b):
    return abs(a - b) / (1.0 + abs(b))


def test_two_pi_i_power():
    for d in range(1, 5):
        assert two_pi_i_power(d) == pytest.approx((2j * cmath.pi) ** d, rel=1e-15)


def test_box_frozen_values(square):
    z_sing = np.array([0.5, 0.0])
    assert box_transform_exact([0, 0], [1, 1], z_sing) == pytest.approx(
        BOX_HALF_VALUE, abs=1e-15
    )
    z = np.array([0.5, 0.25])
    assert box_transform_exact([0, 0], [1, 1], z) == pytest.approx(
        BOX_QUARTER_VALUE, abs=1e-15
    )
    got = brion_transform(square, z)
    assert not got.perturbed
    assert _rel(got.value, BOX_QUARTER_VALUE) <= BOX_REL_TOL


def test_box_oracle_random_points(square):
    rng = np.random.default_rng(11)
    decomp = ConeDecomposition.from_polytope(square)
    for _ in range(40):
        z = rng.uniform(-2, 2, 2) + 1j * rng.uniform(-1, 1, 2)
        got = brion_transform(square, z, decomp)
        if got.perturbed:
            continue
        want = box_transform_exact([0, 0], [1, 1], z)
        assert _rel(got.value, want) <= BOX_REL_TOL


def test_volume_at_zero(square, triangle, cube, pyramid):
    for poly in (square, triangle, cube, pyramid):
        got = brion_transform(poly, np.zeros(poly.dim))
        assert got.perturbed
        assert abs(got.value - polytope_volume(poly)) <= VOLUME_ABS_TOL


def test_singular_point_extrapolates(square):
    # z = (1, 0) zeroes the vertical-edge factors; the true value is 0
    got = brion_transform(square, np.array([1.0, 0.0]))
    assert got.perturbed
    assert got.min_denom < TAU_SING_REL * 1.0
    assert got.err_estimate > 0
    assert abs(got.value) <= VOLUME_ABS_TOL


def test_perturbed_iff_below_threshold(square):
    decomp = ConeDecomposition.from_polytope(square)
    for z in (np.array([0.3, 0.7]), np.array([1.0, 0.25]), np.array([1e-9, 0.4])):
        got = brion_transform(square, z, decomp)
        scale = decomp.gmax * np.abs(z).max()
        assert got.perturbed == (got.min_denom < TAU_SING_REL * scale)


def test_simplex_oracle_random(triangle):
    rng = np.random.default_rng(23)
    for d in (2, 3):
        verts = rng.uniform(-1, 1, (d + 1, d))
        while abs(np.linalg.det(verts[1:] - verts[0])) < 0.05:
            verts = rng.uniform(-1, 1, (d + 1, d))
        poly = load_polytope({"dim": d, "vertices": verts.tolist()})
        decomp = ConeDecomposition.from_polytope(poly)
        for _ in range(10):
            z = rng.uniform(-1.5, 1.5, d) + 1j * rng.uniform(-0.5, 0.5, d)
            got = brion_transform(poly, z, decomp)
            if got.perturbed:
                continue
            want = simplex_transform_exact(poly.vertices, z)
            assert _rel(got.value, want) <= SIMPLEX_REL_TOL


def test_simplex_exact_at_zero():
    verts = np.array([[0.0, 0.0], [2.0, 0.0], [0.0, 3.0]])
    got = simplex_transform_exact(verts, np.zeros(2))
    assert got == pytest.approx(3.0, abs=EXACT_TOL)


def test_divided_difference_confluent_matches_mpmath():
    # two exponent nodes 1e-8 apart force the confluent series; the oracle
    # recomputes the raw divided-difference table at 60 digits
    verts = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    z = np.array([0.4, 0.4 + 1e-8])
    got = simplex_transform_exact(verts, z)

    mpmath.mp.dps = 60
    mus = [mpmath.mpc(0, -2 * mpmath.pi) * mpmath.fdot(v, z) for v in verts]

    def dd(nodes):
        if len(nodes) == 1:
            return mpmath.exp(nodes[0])
        return (dd(nodes[1:]) - dd(nodes[:-1])) / (nodes[-1] - nodes[0])

    want = mpmath.fabs(mpmath.det(mpmath.matrix((verts[1:] - verts[0]).tolist()))) * dd(mus)
    assert abs(got - complex(want)) / abs(complex(want)) <= SIMPLEX_REL_TOL


def test_monte_carlo_within_four_sigma(pyramid):
    z = np.array([0.35, -0.2, 0.15])
    want = brion_transform(pyramid, z).value
    mc = monte_carlo_transform(pyramid, z, samples=20000, seed=5)
    assert abs(mc.value - want) <= 4.0 * mc.stderr
    again = monte_carlo_transform(pyramid, z, samples=20000, seed=5)
    assert again.value == mc.value and again.stderr == mc.stderr


def test_cone_transform_closed_form():
    cone = SimplicialCone(apex=np.zeros(2), generators=np.eye(2))
    z = np.array([0.8 - 0.5j, 0.3 - 0.7j])
    got = cone_transform(cone, z)
    assert got.convergent
    want = 1.0 / (two_pi_i_power(2) * z[0] * z[1])
    assert got.value == pytest.approx(want, rel=1e-14)
    flipped = cone_transform(cone, np.conj(z))
    assert not flipped.convergent


def test_cone_transform_exact_zero_denominator():
    cone = SimplicialCone(apex=np.zeros(2), generators=np.eye(2))
    with pytest.raises(ZeroDivisionError):
        cone_transform(cone, np.array([0.0, 1.0]))


def test_translation_covariance(triangle):
    rng = np.random.default_rng(3)
    c = rng.uniform(-2, 2, 2)
    z = rng.uniform(0.2, 1.1, 2) + 1j * rng.uniform(-0.3, 0.3, 2)
    lhs = brion_transform(triangle.translate(c), z).value
    rhs = cmath.exp(-2j * np.pi * complex(z @ c)) * brion_transform(triangle, z).value
    assert _rel(lhs, rhs) <= BOX_REL_TOL


def test_rotation_covariance(square):
    theta = 0.7
    rot = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    z = np.array([0.6 + 0.2j, -0.45 + 0.1j])
    lhs = brion_transform(square.rotate(rot), z).value
    rhs = brion_transform(square, rot.T @ z).value
    assert _rel(lhs, rhs) <= BOX_REL_TOL


def test_conjugate_symmetry(pyramid):
    z = np.array([0.5 + 0.3j, -0.2 + 0.6j, 0.8 - 0.1j])
    lhs = brion_transform(pyramid, -np.conj(z)).value
    rhs = np.conj(brion_transform(pyramid, z).value)
    assert _rel(lhs, rhs) <= BOX_REL_TOL


def test_many_matches_single(cube):
    decomp = ConeDecomposition.from_polytope(cube)
    rng = np.random.default_rng(17)
    zs = rng.uniform(0.1, 0.9, (8, 3)) + 1j * rng.uniform(-0.2, 0.2, (8, 3))
    batch = brion_transform_many(decomp, zs)
    for i, tv in enumerate(batch):
        single = brion_transform(cube, zs[i], decomp)
        assert tv.value == single.value
        assert tv.perturbed == single.perturbed


def test_bad_z_shape_raises(square):
    with pytest.raises(ValueError, match="shape"):
        brion_transform(square, np.zeros(3))


def test_pyramid_apex_split_consistent(pyramid):
    # sum of the two apex-cone terms equals the simplex-sum oracle route
    z = np.array([0.31 + 0.07j, 0.44 - 0.12j, 0.59 + 0.2j])
    got = brion_transform(pyramid, z)
    assert not got.perturbed
    tetra1 = pyramid.vertices[[0, 1, 2, 4]]
    tetra2 = pyramid.vertices[[0, 2, 3, 4]]
    want = simplex_transform_exact(tetra1, z) + simplex_transform_exact(tetra2, z)
    assert _rel(got.value, want) <= SIMPLEX_REL_TOL


def test_box_zero_component_branch():
    z = np.array([0.0, 0.3])
    want = box_transform_exact([0, 0], [1, 1], z)
    direct = (np.expm1(-2j * np.pi * 0.3)) / (-2j * np.pi * 0.3)
    assert want == pytest.approx(direct, rel=1e-14)
