"""Algebroid data access and numerical axiom checks."""

import numpy as np
import pytest

import extremals as ex

RNG_SEED = 20260810


def abelian(base_dim=2, rank=2):
    return ex.LieAlgebroid(
        base_dim=base_dim,
        rank=rank,
        anchor=lambda x: np.eye(base_dim, rank),
        structure=lambda x: np.zeros((rank,) * 3),
        label="abelian",
    )


def points(problem_or_dim, count=100, seed=RNG_SEED):
    dim = getattr(problem_or_dim, "base_dim", problem_or_dim)
    return ex.uniform_points(dim, count, np.random.default_rng(seed))


# --- anchor and structure evaluation ---------------------------------------


def test_disc_anchor_rolling_column():
    E = ex.rolling_disc().algebroid
    rho = E.anchor_at(np.zeros(4))
    np.testing.assert_array_equal(rho[:, 0], [1.0, 0.0, 1.0, 0.0])


def test_identity_anchor_tangent_bundle():
    E = abelian()
    x = np.array([0.3, -0.8])
    np.testing.assert_array_equal(E.anchor_at(x), np.eye(2))


def test_rigid_body_anchor_values():
    E = ex.rigid_body(1.0, 1.0).algebroid
    # unconstrained section (internal column 2) at x2=0, x3=pi/2
    rho = E.anchor_at(np.array([0.0, 0.0, np.pi / 2]))
    np.testing.assert_allclose(rho[:, 2], [1.0, 0.0, 0.0], atol=1e-15)
    # first constrained section (internal column 0) at the origin
    rho0 = E.anchor_at(np.zeros(3))
    np.testing.assert_allclose(rho0[:, 0], [1.0, 0.0, 0.0], atol=1e-15)


def test_disc_structure_values():
    E = ex.rolling_disc().algebroid
    # internal order (roll, steer, slide-x, slide-y); conventional labels
    # map slide-x -> 1, slide-y -> 2, roll -> 3, steer -> 4.
    C0 = E.structure_at(np.zeros(4))
    assert C0[2, 0, 1] == 0.0  # C^1_{34} = sin(0)
    assert C0[3, 0, 1] == -1.0  # C^2_{34} = -cos(0)
    assert C0[3, 1, 0] == 1.0  # C^2_{43}
    Cq = E.structure_at(np.array([0.0, 0.0, 0.0, np.pi / 2]))
    assert abs(Cq[2, 0, 1] - 1.0) <= 1e-15  # C^1_{34} = sin(pi/2)
    assert abs(Cq[3, 0, 1]) <= 1e-15  # C^2_{34} = -cos(pi/2)
    nonzero = np.abs(C0) > 0
    assert nonzero.sum() == 2


def test_abelian_structure_is_zero():
    E = abelian()
    np.testing.assert_array_equal(E.structure_at(np.zeros(2)), np.zeros((2, 2, 2)))


def test_rigid_body_structure_constants():
    E = ex.rigid_body(2.0, 3.0).algebroid
    C = E.structure_at(np.array([0.4, -0.2, 0.9]))
    # conventional C^3_{12} = C^1_{23} = C^2_{31} = 1 in internal indices
    assert C[1, 2, 0] == 1.0
    assert C[2, 0, 1] == 1.0
    assert C[0, 1, 2] == 1.0
    assert C[1, 0, 2] == -1.0


def test_evaluators_are_deterministic():
    E = ex.rolling_disc().algebroid
    x = np.array([0.1, -0.7, 0.3, 1.9])
    assert np.array_equal(E.anchor_at(x), E.anchor_at(x))
    assert np.array_equal(E.structure_at(x), E.structure_at(x))


def test_dimension_and_finiteness_errors():
    E = abelian()
    with pytest.raises(ValueError):
        E.anchor_at(np.zeros(3))
    with pytest.raises(ValueError):
        E.structure_at(np.array([np.nan, 0.0]))
    bad = ex.LieAlgebroid(
        base_dim=1,
        rank=1,
        anchor=lambda x: np.array([[np.inf]]),
        structure=lambda x: np.zeros((1, 1, 1)),
        label="bad",
        validate=False,
    )
    with pytest.raises(ex.EvaluationError):
        bad.anchor_at(np.zeros(1))


# --- construction-time antisymmetry probe ----------------------------------


def test_construction_rejects_symmetric_structure():
    def corrupted(x):
        C = np.zeros((2, 2, 2))
        C[0, 0, 1] = 1.0
        C[0, 1, 0] = 1.0
        return C

    with pytest.raises(ValueError, match="antisymmetric"):
        ex.LieAlgebroid(
            base_dim=2, rank=2, anchor=lambda x: np.eye(2), structure=corrupted
        )


def test_construction_rejects_missing_partner():
    def lopsided(x):
        C = np.zeros((3, 3, 3))
        C[2, 0, 1] = 1.0  # no antisymmetric partner
        return C

    with pytest.raises(ValueError, match="antisymmetric"):
        ex.LieAlgebroid(
            base_dim=3, rank=3, anchor=lambda x: np.eye(3), structure=lopsided
        )


# --- antisymmetry check -----------------------------------------------------


def test_antisymmetry_rolling_ball():
    problem = ex.rolling_ball(1.0, 1.0)
    report = ex.check_antisymmetry(problem.algebroid, points(problem))
    assert report.passed
    assert report.max_residual == 0.0
    assert report.samples_checked == 100


def test_antisymmetry_detects_corruption():
    def corrupted(x):
        C = np.zeros((2, 2, 2))
        C[0, 0, 1] = 1.0
        C[0, 1, 0] = 1.0
        return C

    E = ex.LieAlgebroid(
        base_dim=2,
        rank=2,
        anchor=lambda x: np.eye(2),
        structure=corrupted,
        validate=False,
    )
    report = ex.check_antisymmetry(E, points(2, 10), tol=1e-9)
    assert not report.passed
    assert report.max_residual == 2.0


def test_antisymmetry_abelian():
    report = ex.check_antisymmetry(abelian(), points(2, 10))
    assert report.max_residual == 0.0


# --- compatibility check ----------------------------------------------------


def test_compatibility_rolling_disc():
    problem = ex.rolling_disc()
    report = ex.check_compatibility(problem.algebroid, points(problem))
    assert report.passed
    assert report.max_residual <= 1e-6


def test_compatibility_constant_anchor_exact_zero():
    report = ex.check_compatibility(abelian(), points(2, 10))
    assert report.max_residual == 0.0


def test_compatibility_detects_flipped_constant():
    def flipped(x):
        C = ex.rigid_body(1.0, 1.0).algebroid.structure_at(x)
        # flip the conventional C^3_{12} entry (internal [1, 2, 0])
        C[1, 2, 0] = -1.0
        C[1, 0, 2] = 1.0
        return C

    E = ex.LieAlgebroid(
        base_dim=3,
        rank=3,
        anchor=ex.rigid_body(1.0, 1.0).algebroid.anchor,
        structure=flipped,
        label="flipped",
    )
    report = ex.check_compatibility(E, points(3, 5))
    assert not report.passed
    assert report.max_residual >= 1.0


# --- Jacobi check -----------------------------------------------------------


def test_jacobi_rigid_body_exact_zero():
    report = ex.check_jacobi(ex.rigid_body(1.0, 2.0).algebroid, points(3, 20))
    assert report.max_residual == 0.0


def test_jacobi_rolling_ball():
    problem = ex.rolling_ball(1.0, 1.0)
    report = ex.check_jacobi(problem.algebroid, points(problem))
    assert report.passed
    assert report.max_residual <= 1e-6


def test_jacobi_nilpotent_pattern():
    def nilpotent(x):
        C = np.zeros((3, 3, 3))
        C[2, 0, 1] = 1.0
        C[2, 1, 0] = -1.0
        return C

    E = ex.LieAlgebroid(
        base_dim=3, rank=3, anchor=lambda x: np.zeros((3, 3)), structure=nilpotent
    )
    report = ex.check_jacobi(E, points(3, 10))
    assert report.max_residual == 0.0


# --- plumbing ----------------------------------------------------------------


def test_empty_sample_list_rejected():
    with pytest.raises(ValueError):
        ex.check_antisymmetry(abelian(), np.empty((0, 2)))


def test_differentiated_checks_reject_tight_tolerance():
    with pytest.raises(ValueError, match="floor"):
        ex.check_compatibility(abelian(), points(2, 3), tol=1e-9)
    with pytest.raises(ValueError, match="floor"):
        ex.check_jacobi(abelian(), points(2, 3), tol=1e-8)


def test_report_line_format():
    report = ex.check_antisymmetry(abelian(), points(2, 3), tol=1e-12)
    assert report.line() == "antisymmetry 0.000000e+00 1e-12 PASS"


def test_worst_point_recorded():
    def skewed(x):
        C = np.zeros((2, 2, 2))
        C[0, 0, 1] = x[0]
        C[0, 1, 0] = x[0]
        return C

    E = ex.LieAlgebroid(
        base_dim=1,
        rank=2,
        anchor=lambda x: np.zeros((1, 2)),
        structure=skewed,
        validate=False,
    )
    sample = np.array([[0.1], [0.9], [-0.5]])
    report = ex.check_antisymmetry(E, sample, tol=1e-9)
    np.testing.assert_array_equal(report.worst_point, [0.9])
    assert report.max_residual == pytest.approx(1.8)


def test_distribution_bounds():
    with pytest.raises(ValueError):
        ex.ConstraintDistribution(constrained_rank=0)
    D = ex.ConstraintDistribution(constrained_rank=3)
    with pytest.raises(ValueError):
        D.check_against(abelian())
