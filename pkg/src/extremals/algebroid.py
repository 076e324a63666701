"""Lie algebroids as evaluable coordinate data, plus numerical axiom checks.

A Lie algebroid over an ``n``-dimensional base with ``m`` basis sections is
represented by two pure evaluators:

* ``anchor(x)``    -> (n, m) matrix ``rho[i, a]``, the coordinates of the
  image of section ``a`` under the anchor map at base point ``x``;
* ``structure(x)`` -> (m, m, m) tensor ``C[c, a, b]``, the ``e_c`` component
  of the bracket ``[e_a, e_b]`` at ``x``.

Base points are plain float vectors.  Angle-like coordinates are kept as
unbounded reals: the extremal equations only consume their sines and
cosines, and wrapping would corrupt finite differences.

Constraint distributions use an adapted basis: the first ``k`` sections
span the distribution (lowercase indices), the remaining ``m - k`` are the
complementary sections (uppercase indices).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .diff import EvaluationError, central_jacobian

# Default tolerances for the axiom checks.  Compatibility and Jacobi involve
# central finite differences of the fields, so their tolerances must stay
# above the 1e-7 differencing floor; antisymmetry is exact arithmetic.
ANTISYMMETRY_TOL = 1e-12
COMPATIBILITY_TOL = 1e-6
JACOBI_TOL = 1e-6

_PROBE_SEED = 1905


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of one numerical identity check over a sample of points."""

    identity: str
    max_residual: float
    worst_point: np.ndarray
    samples_checked: int
    passed: bool
    tolerance: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.identity} {self.max_residual:.6e} {self.tolerance:g} {status}"


@dataclass(frozen=True)
class LieAlgebroid:
    """Anchor and structure functions over a flat chart of the base.

    Construction probes the structure tensor for antisymmetry at the origin
    and eight fixed pseudo-random points and rejects violations above
    1e-12; antisymmetry on the rest of the chart remains the caller's
    contract (``validate=False`` skips the probe, e.g. for fields that are
    singular near the origin or for deliberately broken test data).
    """

    base_dim: int
    rank: int
    anchor: Callable[[np.ndarray], np.ndarray]
    structure: Callable[[np.ndarray], np.ndarray]
    label: str = ""
    validate: bool = field(default=True, repr=False)

    def __post_init__(self) -> None:
        if self.base_dim < 1 or self.rank < 1:
            raise ValueError("base_dim and rank must be positive")
        if self.validate:
            rng = np.random.default_rng(_PROBE_SEED)
            probes = [np.zeros(self.base_dim)]
            probes += list(rng.uniform(-1.0, 1.0, size=(8, self.base_dim)))
            for x in probes:
                self.anchor_at(x)
                tensor = self.structure_at(x)
                violation = np.max(np.abs(tensor + tensor.transpose(0, 2, 1)))
                if violation > 1e-12:
                    raise ValueError(
                        f"structure tensor of '{self.label}' is not antisymmetric "
                        f"at probe point {x!r} (violation {violation:.3e})"
                    )

    def _check_point(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.base_dim,):
            raise ValueError(
                f"base point has shape {x.shape}, expected ({self.base_dim},)"
            )
        # NaN/inf propagate through the sum, so one scalar check suffices.
        if not np.isfinite(x.sum()):
            raise ValueError("base point has non-finite entries")
        return x

    def anchor_at(self, x: np.ndarray) -> np.ndarray:
        """Evaluate the anchor matrix ``rho[i, a]`` at ``x``."""
        x = self._check_point(x)
        rho = np.asarray(self.anchor(x), dtype=float)
        if rho.shape != (self.base_dim, self.rank):
            raise ValueError(
                f"anchor evaluated to shape {rho.shape}, expected "
                f"({self.base_dim}, {self.rank})"
            )
        if not np.isfinite(rho.sum()):
            raise EvaluationError(f"anchor of '{self.label}' is non-finite at {x!r}")
        return rho

    def structure_at(self, x: np.ndarray) -> np.ndarray:
        """Evaluate the structure tensor ``C[c, a, b]`` at ``x``."""
        x = self._check_point(x)
        tensor = np.asarray(self.structure(x), dtype=float)
        if tensor.shape != (self.rank,) * 3:
            raise ValueError(
                f"structure evaluated to shape {tensor.shape}, expected "
                f"({self.rank}, {self.rank}, {self.rank})"
            )
        if not np.isfinite(tensor.sum()):
            raise EvaluationError(
                f"structure functions of '{self.label}' are non-finite at {x!r}"
            )
        return tensor


@dataclass(frozen=True)
class ConstraintDistribution:
    """Adapted-basis split: sections ``0..k-1`` span the distribution."""

    constrained_rank: int

    def __post_init__(self) -> None:
        if self.constrained_rank < 1:
            raise ValueError("constrained_rank must be at least 1")

    def check_against(self, algebroid: LieAlgebroid) -> None:
        if self.constrained_rank > algebroid.rank:
            raise ValueError(
                f"constrained_rank {self.constrained_rank} exceeds the "
                f"algebroid rank {algebroid.rank}"
            )


def uniform_points(dim: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Sample ``count`` points uniformly from the box [-1, 1]^dim."""
    return rng.uniform(-1.0, 1.0, size=(count, dim))


def _run_check(
    identity: str,
    residual_at: Callable[[np.ndarray], float],
    sample_points: np.ndarray,
    tol: float,
) -> ValidationReport:
    points = np.atleast_2d(np.asarray(sample_points, dtype=float))
    if points.shape[0] == 0:
        raise ValueError("sample_points must be nonempty")
    worst = points[0]
    worst_residual = -1.0
    for x in points:
        residual = residual_at(x)
        if residual > worst_residual:
            worst_residual = residual
            worst = x
    return ValidationReport(
        identity=identity,
        max_residual=worst_residual,
        worst_point=np.array(worst),
        samples_checked=points.shape[0],
        passed=worst_residual <= tol,
        tolerance=tol,
    )


def check_antisymmetry(
    algebroid: LieAlgebroid, sample_points: np.ndarray, tol: float = ANTISYMMETRY_TOL
) -> ValidationReport:
    """Max over samples of ``|C[c,a,b] + C[c,b,a]|``."""

    def residual(x: np.ndarray) -> float:
        tensor = algebroid.structure_at(x)
        return float(np.max(np.abs(tensor + tensor.transpose(0, 2, 1))))

    return _run_check("antisymmetry", residual, sample_points, tol)


def _check_fd_floor(tol: float) -> None:
    # differentiated checks cannot certify below the central-difference floor
    if tol < 1e-7:
        raise ValueError(f"tolerance {tol:g} is below the differencing floor 1e-7")


def check_compatibility(
    algebroid: LieAlgebroid, sample_points: np.ndarray, tol: float = COMPATIBILITY_TOL
) -> ValidationReport:
    """Anchor compatibility: the anchor must intertwine bracket and commutator.

    Residual at ``x``:
    ``R[i,a,b] = rho[j,a] d_j rho[i,b] - rho[j,b] d_j rho[i,a] - rho[i,c] C[c,a,b]``
    with the anchor derivatives taken by central differences.
    """
    _check_fd_floor(tol)

    def residual(x: np.ndarray) -> float:
        rho = algebroid.anchor_at(x)
        d_rho = central_jacobian(algebroid.anchor_at, x)
        tensor = algebroid.structure_at(x)
        lie = np.einsum("ja,ibj->iab", rho, d_rho)
        commutator = lie - lie.transpose(0, 2, 1)
        anchored = np.einsum("ic,cab->iab", rho, tensor)
        return float(np.max(np.abs(commutator - anchored)))

    return _run_check("compatibility", residual, sample_points, tol)


def check_jacobi(
    algebroid: LieAlgebroid, sample_points: np.ndarray, tol: float = JACOBI_TOL
) -> ValidationReport:
    """Jacobi identity residual.

    Residual at ``x``:
    ``J[n,a,b,g] = sum_cyclic(a,b,g) [ rho[i,a] d_i C[n,b,g] + C[n,a,m] C[m,b,g] ]``.
    """
    _check_fd_floor(tol)

    def residual(x: np.ndarray) -> float:
        rho = algebroid.anchor_at(x)
        tensor = algebroid.structure_at(x)
        d_tensor = central_jacobian(algebroid.structure_at, x)
        term = np.einsum("ia,nbgi->nabg", rho, d_tensor)
        term += np.einsum("nam,mbg->nabg", tensor, tensor)
        cyclic = term + term.transpose(0, 3, 1, 2) + term.transpose(0, 2, 3, 1)
        return float(np.max(np.abs(cyclic)))

    return _run_check("jacobi", residual, sample_points, tol)


def standard_checks(
    algebroid: LieAlgebroid, sample_points: np.ndarray
) -> list[ValidationReport]:
    """The three axiom checks at their default tolerances."""
    return [
        check_antisymmetry(algebroid, sample_points),
        check_compatibility(algebroid, sample_points),
        check_jacobi(algebroid, sample_points),
    ]
