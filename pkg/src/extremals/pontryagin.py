"""Pontryagin Hamiltonians and extremal vector fields on a Lie algebroid.

Two optimal control problems over a constraint distribution spanned by the
first ``k`` basis sections:

* **kinematic** -- the constrained quasi-velocities are the controls.  The
  Hamiltonian is ``H = mu_a u^a - cost(x, u)`` and the maximum principle
  pins the controls through ``mu_a = d cost / d u^a``.  Extremal field::

      dx[i]  = rho[i, a] u[a]
      dmu[c] = rho[i, c] dcost_dx[i] - mu[g] C[g, c, b] u[b]

  with ``c`` ranging over all sections, ``b`` over the constrained ones.

* **dynamic** -- the constrained accelerations are the controls, with an
  extra momentum ``pi`` conjugate to them.  ``H = mu_a y^a + pi_a u^a -
  cost(x, y, u)``, controls pinned by ``pi_a = d cost / d u^a``::

      dx[i]  = rho[i, a] y[a]
      dy[a]  = u[a]
      dpi[a] = dcost_dy[a] - mu[a]
      dmu[c] = rho[i, c] dcost_dx[i] - mu[g] C[g, c, b] y[b]

  Generalized-force controls are covered through the feedback that
  identifies a force with a multiple of the acceleration; the example
  problems apply it where needed.

Abnormal extremals drop the cost term (``H = mu_a u^a``), which forces
``mu_a = 0`` (and ``pi = 0`` in the dynamic case) and leaves the controls
undetermined; callers supply them and the functions report the algebraic
admissibility residuals alongside the derivative.

Controls are eliminated pointwise inside the extremal fields by a damped
Newton solve, so the flow lives on the momentum phase space alone.  All
builders return pure closures over immutable problem data.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import partial
from typing import Callable

import numpy as np

from .algebroid import ConstraintDistribution, LieAlgebroid
from .diff import REL_STEP, central_gradient

CONTROL_TOL = 1e-10
CONTROL_MAX_ITER = 50
HESSIAN_COND_LIMIT = 1e12
ABNORMAL_TOL = 1e-9


class ControlSolveError(RuntimeError):
    """The pointwise optimal-control solve failed."""


class RegularityError(ControlSolveError):
    """Singular or nearly singular control Hessian."""


class ConvergenceError(ControlSolveError):
    """Newton iteration exceeded its budget."""


class KinematicCost:
    """Running cost ``cost(x, u)`` with gradients in both slots.

    Analytic gradients are optional; missing ones fall back to central
    differences of ``value``.  Supplied gradients should match the central
    differences to about 1e-6 (see :meth:`gradient_deviation`).
    """

    def __init__(
        self,
        value: Callable[[np.ndarray, np.ndarray], float],
        grad_x: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None,
        grad_u: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None,
    ) -> None:
        self.value = value
        self.grad_x = grad_x or (
            lambda x, u: central_gradient(lambda p: value(p, u), x)
        )
        self.grad_u = grad_u or (
            lambda x, u: central_gradient(lambda c: value(x, c), u)
        )
        self._analytic = (grad_x is not None, grad_u is not None)

    def gradient_deviation(self, x: np.ndarray, u: np.ndarray) -> float:
        """Max deviation of the supplied gradients from central differences."""
        worst = 0.0
        if self._analytic[0]:
            fd = central_gradient(lambda p: self.value(p, u), x)
            worst = max(worst, float(np.max(np.abs(self.grad_x(x, u) - fd), initial=0.0)))
        if self._analytic[1]:
            fd = central_gradient(lambda c: self.value(x, c), u)
            worst = max(worst, float(np.max(np.abs(self.grad_u(x, u) - fd), initial=0.0)))
        return worst


class DynamicCost:
    """Running cost ``cost(x, y, u)`` with gradients in all three slots."""

    def __init__(
        self,
        value: Callable[[np.ndarray, np.ndarray, np.ndarray], float],
        grad_x: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray] | None = None,
        grad_y: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray] | None = None,
        grad_u: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray] | None = None,
    ) -> None:
        self.value = value
        self.grad_x = grad_x or (
            lambda x, y, u: central_gradient(lambda p: value(p, y, u), x)
        )
        self.grad_y = grad_y or (
            lambda x, y, u: central_gradient(lambda v: value(x, v, u), y)
        )
        self.grad_u = grad_u or (
            lambda x, y, u: central_gradient(lambda c: value(x, y, c), u)
        )
        self._analytic = (grad_x is not None, grad_y is not None, grad_u is not None)

    def gradient_deviation(self, x: np.ndarray, y: np.ndarray, u: np.ndarray) -> float:
        worst = 0.0
        slots = (
            (self._analytic[0], self.grad_x, lambda p: self.value(p, y, u), x),
            (self._analytic[1], self.grad_y, lambda v: self.value(x, v, u), y),
            (self._analytic[2], self.grad_u, lambda c: self.value(x, y, c), u),
        )
        for analytic, grad, scalar, at in slots:
            if analytic:
                fd = central_gradient(scalar, at)
                worst = max(
                    worst, float(np.max(np.abs(grad(x, y, u) - fd), initial=0.0))
                )
        return worst


@dataclass(frozen=True)
class KinematicState:
    """Extremal state ``(x, mu)``; ``mu`` holds all ``m`` momenta."""

    x: np.ndarray
    mu: np.ndarray

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.x, self.mu])

    @classmethod
    def from_vector(cls, vec: np.ndarray, base_dim: int) -> "KinematicState":
        vec = np.asarray(vec, dtype=float)
        return cls(x=vec[:base_dim], mu=vec[base_dim:])


@dataclass(frozen=True)
class DynamicState:
    """Extremal state ``(x, y, mu, pi)``; ``y`` and ``pi`` have length ``k``."""

    x: np.ndarray
    y: np.ndarray
    mu: np.ndarray
    pi: np.ndarray

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.x, self.y, self.mu, self.pi])

    @classmethod
    def from_vector(
        cls, vec: np.ndarray, base_dim: int, constrained: int, rank: int
    ) -> "DynamicState":
        vec = np.asarray(vec, dtype=float)
        n, k = base_dim, constrained
        return cls(
            x=vec[:n],
            y=vec[n : n + k],
            mu=vec[n + k : n + k + rank],
            pi=vec[n + k + rank :],
        )


@dataclass(frozen=True)
class ControlSolve:
    """Result of a pointwise optimal-control solve."""

    u: np.ndarray
    iterations: int
    residual: float


def _scalar_inverse(rows: list[list[float]], k: int) -> list[list[float]]:
    """Inverse of a k x k Hessian (k <= 3) in plain floats for speed."""
    if k == 1:
        det = rows[0][0]
        if det == 0.0:
            raise RegularityError("control Hessian is singular")
        return [[1.0 / det]]
    if k == 2:
        (a, b), (c, d) = rows
        det = a * d - b * c
        if det == 0.0:
            raise RegularityError("control Hessian is singular")
        return [[d / det, -b / det], [-c / det, a / det]]
    (a, b, c), (d, e, f), (g, h, i) = rows
    co00 = e * i - f * h
    co01 = c * h - b * i
    co02 = b * f - c * e
    co10 = f * g - d * i
    co11 = a * i - c * g
    co12 = c * d - a * f
    co20 = d * h - e * g
    co21 = b * g - a * h
    co22 = a * e - b * d
    det = a * co00 + b * co10 + c * co20
    if det == 0.0:
        raise RegularityError("control Hessian is singular")
    return [
        [co00 / det, co01 / det, co02 / det],
        [co10 / det, co11 / det, co12 / det],
        [co20 / det, co21 / det, co22 / det],
    ]


def _one_norm(rows: list[list[float]], k: int) -> float:
    return max(sum(abs(rows[i][j]) for i in range(k)) for j in range(k))


def _newton_controls(
    gradient: Callable[[np.ndarray], np.ndarray],
    target: np.ndarray,
    guess: np.ndarray,
    tol: float = CONTROL_TOL,
    max_iter: int = CONTROL_MAX_ITER,
) -> ControlSolve:
    """Solve ``gradient(u) = target`` by damped Newton with an FD Hessian.

    The Jacobian of ``gradient`` is the control Hessian of the cost; it must
    stay invertible with 1-norm condition below 1e12 (the regularity
    assumption behind the pointwise elimination of the controls).  The
    linear algebra runs in plain floats: control spaces here are tiny and
    numpy dispatch would dominate the inner integration loops.
    """
    u = [float(v) for v in np.asarray(guess, dtype=float)]
    k = len(u)
    tgt = np.asarray(target, dtype=float).tolist()
    if k > 3:
        return _newton_controls_wide(gradient, np.asarray(target, float), guess, tol, max_iter)

    def residual_at(point: list[float]) -> list[float]:
        values = np.asarray(gradient(np.array(point)), dtype=float)
        if values.shape != (k,):
            raise ValueError(
                f"control gradient has shape {values.shape}, expected ({k},)"
            )
        return [v - t for v, t in zip(values.tolist(), tgt)]

    res = residual_at(u)
    norm = max(abs(r) for r in res)
    for iteration in range(1, max_iter + 1):
        columns = []
        for j in range(k):
            h = REL_STEP * max(1.0, abs(u[j]))
            up = list(u)
            um = list(u)
            up[j] += h
            um[j] -= h
            plus = np.asarray(gradient(np.array(up)), dtype=float).tolist()
            minus = np.asarray(gradient(np.array(um)), dtype=float).tolist()
            columns.append([(p - m) / (2.0 * h) for p, m in zip(plus, minus)])
        rows = [[columns[j][i] for j in range(k)] for i in range(k)]
        inverse = _scalar_inverse(rows, k)
        condition = _one_norm(rows, k) * _one_norm(inverse, k)
        if not condition <= HESSIAN_COND_LIMIT:
            raise RegularityError(
                f"control Hessian condition {condition:.3e} exceeds "
                f"{HESSIAN_COND_LIMIT:.0e}"
            )
        step = [-sum(inverse[i][j] * res[j] for j in range(k)) for i in range(k)]
        scale = 1.0
        for _ in range(30):
            candidate = [u[i] + scale * step[i] for i in range(k)]
            cand_res = residual_at(candidate)
            cand_norm = max(abs(r) for r in cand_res)
            if cand_norm <= norm or cand_norm <= tol:
                break
            scale *= 0.5
        u, res, norm = candidate, cand_res, cand_norm
        if norm <= tol:
            return ControlSolve(u=np.array(u), iterations=iteration, residual=norm)
    raise ConvergenceError(
        f"control solve stalled at residual {norm:.3e} after {max_iter} iterations"
    )


def _newton_controls_wide(
    gradient: Callable[[np.ndarray], np.ndarray],
    target: np.ndarray,
    guess: np.ndarray,
    tol: float,
    max_iter: int,
) -> ControlSolve:
    # Same scheme in numpy for control spaces larger than the shipped ones.
    u = np.array(guess, dtype=float)
    k = u.size
    residual = np.asarray(gradient(u), dtype=float) - target
    norm = float(np.abs(residual).max())
    hessian = np.empty((k, k))
    for iteration in range(1, max_iter + 1):
        for j in range(k):
            h = REL_STEP * max(1.0, abs(u[j]))
            up = u.copy()
            um = u.copy()
            up[j] += h
            um[j] -= h
            hessian[:, j] = (
                np.asarray(gradient(up), dtype=float)
                - np.asarray(gradient(um), dtype=float)
            ) / (2.0 * h)
        try:
            inverse = np.linalg.inv(hessian)
        except np.linalg.LinAlgError as exc:
            raise RegularityError("control Hessian is singular") from exc
        condition = (
            np.abs(hessian).sum(axis=0).max() * np.abs(inverse).sum(axis=0).max()
        )
        if not condition <= HESSIAN_COND_LIMIT:
            raise RegularityError(
                f"control Hessian condition {condition:.3e} exceeds "
                f"{HESSIAN_COND_LIMIT:.0e}"
            )
        step = -(inverse @ residual)
        scale = 1.0
        for _ in range(30):
            candidate = u + scale * step
            cand_residual = np.asarray(gradient(candidate), dtype=float) - target
            cand_norm = float(np.abs(cand_residual).max())
            if cand_norm <= norm or cand_norm <= tol:
                break
            scale *= 0.5
        u, residual, norm = candidate, cand_residual, cand_norm
        if norm <= tol:
            return ControlSolve(u=u, iterations=iteration, residual=norm)
    raise ConvergenceError(
        f"control solve stalled at residual {norm:.3e} after {max_iter} iterations"
    )


def solve_optimal_controls_kinematic(
    cost: KinematicCost,
    x: np.ndarray,
    mu_a: np.ndarray,
    guess: np.ndarray | None = None,
) -> ControlSolve:
    """Controls pinned by ``mu_a = d cost / d u^a`` at the given point."""
    mu_a = np.asarray(mu_a, dtype=float)
    if guess is None:
        guess = np.zeros_like(mu_a)
    return _newton_controls(partial(cost.grad_u, x), mu_a, guess)


def solve_optimal_controls_dynamic(
    cost: DynamicCost,
    x: np.ndarray,
    y: np.ndarray,
    pi: np.ndarray,
    guess: np.ndarray | None = None,
) -> ControlSolve:
    """Controls pinned by ``pi_a = d cost / d u^a`` at the given point."""
    pi = np.asarray(pi, dtype=float)
    if guess is None:
        guess = np.zeros_like(pi)
    return _newton_controls(partial(cost.grad_u, x, y), pi, guess)


def hamiltonian_kinematic(
    algebroid: LieAlgebroid,
    distribution: ConstraintDistribution,
    cost: KinematicCost,
    state: KinematicState,
    u: np.ndarray,
) -> float:
    """``H = mu_a u^a - cost(x, u)`` (complementary momenta pair with zero)."""
    k = distribution.constrained_rank
    u = np.asarray(u, dtype=float)
    if u.shape != (k,):
        raise ValueError(f"control has shape {u.shape}, expected ({k},)")
    return float(state.mu[:k] @ u - cost.value(state.x, u))


def hamiltonian_dynamic(
    algebroid: LieAlgebroid,
    distribution: ConstraintDistribution,
    cost: DynamicCost,
    state: DynamicState,
    u: np.ndarray,
) -> float:
    """``H = mu_a y^a + pi_a u^a - cost(x, y, u)``."""
    k = distribution.constrained_rank
    u = np.asarray(u, dtype=float)
    if u.shape != (k,):
        raise ValueError(f"control has shape {u.shape}, expected ({k},)")
    return float(state.mu[:k] @ state.y + state.pi @ u - cost.value(state.x, state.y, u))


def _bracket_term(tensor: np.ndarray, mu: np.ndarray, speeds: np.ndarray, k: int) -> np.ndarray:
    # mu[g] C[g, c, b] speeds[b], summed over all g and constrained b.
    contracted = tensor[:, :, :k] @ speeds
    return contracted.T @ mu


def kinematic_extremal_rhs(
    algebroid: LieAlgebroid,
    distribution: ConstraintDistribution,
    cost: KinematicCost,
    state: KinematicState,
) -> KinematicState:
    """Time derivative of a normal kinematic extremal state."""
    k = distribution.constrained_rank
    solve = solve_optimal_controls_kinematic(cost, state.x, state.mu[:k])
    u = solve.u
    rho = algebroid.anchor_at(state.x)
    tensor = algebroid.structure_at(state.x)
    grad_x = cost.grad_x(state.x, u)
    dx = rho[:, :k] @ u
    dmu = rho.T @ grad_x - _bracket_term(tensor, state.mu, u, k)
    return KinematicState(x=dx, mu=dmu)


def dynamic_extremal_rhs(
    algebroid: LieAlgebroid,
    distribution: ConstraintDistribution,
    cost: DynamicCost,
    state: DynamicState,
) -> DynamicState:
    """Time derivative of a normal dynamic extremal state."""
    k = distribution.constrained_rank
    solve = solve_optimal_controls_dynamic(cost, state.x, state.y, state.pi)
    u = solve.u
    rho = algebroid.anchor_at(state.x)
    tensor = algebroid.structure_at(state.x)
    grad_x = cost.grad_x(state.x, state.y, u)
    grad_y = cost.grad_y(state.x, state.y, u)
    dx = rho[:, :k] @ state.y
    dmu = rho.T @ grad_x - _bracket_term(tensor, state.mu, state.y, k)
    dpi = grad_y - state.mu[:k]
    return DynamicState(x=dx, y=u, mu=dmu, pi=dpi)


def _abnormal_parts(
    algebroid: LieAlgebroid,
    distribution: ConstraintDistribution,
    x: np.ndarray,
    mu: np.ndarray,
    speeds: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, float]:
    k = distribution.constrained_rank
    rho = algebroid.anchor_at(x)
    tensor = algebroid.structure_at(x)
    dx = rho[:, :k] @ speeds
    dmu = np.zeros_like(mu)
    mu_comp = mu[k:]
    if mu_comp.size:
        contracted = tensor[k:, :, :k] @ speeds  # [B, c] = C[B, c, b] speeds[b]
        dmu[k:] = -(contracted[:, k:].T @ mu_comp)
        constrained_rows = contracted[:, :k].T @ mu_comp
        bracket_residual = float(np.max(np.abs(constrained_rows), initial=0.0))
    else:
        bracket_residual = 0.0
    return dx, dmu, bracket_residual


def kinematic_abnormal_rhs(
    algebroid: LieAlgebroid,
    distribution: ConstraintDistribution,
    state: KinematicState,
    u: np.ndarray,
) -> tuple[KinematicState, dict[str, float]]:
    """Abnormal kinematic derivative plus algebraic admissibility residuals.

    Controls are not determined by any optimality condition here and must be
    supplied.  Residuals: ``mu_a`` is the norm of the constrained momenta
    (zero on a genuine abnormal extremal) and ``bracket`` the norm of
    ``mu_B C[B, a, b] u^b`` over the constrained rows, which the caller or
    integrator should monitor.
    """
    k = distribution.constrained_rank
    mu_a_norm = float(np.max(np.abs(state.mu[:k]), initial=0.0))
    if mu_a_norm > ABNORMAL_TOL:
        raise ValueError(
            f"constrained momenta must vanish on abnormal extremals "
            f"(|mu_a| = {mu_a_norm:.3e})"
        )
    u = np.asarray(u, dtype=float)
    dx, dmu, bracket = _abnormal_parts(algebroid, distribution, state.x, state.mu, u)
    residuals = {"mu_a": mu_a_norm, "bracket": bracket}
    return KinematicState(x=dx, mu=dmu), residuals


def dynamic_abnormal_rhs(
    algebroid: LieAlgebroid,
    distribution: ConstraintDistribution,
    state: DynamicState,
    u: np.ndarray,
) -> tuple[DynamicState, dict[str, float]]:
    """Abnormal dynamic derivative plus residuals; same momentum block as the
    kinematic case with the quasi-velocities in place of the controls, and
    ``pi = 0`` along the extremal so ``dpi = 0``."""
    k = distribution.constrained_rank
    mu_a_norm = float(np.max(np.abs(state.mu[:k]), initial=0.0))
    pi_norm = float(np.max(np.abs(state.pi), initial=0.0))
    if mu_a_norm > ABNORMAL_TOL or pi_norm > ABNORMAL_TOL:
        raise ValueError(
            f"abnormal dynamic extremals need mu_a = 0 and pi = 0 "
            f"(|mu_a| = {mu_a_norm:.3e}, |pi| = {pi_norm:.3e})"
        )
    u = np.asarray(u, dtype=float)
    dx, dmu, bracket = _abnormal_parts(
        algebroid, distribution, state.x, state.mu, state.y
    )
    residuals = {"mu_a": mu_a_norm, "pi": pi_norm, "bracket": bracket}
    derivative = DynamicState(x=dx, y=u, mu=dmu, pi=np.zeros_like(state.pi))
    return derivative, residuals


@dataclass(frozen=True)
class ExtremalSystem:
    """Flat-vector view of an extremal field for the integrator.

    ``rhs`` maps a state vector to its derivative; ``hamiltonian`` evaluates
    the (optimal) Hamiltonian; ``monitors`` are named scalar observers
    evaluated per sample (optimality residuals, conserved quantities, ...).
    """

    dim: int
    rhs: Callable[[np.ndarray], np.ndarray]
    hamiltonian: Callable[[np.ndarray], float]
    monitors: dict[str, Callable[[np.ndarray], float]]


def kinematic_flow(
    algebroid: LieAlgebroid,
    distribution: ConstraintDistribution,
    cost: KinematicCost,
    extra_monitors: dict[str, Callable[[np.ndarray], float]] | None = None,
) -> ExtremalSystem:
    n, m = algebroid.base_dim, algebroid.rank
    k = distribution.constrained_rank
    distribution.check_against(algebroid)

    def unpack(vec: np.ndarray) -> KinematicState:
        return KinematicState.from_vector(vec, n)

    def rhs(vec: np.ndarray) -> np.ndarray:
        return kinematic_extremal_rhs(algebroid, distribution, cost, unpack(vec)).as_vector()

    def hamiltonian(vec: np.ndarray) -> float:
        state = unpack(vec)
        solve = solve_optimal_controls_kinematic(cost, state.x, state.mu[:k])
        return hamiltonian_kinematic(algebroid, distribution, cost, state, solve.u)

    def optimality(vec: np.ndarray) -> float:
        state = unpack(vec)
        return solve_optimal_controls_kinematic(cost, state.x, state.mu[:k]).residual

    monitors: dict[str, Callable[[np.ndarray], float]] = {"optimality": optimality}
    monitors.update(extra_monitors or {})
    return ExtremalSystem(dim=n + m, rhs=rhs, hamiltonian=hamiltonian, monitors=monitors)


def dynamic_flow(
    algebroid: LieAlgebroid,
    distribution: ConstraintDistribution,
    cost: DynamicCost,
    extra_monitors: dict[str, Callable[[np.ndarray], float]] | None = None,
) -> ExtremalSystem:
    n, m = algebroid.base_dim, algebroid.rank
    k = distribution.constrained_rank
    distribution.check_against(algebroid)

    def unpack(vec: np.ndarray) -> DynamicState:
        return DynamicState.from_vector(vec, n, k, m)

    def rhs(vec: np.ndarray) -> np.ndarray:
        return dynamic_extremal_rhs(algebroid, distribution, cost, unpack(vec)).as_vector()

    def hamiltonian(vec: np.ndarray) -> float:
        state = unpack(vec)
        solve = solve_optimal_controls_dynamic(cost, state.x, state.y, state.pi)
        return hamiltonian_dynamic(algebroid, distribution, cost, state, solve.u)

    def optimality(vec: np.ndarray) -> float:
        state = unpack(vec)
        return solve_optimal_controls_dynamic(cost, state.x, state.y, state.pi).residual

    monitors: dict[str, Callable[[np.ndarray], float]] = {"optimality": optimality}
    monitors.update(extra_monitors or {})
    return ExtremalSystem(
        dim=n + 2 * k + m, rhs=rhs, hamiltonian=hamiltonian, monitors=monitors
    )


def kinematic_abnormal_flow(
    algebroid: LieAlgebroid,
    distribution: ConstraintDistribution,
    control: np.ndarray,
) -> ExtremalSystem:
    """Abnormal kinematic flow under a constant external control vector."""
    n, m = algebroid.base_dim, algebroid.rank
    k = distribution.constrained_rank
    distribution.check_against(algebroid)
    control = np.asarray(control, dtype=float)
    if control.shape != (k,):
        raise ValueError(f"control has shape {control.shape}, expected ({k},)")

    def unpack(vec: np.ndarray) -> KinematicState:
        return KinematicState.from_vector(vec, n)

    def rhs(vec: np.ndarray) -> np.ndarray:
        derivative, _ = kinematic_abnormal_rhs(algebroid, distribution, unpack(vec), control)
        return derivative.as_vector()

    def hamiltonian(vec: np.ndarray) -> float:
        return float(unpack(vec).mu[:k] @ control)

    def residual(name: str) -> Callable[[np.ndarray], float]:
        def monitor(vec: np.ndarray) -> float:
            _, residuals = kinematic_abnormal_rhs(
                algebroid, distribution, unpack(vec), control
            )
            return residuals[name]

        return monitor

    monitors = {"mu_a": residual("mu_a"), "bracket": residual("bracket")}
    return ExtremalSystem(dim=n + m, rhs=rhs, hamiltonian=hamiltonian, monitors=monitors)


def dynamic_abnormal_flow(
    algebroid: LieAlgebroid,
    distribution: ConstraintDistribution,
    control: np.ndarray,
) -> ExtremalSystem:
    """Abnormal dynamic flow under a constant external acceleration vector."""
    n, m = algebroid.base_dim, algebroid.rank
    k = distribution.constrained_rank
    distribution.check_against(algebroid)
    control = np.asarray(control, dtype=float)
    if control.shape != (k,):
        raise ValueError(f"control has shape {control.shape}, expected ({k},)")

    def unpack(vec: np.ndarray) -> DynamicState:
        return DynamicState.from_vector(vec, n, k, m)

    def rhs(vec: np.ndarray) -> np.ndarray:
        derivative, _ = dynamic_abnormal_rhs(algebroid, distribution, unpack(vec), control)
        return derivative.as_vector()

    def hamiltonian(vec: np.ndarray) -> float:
        state = unpack(vec)
        return float(state.mu[:k] @ state.y + state.pi @ control)

    def residual(name: str) -> Callable[[np.ndarray], float]:
        def monitor(vec: np.ndarray) -> float:
            _, residuals = dynamic_abnormal_rhs(
                algebroid, distribution, unpack(vec), control
            )
            return residuals[name]

        return monitor

    monitors = {
        "mu_a": residual("mu_a"),
        "pi": residual("pi"),
        "bracket": residual("bracket"),
    }
    return ExtremalSystem(
        dim=n + 2 * k + m, rhs=rhs, hamiltonian=hamiltonian, monitors=monitors
    )


def kinematic_consistency_residual(
    algebroid: LieAlgebroid,
    distribution: ConstraintDistribution,
    cost: KinematicCost,
    times: np.ndarray,
    states: np.ndarray,
) -> float:
    """Residual of the control-space form of the momentum equations.

    Substituting the optimality condition into the constrained momentum
    equations gives, along any normal kinematic extremal,

    ``d/dt(dcost_du[a]) - rho[i, a] dcost_dx[i]
      + dcost_du[c] C[c, a, b] u[b] + mu[B] C[B, a, b] u[b] = 0``.

    Evaluated here with central finite differences in time on a stored
    trajectory; returns the max-norm residual over interior samples.
    """
    times = np.asarray(times, dtype=float)
    states = np.asarray(states, dtype=float)
    n = algebroid.base_dim
    k = distribution.constrained_rank
    samples = states.shape[0]
    momenta = np.empty((samples, k))
    algebraic = np.empty((samples, k))
    for idx in range(samples):
        state = KinematicState.from_vector(states[idx], n)
        u = solve_optimal_controls_kinematic(cost, state.x, state.mu[:k]).u
        rho = algebroid.anchor_at(state.x)
        tensor = algebroid.structure_at(state.x)
        grad_u = cost.grad_u(state.x, u)
        grad_x = cost.grad_x(state.x, u)
        momenta[idx] = grad_u
        contracted = tensor[:, :k, :k] @ u  # [g, a] = C[g, a, b] u[b]
        full_mu = np.concatenate([grad_u, state.mu[k:]])
        algebraic[idx] = -(rho[:, :k].T @ grad_x) + contracted.T @ full_mu
    worst = 0.0
    for idx in range(1, samples - 1):
        dt = times[idx + 1] - times[idx - 1]
        dp = (momenta[idx + 1] - momenta[idx - 1]) / dt
        worst = max(worst, float(np.max(np.abs(dp + algebraic[idx]))))
    return worst
