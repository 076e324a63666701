"""Explicit integration of extremal systems with per-step invariant monitoring.

The default integrator is fixed-step classical RK4: determinism and
conservation checks want a reproducible grid.  An embedded Dormand-Prince
5(4) pair with cubic Hermite dense output is available for adaptive runs;
it reports on the same uniform output grid so trajectories stay comparable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

import numpy as np

from .algebroid import ValidationReport
from .diff import EvaluationError
from .pontryagin import ControlSolveError

Monitor = tuple[str, Callable[[np.ndarray], float]]


@dataclass
class Trajectory:
    """Time-stamped state samples with per-sample Hamiltonian and monitors.

    ``residuals`` maps monitor names to per-sample series: optimality and
    abnormality residuals, conserved quantities, and similar observers.
    ``aborted`` flags an integration cut short by a non-finite state or a
    failed control solve; the stored samples are the valid prefix.
    """

    times: np.ndarray
    states: np.ndarray
    hamiltonian: np.ndarray
    residuals: dict[str, np.ndarray] = field(default_factory=dict)
    aborted: bool = False
    failure_reason: str = ""

    def __post_init__(self) -> None:
        self.times = np.asarray(self.times, dtype=float)
        self.states = np.asarray(self.states, dtype=float)
        if self.times.ndim != 1 or self.states.ndim != 2:
            raise ValueError("times must be 1-D and states 2-D")
        if self.states.shape[0] != self.times.shape[0]:
            raise ValueError("states and times have different lengths")
        if self.times.size > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("times must be strictly increasing")

    def __len__(self) -> int:
        return int(self.times.size)


def rk4_step(
    rhs: Callable[[np.ndarray], np.ndarray], state: np.ndarray, h: float
) -> np.ndarray:
    """One classical 4-stage Runge-Kutta update of an autonomous system."""
    if h <= 0:
        raise ValueError("step size must be positive")
    state = np.asarray(state, dtype=float)

    def stage(point: np.ndarray) -> np.ndarray:
        value = np.asarray(rhs(point), dtype=float)
        # NaN/inf propagate through the sum, so one scalar check suffices.
        if not np.isfinite(value.sum()):
            raise EvaluationError("non-finite derivative during an RK4 stage")
        return value

    k1 = stage(state)
    k2 = stage(state + 0.5 * h * k1)
    k3 = stage(state + 0.5 * h * k2)
    k4 = stage(state + h * k3)
    return state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _output_grid(t0: float, t1: float, h: float) -> np.ndarray:
    if t1 <= t0:
        raise ValueError("t1 must be greater than t0")
    if h <= 0:
        raise ValueError("step size must be positive")
    count = int(np.floor((t1 - t0) / h + 1e-9))
    times = t0 + h * np.arange(count + 1)
    if t1 - times[-1] > 1e-12 * max(1.0, abs(t1)):
        times = np.append(times, t1)
    else:
        times[-1] = min(times[-1], t1)
    return times


def _normalize_monitors(
    monitors: Iterable[Monitor] | Mapping[str, Callable[[np.ndarray], float]] | None,
) -> list[Monitor]:
    if monitors is None:
        return []
    if isinstance(monitors, Mapping):
        return list(monitors.items())
    return list(monitors)


def _observe(
    times: np.ndarray,
    states: np.ndarray,
    monitors: list[Monitor],
    hamiltonian: Callable[[np.ndarray], float] | None,
) -> tuple[np.ndarray, dict[str, np.ndarray]]:
    count = states.shape[0]
    h_values = np.zeros(count)
    if hamiltonian is not None:
        for idx in range(count):
            h_values[idx] = hamiltonian(states[idx])
    residuals: dict[str, np.ndarray] = {}
    for name, fn in monitors:
        series = np.empty(count)
        for idx in range(count):
            series[idx] = fn(states[idx])
        residuals[name] = series
    return h_values, residuals


def integrate(
    rhs: Callable[[np.ndarray], np.ndarray],
    initial: np.ndarray,
    t0: float,
    t1: float,
    h: float,
    monitors: Iterable[Monitor] | Mapping[str, Callable[[np.ndarray], float]] | None = None,
    hamiltonian: Callable[[np.ndarray], float] | None = None,
) -> Trajectory:
    """Fixed-step RK4 over a uniform grid (final short step allowed).

    Monitors are pure observers evaluated on the stored samples after
    stepping; they never perturb the state sequence.  A non-finite state or
    a control-solve failure aborts the integration and returns the valid
    partial trajectory with ``aborted`` set.
    """
    times = _output_grid(t0, t1, h)
    initial = np.asarray(initial, dtype=float)
    states = np.empty((times.size, initial.size))
    states[0] = initial
    reached = 1
    failure = ""
    for idx in range(times.size - 1):
        step = times[idx + 1] - times[idx]
        try:
            nxt = rk4_step(rhs, states[idx], step)
        except (EvaluationError, ControlSolveError) as exc:
            failure = str(exc)
            break
        if not np.isfinite(nxt.sum()):
            failure = "non-finite state"
            break
        states[idx + 1] = nxt
        reached += 1
    times = times[:reached]
    states = states[:reached]
    h_values, residuals = _observe(times, states, _normalize_monitors(monitors), hamiltonian)
    return Trajectory(
        times=times,
        states=states,
        hamiltonian=h_values,
        residuals=residuals,
        aborted=bool(failure),
        failure_reason=failure,
    )


# Dormand-Prince 5(4) coefficients.
_DP_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_DP_A = (
    np.array([], dtype=float),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
)
_DP_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_DP_B4 = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)


def _hermite(
    t: float, t_a: float, y_a: np.ndarray, f_a: np.ndarray, t_b: float, y_b: np.ndarray, f_b: np.ndarray
) -> np.ndarray:
    dt = t_b - t_a
    s = (t - t_a) / dt
    h00 = (1 + 2 * s) * (1 - s) ** 2
    h10 = s * (1 - s) ** 2
    h01 = s * s * (3 - 2 * s)
    h11 = s * s * (s - 1)
    return h00 * y_a + h10 * dt * f_a + h01 * y_b + h11 * dt * f_b


def integrate_rk45(
    rhs: Callable[[np.ndarray], np.ndarray],
    initial: np.ndarray,
    t0: float,
    t1: float,
    h: float,
    monitors: Iterable[Monitor] | Mapping[str, Callable[[np.ndarray], float]] | None = None,
    hamiltonian: Callable[[np.ndarray], float] | None = None,
    atol: float = 1e-9,
    rtol: float = 1e-9,
) -> Trajectory:
    """Adaptive Dormand-Prince 5(4) reported on the uniform ``h`` grid.

    Accepted internal steps are interpolated onto the output grid with
    cubic Hermite polynomials built from the stored node derivatives.
    """
    grid = _output_grid(t0, t1, h)
    initial = np.asarray(initial, dtype=float)

    def deriv(point: np.ndarray) -> np.ndarray:
        value = np.asarray(rhs(point), dtype=float)
        if not np.all(np.isfinite(value)):
            raise EvaluationError("non-finite derivative during an RK45 stage")
        return value

    node_t = [t0]
    node_y = [initial]
    node_f: list[np.ndarray] = []
    failure = ""
    try:
        f_current = deriv(initial)
        node_f.append(f_current)
        t = t0
        y = initial
        step = min(h, t1 - t0)
        while t < t1 - 1e-14 * max(1.0, abs(t1)):
            step = min(step, t1 - t)
            stages = np.empty((7, y.size))
            stages[0] = f_current
            for row in range(1, 7):
                point = y + step * (_DP_A[row] @ stages[:row])
                stages[row] = deriv(point)
            y_new = y + step * (_DP_B5 @ stages)
            error = step * ((_DP_B5 - _DP_B4) @ stages)
            scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
            err_norm = float(np.sqrt(np.mean((error / scale) ** 2)))
            if err_norm <= 1.0:
                t = t + step
                y = y_new
                f_current = stages[6]  # FSAL: last stage is f(t + step, y_new)
                node_t.append(t)
                node_y.append(y)
                node_f.append(f_current)
            factor = 0.9 * (err_norm ** -0.2) if err_norm > 0 else 5.0
            step = step * min(5.0, max(0.2, factor))
            if step < 1e-14 * max(1.0, abs(t1)):
                failure = "adaptive step size underflow"
                break
    except (EvaluationError, ControlSolveError) as exc:
        failure = str(exc)

    nodes_t = np.array(node_t)
    reached_time = nodes_t[-1]
    grid = grid[grid <= reached_time + 1e-14 * max(1.0, abs(t1))]
    states = np.empty((grid.size, initial.size))
    for idx, t_out in enumerate(grid):
        pos = int(np.searchsorted(nodes_t, t_out, side="right") - 1)
        if pos >= len(node_t) - 1:
            states[idx] = node_y[-1]
        else:
            states[idx] = _hermite(
                t_out,
                node_t[pos],
                node_y[pos],
                node_f[pos],
                node_t[pos + 1],
                node_y[pos + 1],
                node_f[pos + 1],
            )
    h_values, residuals = _observe(grid, states, _normalize_monitors(monitors), hamiltonian)
    return Trajectory(
        times=grid,
        states=states,
        hamiltonian=h_values,
        residuals=residuals,
        aborted=bool(failure),
        failure_reason=failure,
    )


def check_conserved(traj: Trajectory, name: str, tol: float) -> ValidationReport:
    """Drift report ``max_t |value(t) - value(t0)|`` for a monitored series.

    The name ``"H"`` refers to the stored Hamiltonian samples; any other
    name must be a key of ``traj.residuals``.
    """
    if name == "H":
        series = traj.hamiltonian
    elif name in traj.residuals:
        series = traj.residuals[name]
    else:
        raise KeyError(f"unknown monitor name {name!r}")
    drift = np.abs(series - series[0])
    worst = int(np.argmax(drift))
    return ValidationReport(
        identity=name,
        max_residual=float(drift[worst]),
        worst_point=np.array(traj.states[worst]),
        samples_checked=len(traj),
        passed=bool(drift[worst] <= tol),
        tolerance=tol,
    )
