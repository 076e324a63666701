"""Ready-made nonholonomic optimal control problems.

Three classical systems ship with the package:

* ``rolling_disc``  -- a disc rolling upright on the plane; base coordinates
  ``(x1, x2, heading, steering)``.
* ``rigid_body``    -- rotational motion of a free rigid body in type-I Euler
  angles, constrained so the first body quasi-velocity vanishes.
* ``rolling_ball``  -- a ball rolling without sliding on a table, reduced by
  its rotational symmetry to a rank-5 algebroid over the plane.

Each problem bundles the algebroid, the adapted constraint split, quadratic
running costs for the kinematic and dynamic problems, conserved-quantity
monitors, and a hand-transcribed copy of the classical extremal equations
(``reference_rhs``) used as an independent cross-check of the generic
builders in :mod:`extremals.pontryagin`.

Index conventions.  Internally the constrained sections always come first.
Reports and file output use each system's conventional labeling instead
(e.g. the disc lists the two translation momenta ``mu1, mu2`` before the
constrained ``mu3, mu4``); ``index_permutation`` records where each reported
momentum lives internally, and the helpers below translate between the two
layouts.  Reported quasi-velocity/acceleration components keep their
conventional digits (disc: ``y3, y4``; rigid body: ``y2, y3``).

For force-controlled problems (disc, ball) the controls handed to the
generic dynamic machinery are the accelerations; the generalized forces of
the classical formulation are ``force_a = c_a * acceleration_a`` with the
listed coefficients, and the costs are expressed through that feedback.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebroid import ConstraintDistribution, LieAlgebroid
from .pontryagin import (
    DynamicCost,
    ExtremalSystem,
    KinematicCost,
    dynamic_abnormal_flow,
    dynamic_flow,
    kinematic_abnormal_flow,
    kinematic_flow,
)

KINDS = ("kinematic", "dynamic", "kinematic-abnormal", "dynamic-abnormal")

Scalar = Callable[[np.ndarray], float]
Rhs = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ExampleProblem:
    """A packaged control problem with oracles and conserved quantities."""

    name: str
    algebroid: LieAlgebroid
    distribution: ConstraintDistribution
    kinematic_cost: KinematicCost | None
    dynamic_cost: DynamicCost | None
    parameters: dict[str, float]
    index_permutation: tuple[int, ...]
    velocity_labels: tuple[str, ...]
    conserved: dict[str, tuple[tuple[str, Scalar], ...]]
    reference_blocks: dict[str, Rhs]

    @property
    def base_dim(self) -> int:
        return self.algebroid.base_dim

    @property
    def rank(self) -> int:
        return self.algebroid.rank

    @property
    def constrained_rank(self) -> int:
        return self.distribution.constrained_rank

    def state_dim(self, kind: str) -> int:
        _require_kind(kind)
        if kind.startswith("kinematic"):
            return self.base_dim + self.rank
        return self.base_dim + 2 * self.constrained_rank + self.rank

    def state_labels(self, kind: str) -> list[str]:
        """Column labels in the documented (reported) state order."""
        _require_kind(kind)
        labels = [f"x{i + 1}" for i in range(self.base_dim)]
        mu_labels = [f"mu{p + 1}" for p in range(self.rank)]
        if kind.startswith("kinematic"):
            return labels + mu_labels
        return (
            labels
            + [f"y{tag}" for tag in self.velocity_labels]
            + mu_labels
            + [f"pi{tag}" for tag in self.velocity_labels]
        )

    def to_internal(self, kind: str, documented: np.ndarray) -> np.ndarray:
        """Map a state vector from the reported order to the internal layout."""
        _require_kind(kind)
        documented = np.asarray(documented, dtype=float)
        expected = self.state_dim(kind)
        if documented.shape != (expected,):
            raise ValueError(
                f"state has length {documented.size}, expected {expected} for "
                f"'{self.name}' {kind}"
            )
        vec = documented.copy()
        offset = self.base_dim
        if kind.startswith("dynamic"):
            offset += self.constrained_rank
        mu = vec[offset : offset + self.rank].copy()
        for position, internal in enumerate(self.index_permutation):
            vec[offset + internal] = mu[position]
        return vec

    def to_documented(self, kind: str, internal: np.ndarray) -> np.ndarray:
        """Inverse of :meth:`to_internal`; also accepts a (samples, dim) array."""
        _require_kind(kind)
        internal = np.asarray(internal, dtype=float)
        vec = internal.copy()
        offset = self.base_dim
        if kind.startswith("dynamic"):
            offset += self.constrained_rank
        mu = internal[..., offset : offset + self.rank]
        for position, idx in enumerate(self.index_permutation):
            vec[..., offset + position] = mu[..., idx]
        return vec

    def flow(self, kind: str, control: np.ndarray | None = None) -> ExtremalSystem:
        """Build the extremal system for one problem kind (internal layout)."""
        _require_kind(kind)
        if kind == "kinematic":
            if self.kinematic_cost is None:
                raise ValueError(f"'{self.name}' has no kinematic cost")
            return kinematic_flow(
                self.algebroid,
                self.distribution,
                self.kinematic_cost,
                extra_monitors=dict(self.conserved.get("kinematic", ())),
            )
        if kind == "dynamic":
            if self.dynamic_cost is None:
                raise ValueError(f"'{self.name}' has no dynamic cost")
            return dynamic_flow(
                self.algebroid,
                self.distribution,
                self.dynamic_cost,
                extra_monitors=dict(self.conserved.get("dynamic", ())),
            )
        if control is None:
            raise ValueError("abnormal problems need an external control vector")
        if kind == "kinematic-abnormal":
            return kinematic_abnormal_flow(self.algebroid, self.distribution, control)
        return dynamic_abnormal_flow(self.algebroid, self.distribution, control)


def _require_kind(kind: str) -> None:
    if kind not in KINDS:
        raise ValueError(f"unknown problem kind {kind!r}; expected one of {KINDS}")


def reference_rhs(problem: ExampleProblem, block: str, state: np.ndarray) -> np.ndarray:
    """Hand-coded classical form of one extremal block (internal layout).

    These transcriptions are kept deliberately independent of the generic
    extremal builders so that the two can be compared against each other.
    """
    try:
        fn = problem.reference_blocks[block]
    except KeyError:
        raise ValueError(
            f"'{problem.name}' has no reference block {block!r}; available: "
            f"{sorted(problem.reference_blocks)}"
        ) from None
    state = np.asarray(state, dtype=float)
    expected = problem.state_dim(block)
    if state.shape != (expected,):
        raise ValueError(f"state has length {state.size}, expected {expected}")
    return fn(state)


def _mu_value(offset: int, index: int) -> Scalar:
    return lambda vec: float(vec[offset + index])


def _mu_pair_sum(offset: int, first: int, second: int) -> Scalar:
    return lambda vec: float(vec[offset + first] + vec[offset + second])


# ---------------------------------------------------------------------------
# Rolling disc
# ---------------------------------------------------------------------------


def rolling_disc() -> ExampleProblem:
    """Vertical disc rolling on the plane, forces on the admissible directions.

    Base ``(x1, x2, x3, x4)``: contact position, rolling angle, steering
    angle.  Internal sections: ``(roll, steer, slide-x, slide-y)`` where the
    rolling section is ``cos(x4) d1 + sin(x4) d2 + d3``; only the first two
    are admissible.  Reported momenta follow the conventional order
    ``(slide-x, slide-y, roll, steer)`` as ``mu1..mu4``.

    The dynamic problem controls the generalized forces through
    ``force_3 = 1.5 * dy3/dt`` and ``force_4 = 0.25 * dy4/dt``; its cost is
    half the squared force magnitude.  The kinematic problem uses the plain
    quadratic cost on the admissible quasi-velocities.
    """
    c3, c4 = 1.5, 0.25

    def anchor(x: np.ndarray) -> np.ndarray:
        c, s = np.cos(x[3]), np.sin(x[3])
        rho = np.zeros((4, 4))
        rho[0, 0] = c
        rho[1, 0] = s
        rho[2, 0] = 1.0
        rho[3, 1] = 1.0
        rho[0, 2] = 1.0
        rho[1, 3] = 1.0
        return rho

    def structure(x: np.ndarray) -> np.ndarray:
        c, s = np.cos(x[3]), np.sin(x[3])
        tensor = np.zeros((4, 4, 4))
        # [roll, steer] = sin(x4) slide-x - cos(x4) slide-y
        tensor[2, 0, 1] = s
        tensor[2, 1, 0] = -s
        tensor[3, 0, 1] = -c
        tensor[3, 1, 0] = c
        return tensor

    algebroid = LieAlgebroid(
        base_dim=4, rank=4, anchor=anchor, structure=structure, label="rolling_disc"
    )
    distribution = ConstraintDistribution(constrained_rank=2)

    kinematic_cost = KinematicCost(
        value=lambda x, u: 0.5 * float(u @ u),
        grad_x=lambda x, u: np.zeros(4),
        grad_u=lambda x, u: np.asarray(u, dtype=float).copy(),
    )
    weights = np.array([c3 * c3, c4 * c4])
    dynamic_cost = DynamicCost(
        value=lambda x, y, u: 0.5 * float(weights @ (np.asarray(u) ** 2)),
        grad_x=lambda x, y, u: np.zeros(4),
        grad_y=lambda x, y, u: np.zeros(2),
        grad_u=lambda x, y, u: weights * np.asarray(u, dtype=float),
    )

    def dynamic_reference(vec: np.ndarray) -> np.ndarray:
        x4 = vec[3]
        y3, y4 = vec[4], vec[5]
        mu3, mu4, mu1, mu2 = vec[6], vec[7], vec[8], vec[9]
        pi3, pi4 = vec[10], vec[11]
        s, c = np.sin(x4), np.cos(x4)
        u3 = (2.0 / 3.0) * pi3
        u4 = 4.0 * pi4
        out = np.empty(12)
        out[0] = c * y3
        out[1] = s * y3
        out[2] = y3
        out[3] = y4
        out[4] = (2.0 / 3.0) * u3
        out[5] = 4.0 * u4
        out[6] = (-mu1 * s + mu2 * c) * y4  # d mu3
        out[7] = (mu1 * s - mu2 * c) * y3  # d mu4
        out[8] = 0.0  # d mu1
        out[9] = 0.0  # d mu2
        out[10] = -mu3
        out[11] = -mu4
        return out

    return ExampleProblem(
        name="rolling_disc",
        algebroid=algebroid,
        distribution=distribution,
        kinematic_cost=kinematic_cost,
        dynamic_cost=dynamic_cost,
        parameters={"c3": c3, "c4": c4},
        index_permutation=(2, 3, 0, 1),
        velocity_labels=("3", "4"),
        conserved={
            "kinematic": (
                ("mu1", _mu_value(4, 2)),
                ("mu2", _mu_value(4, 3)),
            ),
            "dynamic": (
                ("mu1", _mu_value(6, 2)),
                ("mu2", _mu_value(6, 3)),
            ),
        },
        reference_blocks={"dynamic": dynamic_reference},
    )


def disc_reduced_rhs(mu1: float, mu2: float) -> Rhs:
    """Fourth-order reduced form of the disc's dynamic extremals.

    State ``(x1, x2, x3, dx3, ddx3, dddx3, x4, dx4, ddx4, dddx4)`` with the
    two translation momenta entering as the constants ``mu1, mu2``.  The
    first-order position equations follow the rolling constraints
    ``dx1 = cos(x4) dx3`` and ``dx2 = sin(x4) dx3``.
    """

    def rhs(state: np.ndarray) -> np.ndarray:
        x4 = state[6]
        dx3 = state[3]
        dx4 = state[7]
        s, c = np.sin(x4), np.cos(x4)
        out = np.empty(10)
        out[0] = c * dx3
        out[1] = s * dx3
        out[2] = dx3
        out[3] = state[4]
        out[4] = state[5]
        out[5] = (4.0 / 9.0) * (mu1 * s - mu2 * c) * dx4
        out[6] = dx4
        out[7] = state[8]
        out[8] = state[9]
        out[9] = 16.0 * (-mu1 * s + mu2 * c) * dx3
        return out

    return rhs


def disc_reduced_initial(
    problem: ExampleProblem, internal_state: np.ndarray
) -> tuple[np.ndarray, tuple[float, float]]:
    """Reduced initial data and constants from a full internal dynamic state.

    Uses the identifications ``ddx3 = pi3 / c3^2``, ``dddx3 = -mu3 / c3^2``
    (and likewise for the steering chain) that define the reduced system.
    """
    vec = np.asarray(internal_state, dtype=float)
    c3, c4 = problem.parameters["c3"], problem.parameters["c4"]
    x = vec[:4]
    y3, y4 = vec[4], vec[5]
    mu3, mu4, mu1, mu2 = vec[6], vec[7], vec[8], vec[9]
    pi3, pi4 = vec[10], vec[11]
    reduced = np.array(
        [
            x[0],
            x[1],
            x[2],
            y3,
            pi3 / c3**2,
            -mu3 / c3**2,
            x[3],
            y4,
            pi4 / c4**2,
            -mu4 / c4**2,
        ]
    )
    return reduced, (float(mu1), float(mu2))


# ---------------------------------------------------------------------------
# Rigid body
# ---------------------------------------------------------------------------


def rigid_body(i2: float = 1.0, i3: float = 1.0) -> ExampleProblem:
    """Free rigid body in type-I Euler angles with one body velocity locked.

    The moving-frame sections obey ``[e1, e2] = e3`` cyclically; the
    constraint removes ``e1`` from the admissible directions, so internally
    the sections are ordered ``(e2, e3, e1)``.  Reported momenta use the
    conventional ``mu1, mu2, mu3``.

    Kinematic cost: control energy ``(i2 u2^2 + i3 u3^2) / 2``.  Dynamic
    cost: squared torques plus the gyroscopic coupling term
    ``(i3 - i2)^2 y2^2 y3^2 / 2``; the accelerations are the controls.
    """
    if i2 <= 0 or i3 <= 0:
        raise ValueError("inertia parameters must be positive")

    def anchor(x: np.ndarray) -> np.ndarray:
        sec2 = 1.0 / np.cos(x[1])
        tan2 = np.tan(x[1])
        s3, c3 = np.sin(x[2]), np.cos(x[2])
        rho = np.empty((3, 3))
        rho[0, 0] = sec2 * c3
        rho[1, 0] = -s3
        rho[2, 0] = tan2 * c3
        rho[0, 1] = 0.0
        rho[1, 1] = 0.0
        rho[2, 1] = 1.0
        rho[0, 2] = sec2 * s3
        rho[1, 2] = c3
        rho[2, 2] = tan2 * s3
        return rho

    _tensor = np.zeros((3, 3, 3))
    # Internal order (e2, e3, e1): [e1, e2] = e3, [e2, e3] = e1, [e3, e1] = e2.
    _tensor[1, 2, 0] = 1.0
    _tensor[1, 0, 2] = -1.0
    _tensor[2, 0, 1] = 1.0
    _tensor[2, 1, 0] = -1.0
    _tensor[0, 1, 2] = 1.0
    _tensor[0, 2, 1] = -1.0
    _tensor.setflags(write=False)

    algebroid = LieAlgebroid(
        base_dim=3,
        rank=3,
        anchor=anchor,
        structure=lambda x: _tensor.copy(),
        label="rigid_body",
    )
    distribution = ConstraintDistribution(constrained_rank=2)

    inertia = np.array([i2, i3])
    kinematic_cost = KinematicCost(
        value=lambda x, u: 0.5 * float(inertia @ (np.asarray(u) ** 2)),
        grad_x=lambda x, u: np.zeros(3),
        grad_u=lambda x, u: inertia * np.asarray(u, dtype=float),
    )
    torque_weights = inertia**2
    coupling = (i3 - i2) ** 2

    def dyn_value(x: np.ndarray, y: np.ndarray, u: np.ndarray) -> float:
        return 0.5 * float(
            torque_weights @ (np.asarray(u) ** 2) + coupling * y[0] ** 2 * y[1] ** 2
        )

    dynamic_cost = DynamicCost(
        value=dyn_value,
        grad_x=lambda x, y, u: np.zeros(3),
        grad_y=lambda x, y, u: coupling
        * np.array([y[0] * y[1] ** 2, y[0] ** 2 * y[1]]),
        grad_u=lambda x, y, u: torque_weights * np.asarray(u, dtype=float),
    )

    def kinematic_reference(vec: np.ndarray) -> np.ndarray:
        x2, x3 = vec[1], vec[2]
        mu2, mu3, mu1 = vec[3], vec[4], vec[5]
        u2 = mu2 / i2
        u3 = mu3 / i3
        sec2 = 1.0 / np.cos(x2)
        tan2 = np.tan(x2)
        s3, c3 = np.sin(x3), np.cos(x3)
        out = np.empty(6)
        out[0] = sec2 * c3 * u2
        out[1] = -s3 * u2
        out[2] = tan2 * c3 * u2 + u3
        out[3] = -mu1 * u3  # d mu2
        out[4] = mu1 * u2  # d mu3
        out[5] = -(i3 - i2) * u2 * u3  # d mu1
        return out

    def dynamic_reference(vec: np.ndarray) -> np.ndarray:
        x2, x3 = vec[1], vec[2]
        y2, y3 = vec[3], vec[4]
        mu2, mu3, mu1 = vec[5], vec[6], vec[7]
        pi2, pi3 = vec[8], vec[9]
        u2 = pi2 / i2**2
        u3 = pi3 / i3**2
        sec2 = 1.0 / np.cos(x2)
        tan2 = np.tan(x2)
        s3, c3 = np.sin(x3), np.cos(x3)
        out = np.empty(10)
        out[0] = sec2 * c3 * y2
        out[1] = -s3 * y2
        out[2] = tan2 * c3 * y2 + y3
        out[3] = u2
        out[4] = u3
        out[5] = -mu1 * y3  # d mu2
        out[6] = mu1 * y2  # d mu3
        out[7] = -mu3 * y2 + mu2 * y3  # d mu1
        # Torque-squared terms written pole-free: (M/y)^2 * y == M^2 / y.
        out[8] = coupling * y2 * y3**2 - mu2
        out[9] = coupling * y2**2 * y3 - mu3
        return out

    conserved_kinematic: tuple[tuple[str, Scalar], ...] = ()
    if i2 == i3:
        conserved_kinematic = (("mu1", _mu_value(3, 2)),)

    return ExampleProblem(
        name="rigid_body",
        algebroid=algebroid,
        distribution=distribution,
        kinematic_cost=kinematic_cost,
        dynamic_cost=dynamic_cost,
        parameters={"I2": i2, "I3": i3},
        index_permutation=(2, 0, 1),
        velocity_labels=("2", "3"),
        conserved={"kinematic": conserved_kinematic, "dynamic": ()},
        reference_blocks={
            "kinematic": kinematic_reference,
            "dynamic": dynamic_reference,
        },
    )


# ---------------------------------------------------------------------------
# Rolling ball
# ---------------------------------------------------------------------------


def rolling_ball(radius: float = 1.0, gyration: float = 1.0) -> ExampleProblem:
    """Ball rolling without sliding on a plane, reduced by its symmetry.

    Rank-5 algebroid over the contact plane.  Sections ``f1, f2`` move the
    contact point, ``f3`` spins the ball about the vertical, and ``f4, f5``
    generate the (forbidden) sliding directions, so the constraint split is
    ``k = 3`` and the internal order matches the conventional one.

    Diagonal metric coefficients ``c1 = c2 = 1 + gyration^2/radius^2`` and
    ``c3 = gyration^2`` relate forces to accelerations (``force_a = c_a *
    dy_a/dt``); the kinematic cost is the kinetic energy restricted to the
    admissible directions and the dynamic cost is half the squared force
    magnitude.
    """
    if radius <= 0 or gyration <= 0:
        raise ValueError("radius and gyration must be positive")
    r2 = radius * radius
    c_diag = np.array([1.0 + gyration**2 / r2, 1.0 + gyration**2 / r2, gyration**2])
    c1, c2, c3 = (float(v) for v in c_diag)

    _anchor = np.zeros((2, 5))
    _anchor[0, 0] = 1.0
    _anchor[1, 1] = 1.0
    _anchor.setflags(write=False)

    _tensor = np.zeros((5, 5, 5))
    inv_r2 = 1.0 / r2
    # [f2, f1] = [f1, f5] = [f4, f2] = [f5, f4] = f3 / radius^2
    for a, b in ((1, 0), (0, 4), (3, 1), (4, 3)):
        _tensor[2, a, b] = inv_r2
        _tensor[2, b, a] = -inv_r2
    # [f3, f1] = [f4, f3] = f5
    for a, b in ((2, 0), (3, 2)):
        _tensor[4, a, b] = 1.0
        _tensor[4, b, a] = -1.0
    # [f2, f3] = [f3, f5] = f4
    for a, b in ((1, 2), (2, 4)):
        _tensor[3, a, b] = 1.0
        _tensor[3, b, a] = -1.0
    _tensor.setflags(write=False)

    algebroid = LieAlgebroid(
        base_dim=2,
        rank=5,
        anchor=lambda x: _anchor.copy(),
        structure=lambda x: _tensor.copy(),
        label="rolling_ball",
    )
    distribution = ConstraintDistribution(constrained_rank=3)

    kinematic_cost = KinematicCost(
        value=lambda x, u: 0.5 * float(c_diag @ (np.asarray(u) ** 2)),
        grad_x=lambda x, u: np.zeros(2),
        grad_u=lambda x, u: c_diag * np.asarray(u, dtype=float),
    )
    force_weights = c_diag**2
    dynamic_cost = DynamicCost(
        value=lambda x, y, u: 0.5 * float(force_weights @ (np.asarray(u) ** 2)),
        grad_x=lambda x, y, u: np.zeros(2),
        grad_y=lambda x, y, u: np.zeros(3),
        grad_u=lambda x, y, u: force_weights * np.asarray(u, dtype=float),
    )

    def kinematic_reference(vec: np.ndarray) -> np.ndarray:
        mu1, mu2, mu3, mu4, mu5 = vec[2:7]
        out = np.empty(7)
        out[0] = mu1 / c1
        out[1] = mu2 / c2
        out[2] = mu3 * mu2 / (c2 * r2) + mu5 * mu3 / c3
        out[3] = -mu4 * mu3 / c3 - mu3 * mu1 / (c1 * r2)
        out[4] = -mu5 * mu1 / c1 + mu4 * mu2 / c2
        out[5] = -mu3 * mu2 / (c2 * r2) - mu5 * mu3 / c3
        out[6] = mu4 * mu3 / c3 + mu3 * mu1 / (c1 * r2)
        return out

    def dynamic_reference(vec: np.ndarray) -> np.ndarray:
        y1, y2, y3 = vec[2:5]
        mu1, mu2, mu3, mu4, mu5 = vec[5:10]
        pi = vec[10:13]
        force = pi / c_diag
        out = np.empty(13)
        out[0] = y1
        out[1] = y2
        out[2:5] = force / c_diag
        out[5] = mu3 * y2 / r2 + mu5 * y3
        out[6] = -mu4 * y3 - mu3 * y1 / r2
        out[7] = -mu5 * y1 + mu4 * y2
        out[8] = -out[5]
        out[9] = -out[6]
        out[10:13] = -np.array([mu1, mu2, mu3])
        return out

    return ExampleProblem(
        name="rolling_ball",
        algebroid=algebroid,
        distribution=distribution,
        kinematic_cost=kinematic_cost,
        dynamic_cost=dynamic_cost,
        parameters={"r": radius, "k": gyration},
        index_permutation=(0, 1, 2, 3, 4),
        velocity_labels=("1", "2", "3"),
        conserved={
            "kinematic": (
                ("mu1+mu4", _mu_pair_sum(2, 0, 3)),
                ("mu2+mu5", _mu_pair_sum(2, 1, 4)),
            ),
            "dynamic": (
                ("mu1+mu4", _mu_pair_sum(5, 0, 3)),
                ("mu2+mu5", _mu_pair_sum(5, 1, 4)),
            ),
        },
        reference_blocks={
            "kinematic": kinematic_reference,
            "dynamic": dynamic_reference,
        },
    )


def ball_lagrangian(y: np.ndarray, radius: float = 1.0, gyration: float = 1.0) -> float:
    """Reduced kinetic energy of the rolling ball in quasi-velocities.

    Restricted to the admissible directions (``y4 = y5 = 0``) this is the
    kinematic cost of :func:`rolling_ball`.
    """
    y = np.asarray(y, dtype=float)
    kr = gyration**2 / radius**2
    return 0.5 * float(
        y[0] ** 2
        + y[1] ** 2
        + kr * (y[0] ** 2 + y[1] ** 2 + y[3] ** 2 + y[4] ** 2 - y[1] * y[4] - y[0] * y[3])
        + gyration**2 * y[2] ** 2
    )


def ball_kinematic_reduced_rhs(
    problem: ExampleProblem, d1: float, d2: float
) -> Rhs:
    """Second-order reduced form of the ball's kinematic extremals.

    State ``(x1, x2, dx1, dx2, w3)`` with the conserved momentum sums
    entering as the constants ``d1 = mu1 + mu4`` and ``d2 = mu2 + mu5``.
    """
    c1 = problem.parameters["k"] ** 2 / problem.parameters["r"] ** 2 + 1.0
    c2 = c1
    c3 = problem.parameters["k"] ** 2

    def rhs(state: np.ndarray) -> np.ndarray:
        dx1, dx2, w3 = state[2], state[3], state[4]
        out = np.empty(5)
        out[0] = dx1
        out[1] = dx2
        out[2] = (d2 * w3 - dx2 * w3) / c1
        out[3] = (dx1 * w3 - d1 * w3) / c2
        out[4] = (d1 * dx2 - d2 * dx1) / c3
        return out

    return rhs


def ball_kinematic_reduced_initial(
    problem: ExampleProblem, internal_state: np.ndarray
) -> tuple[np.ndarray, tuple[float, float]]:
    """Reduced initial data from a full internal kinematic state."""
    vec = np.asarray(internal_state, dtype=float)
    c1 = problem.parameters["k"] ** 2 / problem.parameters["r"] ** 2 + 1.0
    c3 = problem.parameters["k"] ** 2
    mu = vec[2:7]
    reduced = np.array([vec[0], vec[1], mu[0] / c1, mu[1] / c1, mu[2] / c3])
    return reduced, (float(mu[0] + mu[3]), float(mu[1] + mu[4]))


def ball_dynamic_reduced_rhs(problem: ExampleProblem, e1: float, e2: float) -> Rhs:
    """Fourth-order reduced form of the ball's dynamic extremals.

    State ``(x1, dx1, ddx1, dddx1, x2, dx2, ddx2, dddx2, w3, dw3, ddw3)``
    with the conserved momentum sums entering as ``e1, e2``.
    """
    r = problem.parameters["r"]
    c3v = problem.parameters["k"] ** 2
    c1 = c3v / r**2 + 1.0
    c2 = c1

    def rhs(state: np.ndarray) -> np.ndarray:
        dx1, dddx1 = state[1], state[3]
        dx2, dddx2 = state[5], state[7]
        w3, ddw3 = state[8], state[10]
        out = np.empty(11)
        out[0] = dx1
        out[1] = state[2]
        out[2] = dddx1
        out[3] = (c3v / (c1 * r)) ** 2 * dx2 * ddw3 - w3 * dddx2 - (e2 / c1**2) * w3
        out[4] = dx2
        out[5] = state[6]
        out[6] = dddx2
        out[7] = -((c3v / (c2 * r)) ** 2) * dx1 * ddw3 + w3 * dddx1 + (e1 / c2**2) * w3
        out[8] = state[9]
        out[9] = ddw3
        out[10] = (
            (c2 / c3v) ** 2 * dx1 * dddx2
            - (c1 / c3v) ** 2 * dx2 * dddx1
            + (e2 / c3v**2) * dx1
            - (e1 / c3v**2) * dx2
        )
        return out

    return rhs


def ball_dynamic_reduced_initial(
    problem: ExampleProblem, internal_state: np.ndarray
) -> tuple[np.ndarray, tuple[float, float]]:
    """Reduced initial data from a full internal dynamic state."""
    vec = np.asarray(internal_state, dtype=float)
    r = problem.parameters["r"]
    c3v = problem.parameters["k"] ** 2
    c1 = c3v / r**2 + 1.0
    y = vec[2:5]
    mu = vec[5:10]
    pi = vec[10:13]
    reduced = np.array(
        [
            vec[0],
            y[0],
            pi[0] / c1**2,
            -mu[0] / c1**2,
            vec[1],
            y[1],
            pi[1] / c1**2,
            -mu[1] / c1**2,
            y[2],
            pi[2] / c3v**2,
            -mu[2] / c3v**2,
        ]
    )
    return reduced, (float(mu[0] + mu[3]), float(mu[1] + mu[4]))


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

_FACTORIES: dict[str, Callable[..., ExampleProblem]] = {
    "rolling_disc": lambda **kw: rolling_disc(),
    "rigid_body": lambda **kw: rigid_body(
        i2=kw.get("I2", 1.0), i3=kw.get("I3", 1.0)
    ),
    "rolling_ball": lambda **kw: rolling_ball(
        radius=kw.get("r", 1.0), gyration=kw.get("k", 1.0)
    ),
}

_KNOWN_PARAMETERS = {
    "rolling_disc": (),
    "rigid_body": ("I2", "I3"),
    "rolling_ball": ("r", "k"),
}


def example_names() -> list[str]:
    return list(_FACTORIES)


def make_example(name: str, parameters: dict[str, float] | None = None) -> ExampleProblem:
    """Build a shipped example by name, applying named parameters."""
    if name not in _FACTORIES:
        raise ValueError(
            f"unknown example {name!r}; available: {', '.join(_FACTORIES)}"
        )
    parameters = dict(parameters or {})
    unknown = set(parameters) - set(_KNOWN_PARAMETERS[name])
    if unknown:
        raise ValueError(
            f"example {name!r} does not take parameters {sorted(unknown)}"
        )
    return _FACTORIES[name](**parameters)
