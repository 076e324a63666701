"""Pontryagin extremal systems for nonholonomic optimal control.

Builds and integrates the normal and abnormal extremal equations of
kinematic (velocity-controlled) and dynamic (acceleration- or
force-controlled) optimal control problems on Lie algebroids described in
quasi-velocity frames, with numerical validation of the algebroid axioms
and invariant monitoring along trajectories.
"""

from .algebroid import (
    ANTISYMMETRY_TOL,
    COMPATIBILITY_TOL,
    JACOBI_TOL,
    ConstraintDistribution,
    LieAlgebroid,
    ValidationReport,
    check_antisymmetry,
    check_compatibility,
    check_jacobi,
    standard_checks,
    uniform_points,
)
from .diff import EvaluationError, central_gradient, central_jacobian
from .integrate import Trajectory, check_conserved, integrate, integrate_rk45, rk4_step
from .pontryagin import (
    ControlSolve,
    ControlSolveError,
    ConvergenceError,
    DynamicCost,
    DynamicState,
    ExtremalSystem,
    KinematicCost,
    KinematicState,
    RegularityError,
    dynamic_abnormal_flow,
    dynamic_abnormal_rhs,
    dynamic_extremal_rhs,
    dynamic_flow,
    hamiltonian_dynamic,
    hamiltonian_kinematic,
    kinematic_abnormal_flow,
    kinematic_abnormal_rhs,
    kinematic_consistency_residual,
    kinematic_extremal_rhs,
    kinematic_flow,
    solve_optimal_controls_dynamic,
    solve_optimal_controls_kinematic,
)
from .problems import (
    KINDS,
    ExampleProblem,
    ball_dynamic_reduced_initial,
    ball_dynamic_reduced_rhs,
    ball_kinematic_reduced_initial,
    ball_kinematic_reduced_rhs,
    ball_lagrangian,
    disc_reduced_initial,
    disc_reduced_rhs,
    example_names,
    make_example,
    reference_rhs,
    rigid_body,
    rolling_ball,
    rolling_disc,
)

__version__ = "0.1.0"

__all__ = [
    "ANTISYMMETRY_TOL",
    "COMPATIBILITY_TOL",
    "JACOBI_TOL",
    "KINDS",
    "ConstraintDistribution",
    "ControlSolve",
    "ControlSolveError",
    "ConvergenceError",
    "DynamicCost",
    "DynamicState",
    "EvaluationError",
    "ExampleProblem",
    "ExtremalSystem",
    "KinematicCost",
    "KinematicState",
    "LieAlgebroid",
    "RegularityError",
    "Trajectory",
    "ValidationReport",
    "ball_dynamic_reduced_initial",
    "ball_dynamic_reduced_rhs",
    "ball_kinematic_reduced_initial",
    "ball_kinematic_reduced_rhs",
    "ball_lagrangian",
    "central_gradient",
    "central_jacobian",
    "check_antisymmetry",
    "check_compatibility",
    "check_conserved",
    "check_jacobi",
    "disc_reduced_initial",
    "disc_reduced_rhs",
    "dynamic_abnormal_flow",
    "dynamic_abnormal_rhs",
    "dynamic_extremal_rhs",
    "dynamic_flow",
    "example_names",
    "hamiltonian_dynamic",
    "hamiltonian_kinematic",
    "integrate",
    "integrate_rk45",
    "kinematic_abnormal_flow",
    "kinematic_abnormal_rhs",
    "kinematic_consistency_residual",
    "kinematic_extremal_rhs",
    "kinematic_flow",
    "make_example",
    "reference_rhs",
    "rigid_body",
    "rk4_step",
    "rolling_ball",
    "rolling_disc",
    "solve_optimal_controls_dynamic",
    "solve_optimal_controls_kinematic",
    "standard_checks",
    "uniform_points",
]
