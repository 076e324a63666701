"""Shared fixtures: example problems and the standard reference trajectories.

The standard runs integrate every shipped normal extremal system over
t in [0, 5] with RK4 at h = 1e-3 from fixed, well-behaved initial data
(documented state order).  They are session-scoped because several
acceptance criteria reuse the same trajectories.
"""

import numpy as np
import pytest

import extremals as ex

STANDARD_INITIALS = {
    ("rolling_disc", "kinematic"): [0, 0, 0, 0, 1.0, 0.0, 0.3, 0.5],
    ("rolling_disc", "dynamic"): [0, 0, 0, 0, 1.0, 1.0, 1.0, 0, 0, 0, 0, 0],
    ("rigid_body", "kinematic"): [0, 0.1, 0.2, 1.0, 1.0, 0.0],
    ("rigid_body", "dynamic"): [0, 0.1, 0.2, 0.3, 0.2, 0.2, 0.1, 0.1, 0, 0],
    ("rolling_ball", "kinematic"): [0, 0, 0.5, 0.3, 0.4, 0.1, 0.2],
    ("rolling_ball", "dynamic"): [0, 0, 0.3, 0.2, 0.1, 0.2, 0.1, 0.3, 0.05, 0.15, 0, 0, 0],
}


def standard_problem(name):
    # Symmetric rigid body: the conserved-quantity and third-order checks
    # target that case; the asymmetric one is exercised separately.
    return ex.make_example(name)


@pytest.fixture(scope="session")
def shipped_problems():
    return {name: standard_problem(name) for name in ex.example_names()}


@pytest.fixture(scope="session")
def standard_runs(shipped_problems):
    runs = {}
    for (name, kind), initial in STANDARD_INITIALS.items():
        problem = shipped_problems[name]
        system = problem.flow(kind)
        vec = problem.to_internal(kind, np.array(initial, dtype=float))
        traj = ex.integrate(
            system.rhs,
            vec,
            0.0,
            5.0,
            1e-3,
            monitors=system.monitors,
            hamiltonian=system.hamiltonian,
        )
        assert not traj.aborted, (name, kind, traj.failure_reason)
        runs[(name, kind)] = (problem, traj)
    return runs
