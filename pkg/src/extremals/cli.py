"""Command-line front end: run extremal integrations, validate algebroids.

Verbs
-----
``run``            integrate one scenario; writes a CSV trajectory table, a
                   line-oriented report and (optionally) figures.
``validate``       run the three algebroid axiom checks for an example.
``list-examples``  enumerate the shipped problems.

Exit codes: 0 success, 1 usage/parse error, 2 validation failure,
3 integration failure.  Every error prints a one-line reason of the form
``error: <reason>`` on stderr.

Scenarios are flat ``key = value`` text files (``#`` starts a comment);
named parameters use dotted keys (``param.I2 = 2.0``).  Command-line flags
override scenario entries.  State vectors in files and on the command line
follow the documented per-example order (see ``extremals.problems``).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .algebroid import ValidationReport, standard_checks, uniform_points
from .integrate import Trajectory, check_conserved, integrate, integrate_rk45
from .problems import KINDS, ExampleProblem, example_names, make_example

USAGE_ERROR = 1
VALIDATION_FAILURE = 2
INTEGRATION_FAILURE = 3

H_DRIFT_TOL = 1e-6
CONSERVED_DRIFT_TOL = 1e-8
OPTIMALITY_TOL = 1e-8
ABNORMAL_REPORT_TOL = 1e-6


class CliError(Exception):
    """Carries the exit code and one-line reason for a failed invocation."""

    def __init__(self, code: int, reason: str) -> None:
        super().__init__(reason)
        self.code = code
        self.reason = reason


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise CliError(USAGE_ERROR, message)


@dataclass
class Scenario:
    """One integration request in documented state order."""

    example: str
    kind: str
    parameters: dict[str, float] = field(default_factory=dict)
    initial: np.ndarray = field(default_factory=lambda: np.array([]))
    t0: float = 0.0
    t1: float = 1.0
    step: float = 1e-3
    integrator: str = "rk4"
    monitors: list[str] | None = None
    output: Path = Path("trajectory.csv")
    figures: bool = False
    control: np.ndarray | None = None


def emit_trajectory(traj: Trajectory, state_labels: list[str], path: Path) -> None:
    """Write the CSV table: ``t,<states...>,H,<residuals...>``.

    Reals carry 17 significant digits so identical runs produce
    byte-identical files; rows are in time order with a trailing newline.
    """
    if len(traj) == 0:
        raise ValueError("refusing to write an empty trajectory")
    residual_names = list(traj.residuals)
    header = ",".join(["t", *state_labels, "H", *residual_names])
    lines = [header]
    for idx in range(len(traj)):
        row = [traj.times[idx], *traj.states[idx], traj.hamiltonian[idx]]
        row += [traj.residuals[name][idx] for name in residual_names]
        lines.append(",".join(f"{value:.17g}" for value in row))
    path.write_text("\n".join(lines) + "\n")


def _report_lines(traj: Trajectory, kind: str) -> list[ValidationReport]:
    reports = []
    h_tol = H_DRIFT_TOL * max(1.0, abs(traj.hamiltonian[0]))
    reports.append(check_conserved(traj, "H", h_tol))
    for name, series in traj.residuals.items():
        if name == "optimality":
            worst = int(np.argmax(series))
            reports.append(
                ValidationReport(
                    identity="optimality",
                    max_residual=float(series[worst]),
                    worst_point=np.array(traj.states[worst]),
                    samples_checked=len(traj),
                    passed=bool(series[worst] <= OPTIMALITY_TOL),
                    tolerance=OPTIMALITY_TOL,
                )
            )
        elif kind.endswith("abnormal"):
            worst = int(np.argmax(np.abs(series)))
            reports.append(
                ValidationReport(
                    identity=name,
                    max_residual=float(abs(series[worst])),
                    worst_point=np.array(traj.states[worst]),
                    samples_checked=len(traj),
                    passed=bool(abs(series[worst]) <= ABNORMAL_REPORT_TOL),
                    tolerance=ABNORMAL_REPORT_TOL,
                )
            )
        else:
            reports.append(check_conserved(traj, name, CONSERVED_DRIFT_TOL))
    return reports


def _parse_floats(text: str, what: str) -> np.ndarray:
    try:
        values = [float(token) for token in text.replace(";", ",").split(",") if token.strip()]
    except ValueError:
        raise CliError(USAGE_ERROR, f"malformed {what}: {text!r}") from None
    if not values:
        raise CliError(USAGE_ERROR, f"empty {what}")
    return np.array(values)


def _parse_param(token: str) -> tuple[str, float]:
    if "=" not in token:
        raise CliError(USAGE_ERROR, f"malformed parameter {token!r}; expected NAME=VALUE")
    name, _, raw = token.partition("=")
    try:
        return name.strip(), float(raw)
    except ValueError:
        raise CliError(USAGE_ERROR, f"malformed parameter value in {token!r}") from None


_SCENARIO_KEYS = {
    "example",
    "kind",
    "initial",
    "t0",
    "t1",
    "step",
    "integrator",
    "monitors",
    "output",
    "figures",
    "control",
}


def load_scenario_file(path: Path) -> dict[str, object]:
    """Parse a flat key = value scenario file into raw option values."""
    if not path.exists():
        raise CliError(USAGE_ERROR, f"scenario file not found: {path}")
    options: dict[str, object] = {}
    parameters: dict[str, float] = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(USAGE_ERROR, f"scenario line {lineno} is not key = value")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key.startswith("param."):
            try:
                parameters[key[6:]] = float(value)
            except ValueError:
                raise CliError(
                    USAGE_ERROR, f"malformed parameter value on scenario line {lineno}"
                ) from None
        elif key in _SCENARIO_KEYS:
            options[key] = value
        else:
            raise CliError(USAGE_ERROR, f"unknown scenario key {key!r}")
    if parameters:
        options["parameters"] = parameters
    return options


def _scenario_from_options(args: argparse.Namespace) -> Scenario:
    options: dict[str, object] = {}
    if args.scenario is not None:
        options.update(load_scenario_file(Path(args.scenario)))

    def pick(flag_value: object, key: str, default: object) -> object:
        if flag_value is not None:
            return flag_value
        return options.get(key, default)

    parameters = dict(options.get("parameters", {}))  # type: ignore[arg-type]
    for token in args.param or []:
        name, value = _parse_param(token)
        parameters[name] = value

    example = pick(args.example, "example", None)
    if example is None:
        raise CliError(USAGE_ERROR, "missing required option --example")
    kind = pick(args.kind, "kind", None)
    if kind is None:
        raise CliError(USAGE_ERROR, "missing required option --kind")
    if kind not in KINDS:
        raise CliError(USAGE_ERROR, f"unknown kind {kind!r}; expected one of {KINDS}")

    raw_initial = pick(args.init, "initial", None)
    if raw_initial is None:
        raise CliError(USAGE_ERROR, "missing required option --init")
    initial = _parse_floats(str(raw_initial), "initial state")

    def pick_float(flag_value: float | None, key: str, default: float | None) -> float:
        value = pick(flag_value, key, default)
        if value is None:
            raise CliError(USAGE_ERROR, f"missing required option --{key}")
        try:
            return float(value)  # type: ignore[arg-type]
        except ValueError:
            raise CliError(USAGE_ERROR, f"malformed {key}") from None

    t0 = pick_float(args.t0, "t0", 0.0)
    t1 = pick_float(args.t1, "t1", None)
    step = pick_float(args.step, "step", None)
    if step <= 0:
        raise CliError(USAGE_ERROR, "nonpositive step")
    if t1 <= t0:
        raise CliError(USAGE_ERROR, "t1 must be greater than t0")

    integrator = str(pick(args.integrator, "integrator", "rk4"))
    if integrator not in ("rk4", "rk45"):
        raise CliError(USAGE_ERROR, f"unknown integrator {integrator!r}")

    raw_monitors = pick(args.monitors, "monitors", None)
    monitors: list[str] | None = None
    if raw_monitors is not None:
        monitors = [token.strip() for token in str(raw_monitors).split(",") if token.strip()]

    raw_control = pick(args.control, "control", None)
    control = None
    if raw_control is not None:
        control = _parse_floats(str(raw_control), "control vector")

    figures_raw = pick(args.figures or None, "figures", False)
    figures = figures_raw in (True, "true", "True", "1", "yes", "on")

    output = Path(str(pick(args.output, "output", "trajectory.csv")))
    return Scenario(
        example=str(example),
        kind=str(kind),
        parameters=parameters,
        initial=initial,
        t0=t0,
        t1=t1,
        step=step,
        integrator=integrator,
        monitors=monitors,
        output=output,
        figures=figures,
        control=control,
    )


def _build_problem(name: str, parameters: dict[str, float]) -> ExampleProblem:
    try:
        return make_example(name, parameters)
    except ValueError as exc:
        raise CliError(VALIDATION_FAILURE, str(exc)) from None


def run(scenario: Scenario) -> int:
    """Integrate one scenario; returns the process exit code."""
    problem = _build_problem(scenario.example, scenario.parameters)
    if scenario.kind.endswith("abnormal"):
        if scenario.control is None:
            raise CliError(
                USAGE_ERROR, "abnormal runs require --control with k entries"
            )
        if scenario.control.size != problem.constrained_rank:
            raise CliError(
                VALIDATION_FAILURE,
                f"control has length {scenario.control.size}, expected "
                f"{problem.constrained_rank}",
            )
    expected = problem.state_dim(scenario.kind)
    if scenario.initial.size != expected:
        raise CliError(
            VALIDATION_FAILURE,
            f"initial state has length {scenario.initial.size}, expected {expected} "
            f"for '{scenario.example}' {scenario.kind}",
        )
    try:
        system = problem.flow(scenario.kind, control=scenario.control)
    except ValueError as exc:
        raise CliError(VALIDATION_FAILURE, str(exc)) from None

    monitors = dict(system.monitors)
    if scenario.monitors is not None:
        unknown = [name for name in scenario.monitors if name not in monitors]
        if unknown:
            raise CliError(
                VALIDATION_FAILURE,
                f"unknown monitors {unknown}; available: {sorted(monitors)}",
            )
        monitors = {name: monitors[name] for name in scenario.monitors}

    initial = problem.to_internal(scenario.kind, scenario.initial)
    try:
        system.rhs(initial)
    except Exception as exc:
        raise CliError(
            VALIDATION_FAILURE, f"initial state rejected: {exc}"
        ) from None
    stepper = integrate if scenario.integrator == "rk4" else integrate_rk45
    # Keep stderr to the single error line even when a trajectory overflows.
    with np.errstate(over="ignore", invalid="ignore"):
        traj = stepper(
            system.rhs,
            initial,
            scenario.t0,
            scenario.t1,
            scenario.step,
            monitors=monitors,
            hamiltonian=system.hamiltonian,
        )
    if traj.aborted:
        raise CliError(
            INTEGRATION_FAILURE, f"integration aborted: {traj.failure_reason}"
        )

    documented = Trajectory(
        times=traj.times,
        states=problem.to_documented(scenario.kind, traj.states),
        hamiltonian=traj.hamiltonian,
        residuals=traj.residuals,
    )
    labels = problem.state_labels(scenario.kind)
    reports = _report_lines(traj, scenario.kind)
    report_text = "\n".join(report.line() for report in reports) + "\n"
    stem = scenario.output.with_suffix("")
    try:
        scenario.output.parent.mkdir(parents=True, exist_ok=True)
        emit_trajectory(documented, labels, scenario.output)
        stem.with_name(stem.name + "_report.txt").write_text(report_text)
    except OSError as exc:
        raise CliError(USAGE_ERROR, f"cannot write output: {exc}") from None
    sys.stdout.write(report_text)

    if scenario.figures:
        from .figures import render_trajectory_figures

        render_trajectory_figures(documented, labels, stem)
    return 0


def validate(name: str, parameters: dict[str, float], samples: int, seed: int) -> int:
    """Axiom checks for one example; exit 0 only if all three pass."""
    problem = _build_problem(name, parameters)
    rng = np.random.default_rng(seed)
    points = uniform_points(problem.base_dim, samples, rng)
    reports = standard_checks(problem.algebroid, points)
    for report in reports:
        sys.stdout.write(report.line() + "\n")
    return 0 if all(report.passed for report in reports) else VALIDATION_FAILURE


def list_examples() -> int:
    for name in example_names():
        problem = make_example(name)
        kinds = [
            kind
            for kind in KINDS
            if not (kind == "kinematic" and problem.kinematic_cost is None)
            and not (kind == "dynamic" and problem.dynamic_cost is None)
        ]
        params = (
            ",".join(f"{key}={value:g}" for key, value in problem.parameters.items())
            or "-"
        )
        sys.stdout.write(
            f"{name}  base_dim={problem.base_dim} rank={problem.rank} "
            f"constrained={problem.constrained_rank} params={params} "
            f"kinds={','.join(kinds)}\n"
        )
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="extremals", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    runp = sub.add_parser("run", help="integrate a scenario and write CSV + report")
    runp.add_argument("--scenario", help="flat key = value scenario file")
    runp.add_argument("--example", help="example name (see list-examples)")
    runp.add_argument("--kind", help="one of " + ", ".join(KINDS))
    runp.add_argument(
        "--param",
        action="append",
        metavar="NAME=VALUE",
        help="named real parameter (repeatable)",
    )
    runp.add_argument("--init", help="comma-separated initial state (documented order)")
    runp.add_argument("--t0", type=float, default=None)
    runp.add_argument("--t1", type=float, default=None)
    runp.add_argument("--step", type=float, default=None)
    runp.add_argument("--integrator", choices=("rk4", "rk45"), default=None)
    runp.add_argument("--monitors", help="comma-separated subset of monitor names")
    runp.add_argument("--output", help="trajectory CSV path")
    runp.add_argument(
        "--figures", action="store_true", help="render PNG figures next to the CSV"
    )
    runp.add_argument("--control", help="constant control vector for abnormal runs")

    valp = sub.add_parser("validate", help="numerically check the algebroid axioms")
    valp.add_argument("--example", required=True)
    valp.add_argument("--param", action="append", metavar="NAME=VALUE")
    valp.add_argument("--samples", type=int, default=100)
    valp.add_argument("--seed", type=int, default=20260810)

    sub.add_parser("list-examples", help="list the shipped example problems")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.verb == "run":
            return run(_scenario_from_options(args))
        if args.verb == "validate":
            parameters = dict(_parse_param(token) for token in args.param or [])
            if args.samples < 1:
                raise CliError(USAGE_ERROR, "samples must be positive")
            return validate(args.example, parameters, args.samples, args.seed)
        return list_examples()
    except CliError as exc:
        print(f"error: {exc.reason}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
