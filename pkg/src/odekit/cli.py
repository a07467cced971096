"""Command line front end: integrate, order, bench.

``integrate`` writes a CSV trajectory observed on a uniform grid,
``order`` prints a dt/error table with the fitted convergence slope,
and ``bench`` prints the step and evaluation counters of one or more
steppers on the same problem.  Exit codes: 0 on success, 1 on usage
errors, 2 on numerical failure.
"""

from __future__ import annotations

import argparse
import sys

from .controlled import ControlledStepper, ControllerParams
from .dense import DenseOutputDopri5
from .errors import SolverError
from .explicit import CashKarp54, DormandPrince5, ExplicitEuler, RungeKutta4
from .implicit import ImplicitEuler
from .integrate import integrate_const
from .systems import SYSTEMS, order_study

INTEGRATE_STEPPERS = ("euler", "rk4", "implicit_euler", "ck54", "dopri5", "dopri5_dense")
ORDER_STEPPERS = ("euler", "rk4", "implicit_euler", "ck54", "dopri5")


class _Parser(argparse.ArgumentParser):
    """Argument parser that exits with status 1 on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _fmt(value):
    return f"{value:.17g}"


def _usage_fail(message):
    sys.stderr.write(f"error: {message}\n")
    return 1


def _plain_stepper(name):
    return {
        "euler": ExplicitEuler,
        "rk4": RungeKutta4,
        "implicit_euler": ImplicitEuler,
        "ck54": CashKarp54,
        "dopri5": DormandPrince5,
    }[name]()


def _build_stepper(name, params):
    if name in ("euler", "rk4", "implicit_euler"):
        return _plain_stepper(name)
    if name == "ck54":
        return ControlledStepper(CashKarp54(), params)
    if name == "dopri5":
        return ControlledStepper(DormandPrince5(), params)
    return DenseOutputDopri5(params)


def _resolve_system(name):
    if name not in SYSTEMS:
        options = ", ".join(sorted(SYSTEMS))
        raise LookupError(f"unknown system '{name}' (choose from: {options})")
    return SYSTEMS[name]


def _parse_x0(text, system):
    try:
        values = [float(part) for part in text.split(",")]
    except ValueError:
        raise LookupError(f"cannot parse initial state '{text}'") from None
    if len(values) != system.dimension:
        raise LookupError(
            f"system '{system.name}' needs {system.dimension} components, got {len(values)}"
        )
    return values


def _stepping_system(stepper_name, system):
    if stepper_name == "implicit_euler":
        if system.jacobian is None:
            raise LookupError(f"system '{system.name}' carries no Jacobian")
        return system.jacobian_system()
    return system


def _cmd_integrate(args):
    system = _resolve_system(args.system)
    if args.stepper not in INTEGRATE_STEPPERS:
        raise LookupError(
            f"unknown stepper '{args.stepper}' (choose from: "
            + ", ".join(INTEGRATE_STEPPERS)
            + ")"
        )
    if args.t1 <= args.t0:
        raise LookupError("--t1 must exceed --t0")
    if args.dt <= 0.0:
        raise LookupError("--dt must be positive")
    x0 = (
        list(system.default_state)
        if args.x0 is None
        else _parse_x0(args.x0, system)
    )
    params = ControllerParams(atol=args.atol, rtol=args.rtol)
    stepper = _build_stepper(args.stepper, params)
    target = _stepping_system(args.stepper, system)

    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        out.write("t," + ",".join(f"x{i}" for i in range(system.dimension)) + "\n")

        def observer(x, t):
            out.write(_fmt(t) + "," + ",".join(_fmt(v) for v in x) + "\n")

        integrate_const(stepper, target, x0, args.t0, args.t1, args.dt, observer)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _cmd_order(args):
    system = _resolve_system(args.system)
    if args.stepper not in ORDER_STEPPERS:
        raise LookupError(
            f"stepper '{args.stepper}' is not usable for order studies "
            "(choose from: " + ", ".join(ORDER_STEPPERS) + ")"
        )
    if system.exact is None:
        solvable = ", ".join(sorted(n for n, s in SYSTEMS.items() if s.exact))
        raise LookupError(
            f"system '{system.name}' has no exact solution (choose from: {solvable})"
        )
    if args.levels < 3:
        raise LookupError("--levels must be at least 3")
    if args.t1 <= args.t0 or args.dt <= 0.0:
        raise LookupError("need --t1 above --t0 and positive --dt")
    x0 = None if args.x0 is None else _parse_x0(args.x0, system)
    stepper = _plain_stepper(args.stepper)
    dts = [args.dt / 2**k for k in range(args.levels)]
    study = order_study(stepper, system, x0, args.t0, args.t1, dts)
    excluded = set(study.excluded)
    print("dt,error,status")
    for d, e in zip(study.dts, study.errors):
        status = "underflow" if (d, e) in excluded else "used"
        print(f"{_fmt(d)},{_fmt(e)},{status}")
    print(f"slope,{_fmt(study.slope)}")
    return 0


def _cmd_bench(args):
    system = _resolve_system(args.system)
    names = [n.strip() for n in args.stepper.split(",") if n.strip()]
    if not names:
        raise LookupError("no stepper names given")
    for name in names:
        if name not in INTEGRATE_STEPPERS:
            raise LookupError(
                f"unknown stepper '{name}' (choose from: "
                + ", ".join(INTEGRATE_STEPPERS)
                + ")"
            )
    if args.t1 <= args.t0 or args.dt <= 0.0:
        raise LookupError("need --t1 above --t0 and positive --dt")
    x0 = (
        list(system.default_state)
        if args.x0 is None
        else _parse_x0(args.x0, system)
    )
    params = ControllerParams(atol=args.atol, rtol=args.rtol)
    print("stepper,steps_attempted,steps_accepted,steps_rejected,system_evaluations")
    for name in names:
        stepper = _build_stepper(name, params)
        target = _stepping_system(name, system)
        report = integrate_const(stepper, target, x0, args.t0, args.t1, args.dt)
        print(
            f"{name},{report.steps_attempted},{report.steps_accepted},"
            f"{report.steps_rejected},{report.system_evaluations}"
        )
    return 0


def _add_shared(parser, t1_default=None):
    parser.add_argument("--system", required=True, help="system name")
    parser.add_argument("--stepper", required=True, help="stepper name")
    parser.add_argument("--t0", type=float, default=0.0)
    parser.add_argument(
        "--t1", type=float, required=t1_default is None, default=t1_default
    )
    parser.add_argument("--atol", type=float, default=1e-6)
    parser.add_argument("--rtol", type=float, default=1e-6)
    parser.add_argument("--x0", help="comma separated initial state")


def build_parser():
    parser = _Parser(prog="odekit", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_int = sub.add_parser("integrate", help="write an observed CSV trajectory")
    _add_shared(p_int)
    p_int.add_argument("--dt", type=float, required=True, help="observation grid width")
    p_int.add_argument("--out", help="output file (default: stdout)")
    p_int.set_defaults(func=_cmd_integrate)

    p_ord = sub.add_parser("order", help="fit the observed convergence order")
    _add_shared(p_ord, t1_default=1.0)
    p_ord.add_argument("--dt", type=float, default=0.2, help="coarsest step width")
    p_ord.add_argument("--levels", type=int, default=5, help="number of halvings")
    p_ord.set_defaults(func=_cmd_order)

    p_ben = sub.add_parser("bench", help="print step and evaluation counters")
    _add_shared(p_ben)
    p_ben.add_argument("--dt", type=float, required=True, help="observation grid width")
    p_ben.set_defaults(func=_cmd_bench)

    return parser


def run_cli(argv=None):
    """Parse arguments and run; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except LookupError as exc:
        return _usage_fail(str(exc))
    except SolverError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return 2


def main():
    sys.exit(run_cli())
