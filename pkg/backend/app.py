# backend/app.py
import argparse
import logging
import sys
from typing import List, Optional

from api.endpoints import cmd_energy, cmd_eval, cmd_green, cmd_phase, cmd_verify, make_budget
from api.schemas import OutputFormat, SuiteName, parse_complex_literal
from core.config import settings
from core.exceptions import CliError, OverlapError

logger = logging.getLogger(__name__)

COMPLEX_OPTIONS = ("--z", "--tau")


def _add_common(parser: argparse.ArgumentParser, default_format: Optional[str] = None) -> None:
    parser.add_argument(
        "--format",
        choices=[f.value for f in OutputFormat],
        default=default_format or settings.DEFAULT_FORMAT,
        help="Output format (default: %(default)s).",
    )
    parser.add_argument("--out", default=None, help="Write output to this path instead of stdout.")
    parser.add_argument("--rel-tol", type=float, default=None, dest="rel_tol", help="Series relative tolerance.")
    parser.add_argument("--max-terms", type=int, default=None, dest="max_terms", help="Series term cap.")
    parser.add_argument("--verbose", action="store_true", help="Debug logging on stderr.")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latmin",
        description="Minimal two-species periodic disc assemblies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="Evaluate f_b and its gradient at z.")
    p.add_argument("--b", type=float, required=True, help="Mix weight b.")
    p.add_argument(
        "--z",
        required=True,
        help="Point of the upper half-plane, e.g. 0.5+0.8i or -0.4+1.2i.",
    )
    _add_common(p)

    p = sub.add_parser("phase", help="Sweep b and classify the minimal lattice.")
    p.add_argument("--b-min", type=float, default=0.0, dest="b_min")
    p.add_argument("--b-max", type=float, default=1.0, dest="b_max")
    p.add_argument("--step", type=float, default=settings.PHASE_STEP)
    p.add_argument("--n-jobs", type=int, default=settings.N_JOBS, dest="n_jobs")
    p.add_argument("--grid", type=int, default=settings.GRID_POINTS, help="Grid verification resolution.")
    _add_common(p, default_format=OutputFormat.CSV.value)

    p = sub.add_parser("verify", help="Run the numerical verification suites.")
    p.add_argument("--suite", choices=[s.value for s in SuiteName], default=SuiteName.ALL.value)
    p.add_argument("--seed", type=int, default=settings.RANDOM_STATE)
    p.add_argument("--n-jobs", type=int, default=settings.N_JOBS, dest="n_jobs")
    _add_common(p)

    p = sub.add_parser("energy", help="Least-energy assembly for species parameters.")
    p.add_argument("--omega1", type=float, required=True)
    p.add_argument("--omega2", type=float, required=True)
    p.add_argument("--g11", type=float, required=True)
    p.add_argument("--g12", type=float, required=True)
    p.add_argument("--g22", type=float, required=True)
    _add_common(p)

    p = sub.add_parser("green", help="Periodic Green's function for the unit-area lattice of tau.")
    p.add_argument("--tau", required=True, help="Lattice shape tau = a2/a1.")
    p.add_argument("--point", type=float, nargs=2, required=True, metavar=("T1", "T2"), help="Cell coordinates.")
    _add_common(p)

    return parser


def _configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else getattr(logging, settings.LOG_LEVEL.upper(), logging.WARNING)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


def _join_complex_values(argv: List[str]) -> List[str]:
    """'--z -0.4+1.2i' -> '--z=-0.4+1.2i', so a leading minus is not read as an option"""
    joined: List[str] = []
    tokens = iter(argv)
    for token in tokens:
        if token in COMPLEX_OPTIONS:
            value = next(tokens, None)
            if value is None:
                joined.append(token)
            elif value.startswith("-") and _is_complex_literal(value):
                joined.append(f"{token}={value}")
            else:
                joined.extend([token, value])
        else:
            joined.append(token)
    return joined


def _is_complex_literal(text: str) -> bool:
    try:
        parse_complex_literal(text)
    except ValueError:
        return False
    return True


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(_join_complex_values(sys.argv[1:] if argv is None else argv))
    except SystemExit as exc:
        return int(exc.code or 0)

    _configure_logging(args.verbose)
    fmt = OutputFormat(args.format)

    try:
        budget = make_budget(args.rel_tol, args.max_terms)
        if args.command == "eval":
            return cmd_eval(args.b, args.z, fmt, args.out, budget)
        if args.command == "phase":
            return cmd_phase(
                args.b_min, args.b_max, args.step, fmt, args.out, budget, n_jobs=args.n_jobs, grid=args.grid
            )
        if args.command == "verify":
            return cmd_verify(args.suite, fmt, args.out, budget, seed=args.seed, n_jobs=args.n_jobs)
        if args.command == "energy":
            return cmd_energy(args.omega1, args.omega2, args.g11, args.g12, args.g22, fmt, args.out, budget)
        if args.command == "green":
            t1, t2 = args.point
            return cmd_green(args.tau, t1, t2, fmt, args.out, budget)
    except OverlapError as exc:
        sys.stderr.write(f"error: {exc.message} (max admissible omega scale {exc.max_omega_scale:.6g})\n")
        return exc.exit_code
    except CliError as exc:
        sys.stderr.write(f"error: {exc.message}\n")
        return exc.exit_code

    return 2


if __name__ == "__main__":
    sys.exit(main())
