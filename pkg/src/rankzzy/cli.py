"""Command-line front end.

Exit codes: 0 success, 2 malformed input, 3 infeasible weight domain,
4 solver non-convergence under ``--strict``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import domain as dom
from .errors import (
    BoundsOutOfOrder,
    InfeasibleCoreSum,
    InfeasibleDomain,
    NoConvergence,
    ProblemFormatError,
    RankzzyError,
)
from .harness import (
    DEFAULT_P_SET,
    CorrelationConfig,
    correlation_csv,
    correlation_experiment,
    correlation_summary,
    default_schedule,
    timing_benchmark,
    timing_csv,
    timing_summary,
)
from .matrix import build_matrix
from .pipeline import rank, sensitivity_grid
from .problem_io import load_problem
from .score import format_p, parse_p

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INFEASIBLE = 3
EXIT_NO_CONVERGENCE = 4

THREADS_ENV = "RANKZZY_THREADS"


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _p_arg(text: str) -> float:
    try:
        return parse_p(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number or +/-inf: {text!r}") from None


def _unit_arg(text: str) -> float:
    v = float(text)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1], got {v}")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {v}")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {v}")
    return v


def resolve_threads(arg: int | None) -> int:
    """``--threads`` first, then ``$RANKZZY_THREADS``, then the CPU count."""
    if arg is not None:
        return arg
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            n = int(env)
        except ValueError:
            raise CliError(f"{THREADS_ENV} must be a positive integer, got {env!r}") from None
        if n < 1:
            raise CliError(f"{THREADS_ENV} must be a positive integer, got {env!r}")
        return n
    return os.cpu_count() or 1


def _common(sub: argparse.ArgumentParser, *, problem: bool = True) -> None:
    if problem:
        sub.add_argument("problem", type=Path, help="problem file (JSON)")
    sub.add_argument("--seed", type=int, default=None, help="master seed (default: the file's seed, else 0)")
    sub.add_argument(
        "--threads",
        type=_positive_int,
        default=None,
        help=f"worker threads (default: ${THREADS_ENV}, else the CPU count)",
    )


def _score_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--p", type=_p_arg, default=None, help="power-mean exponent; accepts inf and -inf (default 1)")
    sub.add_argument("--nu", type=_unit_arg, default=None, help="weight of the maximum score, in [0, 1] (default 0.5)")
    sub.add_argument("--epsilon", type=_positive_float, default=None, help="normalization offset (default 1e-4)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rankzzy", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    r = subs.add_parser("rank", help="rank the actions of a problem file", description="Rank the actions of a problem file.")
    _common(r)
    _score_flags(r)
    r.add_argument("-o", "--output", type=Path, default=None, help="report path (default: <problem stem>.report.<format>)")
    r.add_argument("--format", choices=("json", "csv"), default="json", help="report format (default json)")
    r.add_argument("--strict", action="store_true", help="exit 4 when an optimization does not converge")
    r.add_argument("--timings", action="store_true", help="include wall-clock timings in the JSON report")

    s = subs.add_parser(
        "sensitivity", help="aggregated scores over a (p, nu) grid", description="Aggregated scores over a (p, nu) grid."
    )
    _common(s)
    s.add_argument("--epsilon", type=_positive_float, default=None, help="normalization offset (default: file value)")
    s.add_argument("--grid", type=int, default=25, help="points per axis, at least 2 (default 25)")
    s.add_argument("--p-range", type=float, nargs=2, default=(0.0, 2.0), metavar=("LO", "HI"), help="p interval")
    s.add_argument("--nu-range", type=_unit_arg, nargs=2, default=(0.0, 1.0), metavar=("LO", "HI"), help="nu interval")
    s.add_argument("-o", "--output", type=Path, default=None, help="output path (default: <problem stem>.sensitivity.<format>)")
    s.add_argument("--format", choices=("csv", "json"), default="csv", help="output format (default csv)")

    t = subs.add_parser("bench-timing", help="ranking time versus problem size", description="Ranking time versus problem size.")
    _common(t, problem=False)
    t.add_argument("--runs", type=_positive_int, default=5, help="repetitions per size (default 5)")
    t.add_argument("--steps", type=int, default=7, help="sizes between 2x2 and 50x40 (default 7)")
    t.add_argument("--p", type=_p_arg, default=1.0, help="power-mean exponent (default 1)")
    t.add_argument("-o", "--output", type=Path, default=Path("timing"), help="output prefix (default: timing)")
    t.add_argument("--format", choices=("csv", "json"), default="csv", help="per-run record format (default csv)")

    c = subs.add_parser(
        "bench-correlation",
        help="Kendall tau against crisp TOPSIS on random problems",
        description="Kendall tau against crisp TOPSIS on random problems.",
    )
    _common(c, problem=False)
    c.add_argument("--runs", type=_positive_int, default=50, help="random problems (default 50)")
    c.add_argument(
        "--p-set", type=_p_arg, nargs="+", default=list(DEFAULT_P_SET), metavar="P", help="exponents (default -1 0 1 2)"
    )
    c.add_argument("--nu", type=_unit_arg, default=0.5, help="weight of the maximum score (default 0.5)")
    c.add_argument("--epsilon", type=_positive_float, default=1e-4, help="normalization offset (default 1e-4)")
    c.add_argument("-o", "--output", type=Path, default=Path("correlation"), help="output prefix (default: correlation)")
    c.add_argument("--format", choices=("csv", "json"), default="csv", help="per-run record format (default csv)")

    v = subs.add_parser(
        "validate",
        help="check a problem file without ranking",
        description="Check a problem file (schema, assessments, domain feasibility) without ranking.",
    )
    v.add_argument("problem", type=Path, help="problem file (JSON)")
    return parser


# subcommands ----------------------------------------------------------------------

def _load(path: Path, args):
    if not path.is_file():
        raise CliError(f"no such file: {path}")
    problem = load_problem(path)
    overrides = {}
    for key in ("p", "nu", "epsilon"):
        val = getattr(args, key, None)
        if val is not None:
            overrides[key] = val
    if overrides:
        problem = replace(problem, params=replace(problem.params, **overrides))
    if getattr(args, "seed", None) is not None:
        problem = replace(problem, seed=args.seed)
    return problem


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _default_output(problem_path: Path, suffix: str) -> Path:
    return Path(f"{problem_path.stem}.{suffix}")


def cmd_rank(args, out) -> int:
    problem = _load(args.problem, args)
    report = rank(problem, threads=resolve_threads(args.threads), strict=args.strict)
    print(report.table(), file=out)
    path = args.output or _default_output(args.problem, f"report.{args.format}")
    if args.format == "json":
        _write(path, report.to_json(include_timing=args.timings) + "\n")
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["position", "action", "score", "crisp_min", "crisp_max"])
        for k, a in enumerate(report.ranking):
            b = report.bundles[a]
            w.writerow([k + 1, a, repr(b.aggregated), repr(b.crisp_min), repr(b.crisp_max)])
        _write(path, buf.getvalue())
    unconverged = [a for a, b in report.bundles.items() if not b.converged]
    if unconverged:
        print(f"rankzzy: warning: optimizer did not converge for {unconverged}", file=sys.stderr)
    return EXIT_OK


def cmd_sensitivity(args, out) -> int:
    if args.grid < 2:
        raise CliError("--grid must be at least 2")
    problem = _load(args.problem, args)
    grid = sensitivity_grid(
        problem, tuple(args.p_range), tuple(args.nu_range), args.grid, threads=resolve_threads(args.threads)
    )
    path = args.output or _default_output(args.problem, f"sensitivity.{args.format}")
    if args.format == "csv":
        _write(path, grid.to_csv())
    else:
        data = {
            "actions": list(grid.actions),
            "p": grid.p_values.tolist(),
            "nu": grid.nu_values.tolist(),
            "scores": grid.scores.tolist(),
            "top": [[grid.actions[i] for i in row] for row in grid.top.tolist()],
        }
        _write(path, json.dumps(data, indent=2) + "\n")
    shares = ", ".join(f"{a} {100 * grid.top_share(a):.1f}%" for a in grid.actions)
    print(f"top-action share over {args.grid}x{args.grid} cells: {shares}", file=out)
    return EXIT_OK


def cmd_bench_timing(args, out) -> int:
    records = timing_benchmark(default_schedule(args.steps), args.runs, args.seed or 0, args.p)
    summary = timing_summary(records)
    prefix = args.output
    if args.format == "csv":
        _write(Path(f"{prefix}.csv"), timing_csv(records))
    else:
        _write(Path(f"{prefix}.json"), json.dumps([r.__dict__ for r in records], indent=2) + "\n")
    _write(Path(f"{prefix}.summary.json"), json.dumps(summary, indent=2) + "\n")
    for row in summary:
        print(
            f"{row['n_actions']:>3}x{row['n_values']:<3} mean {row['mean']:.3f}s  "
            f"min {row['min']:.3f}s  max {row['max']:.3f}s",
            file=out,
        )
    return EXIT_OK


def cmd_bench_correlation(args, out) -> int:
    records = correlation_experiment(
        args.runs, args.p_set, args.seed or 0, threads=resolve_threads(args.threads), config=_corr_config(args)
    )
    summary = correlation_summary(records)
    prefix = args.output
    if args.format == "csv":
        _write(Path(f"{prefix}.csv"), correlation_csv(records))
    else:
        rows = [{**r.__dict__, "p": format_p(r.p)} for r in records]
        _write(Path(f"{prefix}.json"), json.dumps(rows, indent=2) + "\n")
    _write(Path(f"{prefix}.summary.json"), json.dumps(summary, indent=2) + "\n")
    for key, row in summary.items():
        if row["n"]:
            print(f"p={key:>5}  median tau {row['median']:.3f}  IQR [{row['q25']:.3f}, {row['q75']:.3f}]  n={row['n']}", file=out)
        else:
            print(f"p={key:>5}  no successful runs", file=out)
    return EXIT_OK


def _corr_config(args):
    return CorrelationConfig(nu=args.nu, epsilon=args.epsilon)


def cmd_validate(args, out) -> int:
    if not args.problem.is_file():
        raise CliError(f"no such file: {args.problem}")
    problem = load_problem(args.problem)
    dom.validate(problem.domain)
    build_matrix(problem)
    print(f"{args.problem}: ok ({len(problem.actions)} actions, {len(problem.values)} values)", file=out)
    return EXIT_OK


COMMANDS = {
    "rank": cmd_rank,
    "sensitivity": cmd_sensitivity,
    "bench-timing": cmd_bench_timing,
    "bench-correlation": cmd_bench_correlation,
    "validate": cmd_validate,
}


def _exit_code(exc: RankzzyError) -> int:
    if isinstance(exc, (InfeasibleDomain, InfeasibleCoreSum, BoundsOutOfOrder)):
        return EXIT_INFEASIBLE
    if isinstance(exc, NoConvergence):
        return EXIT_NO_CONVERGENCE
    return EXIT_INPUT


def _diagnose(code: int, kind: str, message: str, step: str | None = None) -> None:
    where = f" [step: {step}]" if step else ""
    print(f"rankzzy: error{where}: {kind}: {message}", file=sys.stderr)


def run(argv=None, out=None) -> int:
    """Parse ``argv`` and run one subcommand; returns the exit code."""
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help (0) or usage errors (2)
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except CliError as exc:
        _diagnose(exc.code, "CliError", str(exc))
        return exc.code
    except ProblemFormatError as exc:
        _diagnose(EXIT_INPUT, type(exc).__name__, str(exc))
        return EXIT_INPUT
    except RankzzyError as exc:
        code = _exit_code(exc)
        _diagnose(code, type(exc).__name__, str(exc), exc.step)
        return code
    except OSError as exc:
        _diagnose(EXIT_INPUT, type(exc).__name__, str(exc))
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
