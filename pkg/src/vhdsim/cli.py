"""Command-line entry point.

    vhdsim rank FILE [--method saw|topsis] [--paper-compat]
    vhdsim simulate SCENARIO --out DIR [--seed N] [--scheme S] [--method M] [--n-candidates N]
    vhdsim sweep SCENARIO --axis scheme|method|n_candidates --out DIR [--values ...] [--seeds ...] [--jobs K]

Exit codes: 0 success, 1 usage error, 2 input validation error, 3 runtime error.
Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__, madm
from .errors import InputError
from .madm import CriterionSpec
from .matrixfile import load_matrix_file
from .network import PAPER_COMPAT
from .output import SUMMARY_FIELDS, rows_csv, summary_row, write_run
from .scenario import Scheme, load_scenario, shipped_scenarios
from .sim import simulate

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_RUNTIME = 0, 1, 2, 3

AXES = ("scheme", "method", "n_candidates")
DEFAULT_AXIS_VALUES = {
    "scheme": [s.value for s in Scheme],
    "method": [m.value for m in madm.Method],
    "n_candidates": [2, 3, 4],
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def paper_compat_specs(specs: list[CriterionSpec]) -> list[CriterionSpec]:
    """Swap in the worked-example directions and normalizations, keeping weights."""
    if len(specs) != len(PAPER_COMPAT):
        raise InputError(f"--paper-compat needs exactly {len(PAPER_COMPAT)} criteria, file has {len(specs)}")
    return [CriterionSpec(s.name, d, s.weight, n) for s, (d, n) in zip(specs, PAPER_COMPAT)]


def _existing_file(text: str) -> Path:
    path = Path(text)
    if text in shipped_scenarios() and not path.exists():
        return shipped_scenarios()[text]
    if not path.is_file():
        raise InputError(f"file not found: {text}")
    return path


def cmd_rank(args) -> int:
    matrix, specs = load_matrix_file(_existing_file(args.file))
    if args.paper_compat:
        specs = paper_compat_specs(specs)
    ranking = madm.rank(matrix, specs, args.method)
    print(" ".join(ranking.ids))
    for position, (alt, score) in enumerate(ranking, start=1):
        print(f"{position} {alt} {score:.3f}")
    return EXIT_OK


def _load(args):
    config = load_scenario(_existing_file(args.scenario))
    return config.with_overrides(
        seed=args.seed,
        scheme=getattr(args, "scheme", None),
        method=getattr(args, "method", None),
        n_candidates=getattr(args, "n_candidates", None),
    )


def _print_table(rows: list[dict]) -> None:
    print(rows_csv(rows, SUMMARY_FIELDS), end="")


def cmd_simulate(args) -> int:
    result = simulate(_load(args))
    write_run(result, args.out)
    _print_table([summary_row(result)])
    return EXIT_OK


def _sweep_cell(config) -> dict:
    return summary_row(simulate(config))


def _parse_seeds(text: str) -> list[int]:
    try:
        seeds = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"--seeds must be comma-separated integers, got {text!r}") from None
    if not seeds:
        raise UsageError("--seeds is empty")
    return seeds


def cmd_sweep(args) -> int:
    base = _load(args)
    if args.values:
        values = [v.strip() for v in args.values.split(",") if v.strip()]
        if args.axis == "n_candidates":
            try:
                values = [int(v) for v in values]
            except ValueError:
                raise UsageError("--values for n_candidates must be integers") from None
    else:
        values = DEFAULT_AXIS_VALUES[args.axis]
    seeds = _parse_seeds(args.seeds) if args.seeds else [base.seed]
    # order-stable output: axis value, then seed
    values, seeds = sorted(set(values)), sorted(set(seeds))
    configs = [base.with_overrides(**{args.axis: v, "seed": s}) for v in values for s in seeds]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_cell, configs))
    else:
        rows = [_sweep_cell(c) for c in configs]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    text = rows_csv(rows, SUMMARY_FIELDS)
    (out / "sweep.csv").write_text(text, encoding="utf-8")
    print(text, end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vhdsim", description="Vertical handover decision simulator (SAW/TOPSIS).")
    parser.add_argument("--version", action="version", version=f"vhdsim {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("rank", help="rank the alternatives of a decision-matrix file")
    p.add_argument("file")
    p.add_argument("--method", choices=[m.value for m in madm.Method], default="saw")
    p.add_argument("--paper-compat", action="store_true",
                   help="use the worked-example directions and normalizations")
    p.set_defaults(func=cmd_rank)

    for name, func, help_text in (
        ("simulate", cmd_simulate, "run one scenario"),
        ("sweep", cmd_sweep, "run a scenario across one axis and seeds"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("scenario", help="scenario JSON file or shipped scenario name")
        p.add_argument("--out", required=True)
        p.add_argument("--seed", type=int)
        p.add_argument("--scheme", choices=[s.value for s in Scheme])
        p.add_argument("--method", choices=[m.value for m in madm.Method])
        if name == "simulate":
            p.add_argument("--n-candidates", type=int, dest="n_candidates")
        else:
            p.add_argument("--axis", choices=AXES, required=True)
            p.add_argument("--values", help="comma-separated axis values (default depends on axis)")
            p.add_argument("--seeds", help="comma-separated seeds (default: scenario seed)")
            p.add_argument("--jobs", type=int, default=1)
        p.set_defaults(func=func)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage().strip())
        if getattr(args, "axis", None) and getattr(args, args.axis, None) is not None:
            raise UsageError(f"--{args.axis.replace('_', '-')} cannot be fixed while sweeping it")
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:  # noqa: BLE001 - last-resort diagnostics
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
