"""Command-line front end.

Subcommands::

    wquantile estimate  [FILE] --estimator hd|thd|type4..type9 --p P ...
    wquantile smooth    [FILE] --half-life H --p P ...
    wquantile mixture   --component PATH:WEIGHT ... [--shift PATH:WEIGHT ...]
    wquantile simulate  sim1|sim2|sim3 --seed S --out DIR

Exit codes: 0 ok, 2 parse error, 3 estimator domain error, 4 bad smoothing
configuration, 5 bad mixture configuration.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from typing import Sequence, TextIO

import numpy as np

from . import simulate as sims
from .csvio import CsvParseError, open_input, read_columns, write_rows
from .errors import WeightedQuantileError
from .estimators import EstimatorKind, estimate, validate_probs
from .ess import EssKind, parse_ess
from .mixture import MixtureComponent, MixtureSpec, mixture_quantile_curve, probability_grid, shift_curve
from .sample import WeightedSample
from .smoothing import DEFAULT_WEIGHT_FLOOR, DecaySpec, MovingQuantileTracker

__all__ = ["main", "build_parser", "EXIT_OK", "EXIT_PARSE", "EXIT_DOMAIN", "EXIT_SMOOTH", "EXIT_MIXTURE"]

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_SMOOTH = 4
EXIT_MIXTURE = 5

U64_MAX = 2**64 - 1


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _u64(text: str) -> int:
    try:
        value = int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if not 0 <= value <= U64_MAX:
        raise argparse.ArgumentTypeError(f"{text} is not an unsigned 64-bit integer")
    return value


def _digits(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if not 1 <= value <= 17:
        raise argparse.ArgumentTypeError("digits must be in 1..17")
    return value


def _ess(text: str) -> EssKind:
    try:
        return parse_ess(text)
    except WeightedQuantileError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _estimator_name(text: str) -> str:
    t = text.strip().lower()
    if t in ("hd", "thd") or (t.startswith("type") and t[4:].isdigit()):
        return t
    raise argparse.ArgumentTypeError(f"unknown estimator {text!r}; use hd, thd or type4..type9")


def _add_estimator_flags(p: argparse.ArgumentParser, default: str) -> None:
    p.add_argument("--estimator", type=_estimator_name, default=default,
                   help=f"hd, thd or type4..type9 (default {default})")
    p.add_argument("--width", type=float, default=None,
                   help="THD interval width (default 1/sqrt(n*))")
    p.add_argument("--ess", type=_ess, default=EssKind(), metavar="KIND",
                   help="kish, hr:<beta> or hr:inf (default kish)")


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--digits", type=_digits, default=15,
                   help="significant digits in the output (default 15, 17 round-trips exactly)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wquantile",
        description="Weighted quantile estimation, quantile exponential smoothing and mixtures.",
        epilog="Exit codes: 0 ok, 2 parse, 3 estimator domain, 4 smoothing config, 5 mixture config.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("estimate", help="quantiles of a weighted sample",
                       description="Read value[,weight] rows and print p,estimate rows.")
    p.add_argument("file", nargs="?", default="-", help="CSV input, '-' for stdin (default)")
    _add_estimator_flags(p, "type7")
    p.add_argument("--p", type=float, action="append", dest="probs", metavar="P",
                   help="probability, repeatable (default 0.5)")
    _add_output_flags(p)

    p = sub.add_parser("smooth", help="running quantiles with exponential decay",
                       description="Read value[,group] rows and print index,p,estimate for every row. "
                                   "With a group column, ages are counted in groups.")
    p.add_argument("file", nargs="?", default="-", help="CSV input, '-' for stdin (default)")
    p.add_argument("--half-life", type=float, required=True, metavar="H",
                   help="age at which an observation's weight halves")
    p.add_argument("--weight-floor", type=float, default=DEFAULT_WEIGHT_FLOOR, metavar="F",
                   help=f"forget observations whose weight share falls below F; 0 keeps everything "
                        f"(default {DEFAULT_WEIGHT_FLOOR:g})")
    _add_estimator_flags(p, "type7")
    p.add_argument("--p", type=float, action="append", dest="probs", metavar="P",
                   help="probability, repeatable (default 0.5)")
    _add_output_flags(p)

    p = sub.add_parser("mixture", help="quantile curve of a weighted mixture",
                       description="Each component file holds a single 'value' column. Every component "
                                   "carries total mass equal to its weight.")
    p.add_argument("--component", action="append", required=True, metavar="PATH:WEIGHT",
                   help="component sample and its mixture weight, repeatable")
    p.add_argument("--shift", action="append", metavar="PATH:WEIGHT",
                   help="components of a second mixture; adds q1,q2,shift=q2-q1 columns")
    p.add_argument("--grid", default="0.01:0.99:0.01", metavar="START:STOP:STEP",
                   help="inclusive probability grid (default 0.01:0.99:0.01)")
    _add_estimator_flags(p, "type7")
    _add_output_flags(p)

    p = sub.add_parser(
        "simulate",
        help="regenerate the simulation studies as CSV",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description=(
            "sim1  running median (type 7, half-life 10) of six series, n = 1000:\n"
            "      a) N(10,1) then N(20,1) after i = 900   b) N(10 + i/100, 1)\n"
            "      c) N(0,1)   d) Cauchy(0,1)\n"
            f"      e) sine wave {sims.SINE_DRIFT:g}*i + {sims.SINE_AMPLITUDE:g}*sin(2*pi*i/{sims.SINE_PERIOD}),"
            f" plus {sims.OUTLIER_SIZE:g} at every {sims.OUTLIER_EVERY}th index\n"
            "      f) dispersing normals with alternating sign blocks of 100\n"
            "sim2  running quartiles of a four-segment series (n = 500) for half-lives 5, 10, 30\n"
            "sim3  type-7 quantile curves (p = 0.01..0.99) of six mixtures, 100 draws per component\n"
            "\nOutput is written to DIR/<name>.csv and is identical for identical arguments."
        ),
    )
    p.add_argument("name", choices=sorted(sims.SIMULATIONS))
    p.add_argument("--seed", type=_u64, required=True, metavar="U64",
                   help="unsigned 64-bit seed")
    p.add_argument("--out", required=True, metavar="DIR",
                   help="output directory, created if needed")
    p.add_argument("--weight-floor", type=float, default=0.0, metavar="F",
                   help="tracker eviction floor for sim1/sim2 (default 0, full history)")
    p.add_argument("--trials", type=int, default=sims.SIM3_TRIALS,
                   help=f"sim3 trial count (default {sims.SIM3_TRIALS})")
    _add_output_flags(p)
    return parser


def _kind(args) -> EstimatorKind:
    try:
        return EstimatorKind.parse(args.estimator, args.width)
    except WeightedQuantileError as exc:
        raise CliError(str(exc), EXIT_DOMAIN) from None


def _read(path: str, extra: Sequence[str]):
    source = "<stdin>" if path == "-" else path
    stream = open_input(path)
    try:
        return read_columns(stream, extra, source)
    finally:
        if path != "-":
            stream.close()


def cmd_estimate(args, out: TextIO) -> None:
    kind = _kind(args)
    probs = args.probs or [0.5]
    cols = _read(args.file, ("weight",))
    if cols.values.size == 0:
        raise CliError("input has no data rows", EXIT_DOMAIN)
    try:
        sample = WeightedSample(cols.values, cols.extra)
        q = estimate(sample, kind, probs, args.ess)
    except WeightedQuantileError as exc:
        raise CliError(str(exc), EXIT_DOMAIN) from None
    write_rows(out, ("p", "estimate"), zip(probs, q), args.digits)


def cmd_smooth(args, out: TextIO) -> None:
    try:
        decay = DecaySpec(args.half_life, args.weight_floor)
    except WeightedQuantileError as exc:
        raise CliError(str(exc), EXIT_SMOOTH) from None
    kind = _kind(args)
    probs = args.probs or [0.5]
    try:
        validate_probs(kind, probs)
    except WeightedQuantileError as exc:
        raise CliError(str(exc), EXIT_DOMAIN) from None
    cols = _read(args.file, ("group",))
    groups = None
    if cols.extra is not None:
        groups = cols.extra
        bad = np.flatnonzero(groups != np.round(groups))
        if bad.size:
            raise CsvParseError("group must be an integer", int(cols.lines[bad[0]]), args.file)
        dec = np.flatnonzero(np.diff(groups) < 0)
        if dec.size:
            raise CsvParseError("group ids must be nondecreasing", int(cols.lines[dec[0] + 1]), args.file)
    tracker = MovingQuantileTracker(decay, kind, args.ess)
    current = np.full(len(probs), np.nan)

    def rows():
        nonlocal current
        for i, v in enumerate(cols.values):
            if not math.isnan(v):
                tracker.push(v, None if groups is None else int(groups[i]))
                try:
                    current = tracker.quantiles(probs)
                except WeightedQuantileError as exc:
                    raise CliError(str(exc), EXIT_DOMAIN) from None
            for p, q in zip(probs, current):
                yield i + 1, p, q

    write_rows(out, ("index", "p", "estimate"), rows(), args.digits)


def _component(text: str) -> MixtureComponent:
    path, sep, weight_text = text.rpartition(":")
    if not sep or not path:
        raise CsvParseError(f"component {text!r} is not PATH:WEIGHT", source="--component")
    try:
        weight = float(weight_text)
    except ValueError:
        raise CsvParseError(f"component weight {weight_text!r} is not a number", source="--component") from None
    values = _read(path, ()).values
    values = values[~np.isnan(values)]
    if not np.all(np.isfinite(values)):
        raise CliError(f"{path}: values must be finite", EXIT_MIXTURE)
    try:
        return MixtureComponent(values, weight)
    except WeightedQuantileError as exc:
        raise CliError(f"{path}: {exc}", EXIT_MIXTURE) from None


def _grid(text: str) -> np.ndarray:
    parts = text.split(":")
    try:
        start, stop, step = (float(x) for x in parts)
    except ValueError:
        raise CsvParseError(f"grid {text!r} is not START:STOP:STEP", source="--grid") from None
    try:
        return probability_grid(start, stop, step)
    except WeightedQuantileError as exc:
        raise CliError(str(exc), EXIT_MIXTURE) from None


def cmd_mixture(args, out: TextIO) -> None:
    kind = _kind(args)
    grid = _grid(args.grid)
    first = MixtureSpec([_component(c) for c in args.component])
    second = MixtureSpec([_component(c) for c in args.shift]) if args.shift else None
    try:
        if second is None:
            p, q = mixture_quantile_curve(first, kind, grid, args.ess)
            rows = zip(p, q)
            header = ("p", "q")
        else:
            p, q1, q2 = shift_curve(first, second, kind, grid, args.ess)
            rows = zip(p, q1, q2, q2 - q1)
            header = ("p", "q1", "q2", "shift")
    except WeightedQuantileError as exc:
        raise CliError(str(exc), EXIT_DOMAIN) from None
    write_rows(out, header, rows, args.digits)


def cmd_simulate(args, out: TextIO) -> None:
    if args.name == "sim3":
        if args.trials < 1:
            raise CliError("trials must be positive", EXIT_PARSE)
        tables = sims.run_sim3(args.seed, args.trials)
    else:
        try:
            DecaySpec(1.0, args.weight_floor)
        except WeightedQuantileError as exc:
            raise CliError(str(exc), EXIT_SMOOTH) from None
        tables = sims.SIMULATIONS[args.name](args.seed, args.weight_floor)
    os.makedirs(args.out, exist_ok=True)
    for table in tables:
        path = os.path.join(args.out, f"{table.name}.csv")
        with open(path, "w", encoding="utf-8", newline="") as fh:
            write_rows(fh, table.header, table.rows, args.digits)
        out.write(path + "\n")


COMMANDS = {
    "estimate": cmd_estimate,
    "smooth": cmd_smooth,
    "mixture": cmd_mixture,
    "simulate": cmd_simulate,
}


def main(argv: Sequence[str] | None = None, stdout: TextIO | None = None) -> int:
    """Run the CLI; returns the exit code instead of raising."""
    out = sys.stdout if stdout is None else stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        COMMANDS[args.command](args, out)
    except CsvParseError as exc:
        print(f"wquantile: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CliError as exc:
        print(f"wquantile: {exc}", file=sys.stderr)
        return exc.code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
