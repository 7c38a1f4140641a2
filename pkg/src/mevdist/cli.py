"""Command-line interface.

Exit codes: 0 success, 1 usage/config, 2 data error, 3 numerical failure,
4 equivalence check failed.
"""
from __future__ import annotations

import argparse
import itertools
import json
import logging
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import serialize, superstat
from .compare import compare_windows, rows_to_csv
from .distributions import BinomialOccurrence, WeibullParams
from .errors import DataError, DegenerateModelError, DomainError, MevdError, NumericalError
from .fitting import fit_gev_annual_maxima, fit_station
from .ingest import DEFAULT_NA, annual_maxima, blockify, parse_daily_csv
from .mevd import ReturnLevelTable, return_levels
from .simulator import (HyperParams, OccurrenceSpec, oracle_return_levels,
                        simulate_annual_maxima, simulate_station)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC, EXIT_EQUIV = 0, 1, 2, 3, 4
DEFAULT_TR = (2, 5, 10, 20, 50, 100, 200)
MODEL_FILES = {"MEVD": "mevd_model.json", "DA18": "da18_model.json", "GEV": "gev_model.json"}

log = logging.getLogger("mevdist")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _float_list(text):
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _fraction(text):
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1], got {value}")
    return value


def _nonneg(text):
    value = float(text)
    if not (math.isfinite(value) and value >= 0):
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {value}")
    return value


def _return_periods(text):
    values = _float_list(text)
    bad = [v for v in values if not v > 1]
    if bad:
        raise argparse.ArgumentTypeError(f"return periods must be > 1, got {bad}")
    return values


def _seed(text):
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must lie in [0, 2**64)")
    return value


def _add_ingest_flags(p):
    p.add_argument("--input", required=True, help="daily CSV (date,value); - reads stdin")
    p.add_argument("--wet-threshold", type=_nonneg, default=0.0,
                   help="events are values strictly above this (default 0)")
    p.add_argument("--min-coverage", type=_fraction, default=0.9,
                   help="minimum fraction of non-missing days to keep a year (default 0.9)")
    p.add_argument("--na", action="append", default=None,
                   help="missing-value sentinel; repeatable (default: empty field and NA)")
    p.add_argument("--estimator", choices=("pwm", "mle"), default="pwm")
    p.add_argument("--min-events", type=_positive_int, default=2,
                   help="minimum events for a year to enter the MEVD fit (default 2)")


def build_parser():
    parser = _Parser(prog="mevdist", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fit", help="fit MEVD, DA18 and GEV models to a daily series")
    _add_ingest_flags(p)
    p.add_argument("--output", required=True, help="directory for the model files")

    p = sub.add_parser("return-levels", help="return levels from fitted model files")
    p.add_argument("--input", required=True, nargs="+",
                   help="model JSON files, or a directory written by `fit`")
    p.add_argument("--tr", type=_return_periods, default=list(DEFAULT_TR))
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", help="output file (default stdout)")

    p = sub.add_parser("compare", help="short-window skill of each model against a truth")
    _add_ingest_flags(p)
    p.add_argument("--window", type=_positive_int, default=20, help="training years S")
    p.add_argument("--tr", type=_return_periods, default=[10.0, 50.0, 100.0])
    p.add_argument("--truth", help="JSON {T_r: level}; default: full-record empirical quantiles")
    p.add_argument("--overlap", action="store_true",
                   help="slide windows by one year (replicates become correlated)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", help="output file (default stdout)")

    p = sub.add_parser("simulate", help="write a synthetic daily station as CSV")
    p.add_argument("--output", help="CSV path (default stdout)")
    p.add_argument("--years", type=_positive_int, default=50)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--start-year", type=_positive_int, default=1900)
    p.add_argument("--occurrence", choices=("binomial", "markov1"), default="binomial")
    p.add_argument("--nt", type=_positive_int, default=365, help="days per simulated year")
    p.add_argument("--p0", type=_fraction, default=0.7, help="dry-day probability (binomial)")
    p.add_argument("--p01", type=_fraction, default=0.2, help="P(wet | dry) (markov1)")
    p.add_argument("--p11", type=_fraction, default=0.5, help="P(wet | wet) (markov1)")
    p.add_argument("--c-median", type=float, default=9.0)
    p.add_argument("--c-log-sd", type=_nonneg, default=0.2)
    p.add_argument("--w-mean", type=float, default=0.8)
    p.add_argument("--w-sd", type=_nonneg, default=0.08)
    p.add_argument("--truth-output", help="also write oracle return levels (JSON) here")
    p.add_argument("--truth-years", type=_positive_int, default=1_000_000)
    p.add_argument("--tr", type=_return_periods, default=list(DEFAULT_TR))

    p = sub.add_parser("verify-equivalence",
                       help="check binomial-occurrence MEVD against its closed form")
    p.add_argument("--p0", type=_float_list,
                   default=[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])
    p.add_argument("--C", dest="C", type=_float_list, default=[1.0, 5.0, 20.0])
    p.add_argument("--w", type=_float_list, default=[0.5, 0.7, 1.0, 1.5])
    p.add_argument("--nt", type=_positive_int, default=365)
    p.add_argument("--grid-size", type=_positive_int, default=1000)
    p.add_argument("--tol", type=float, default=superstat.EQUIVALENCE_TOL)
    p.add_argument("--output", help="output file (default stdout)")
    return parser


def _emit(text, output):
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_blocks(args):
    na = tuple(args.na) if args.na is not None else DEFAULT_NA
    try:
        if args.input == "-":
            series = parse_daily_csv(sys.stdin.buffer, na_values=na, source="<stdin>")
        else:
            with open(args.input, "rb") as fh:
                series = parse_daily_csv(fh, na_values=na, source=args.input)
    except OSError as exc:
        raise DataError(f"cannot read input: {exc}") from None
    try:
        return blockify(series, args.wet_threshold, args.min_coverage)
    except DataError as exc:
        raise DataError(str(exc), source=args.input) from None


def cmd_fit(args):
    blocks = _load_blocks(args)
    mevd = fit_station(blocks, args.estimator, min_events=args.min_events)
    da18 = superstat.fit_da18(blocks, method=args.estimator, min_events=args.min_events)
    maxima = annual_maxima(blocks)
    gev_report = fit_gev_annual_maxima(maxima)
    if not gev_report.converged:
        raise NumericalError(f"GEV fit failed: {gev_report.message}")

    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "MEVD": serialize.mevd_to_dict(mevd),
        "DA18": serialize.da18_to_dict(da18, method=args.estimator.upper()),
        "GEV": serialize.gev_to_dict(gev_report.params, gev_report.n_used),
    }
    for tag, d in files.items():
        (out / MODEL_FILES[tag]).write_text(serialize.dumps(d), encoding="utf-8")

    g = gev_report.params
    print(f"input: {args.input}")
    print(f"years retained: {len(blocks)} ({blocks[0].year}-{blocks[-1].year})")
    print(f"MEVD: S={mevd.S} estimator={mevd.method} mean n={np.mean([n for _, n in mevd.entries]):.2f}")
    print(f"DA18: S={da18.S} N_t={da18.N_t} mu={da18.mu:.6g} KS={da18.ks:.6g}")
    print(f"GEV:  location={g.location:.6g} scale={g.scale:.6g} xi={g.shape_xi:.6g} "
          f"(L-moments, {gev_report.n_used} maxima)")
    print(f"wrote {', '.join(str(out / f) for f in MODEL_FILES.values())}")
    return EXIT_OK


def _model_paths(inputs):
    paths = []
    for item in inputs:
        p = Path(item)
        if p.is_dir():
            found = [p / f for f in MODEL_FILES.values() if (p / f).exists()]
            if not found:
                raise DataError(f"no model files in directory {p}")
            paths.extend(found)
        else:
            paths.append(p)
    return paths


def cmd_return_levels(args):
    table = ReturnLevelTable(())
    for path in _model_paths(args.input):
        if not path.exists():
            raise DataError(f"model file not found: {path}")
        table = table + return_levels(serialize.load_model(path), args.tr)
    _emit(table.to_csv() if args.format == "csv" else table.to_json(), args.output)
    return EXIT_OK


def _read_truth(path):
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read truth file: {exc}", source=path) from None
    levels = raw.get("levels", raw)
    return {float(k): float(v) for k, v in levels.items()}


def cmd_compare(args):
    blocks = _load_blocks(args)
    if args.window > len(blocks):
        raise DataError(f"window of {args.window} years exceeds the {len(blocks)}-year record")
    if args.truth:
        truth = _read_truth(args.truth)
        missing = [t for t in args.tr if t not in truth]
        if missing:
            raise DataError(f"truth file lacks return periods {missing}", source=args.truth)
    else:
        # full-record empirical quantiles; short records give a rough truth, by request
        maxima = np.array([b.maximum if b.n_events else 0.0 for b in blocks])
        truth = {t: float(np.quantile(maxima, 1.0 - 1.0 / t)) for t in args.tr}
    rows = compare_windows(blocks, args.window, args.tr, truth, args.estimator, args.overlap)
    if args.format == "csv":
        text = rows_to_csv(rows)
    else:
        text = json.dumps({"rows": [r.__dict__ for r in rows]}, indent=2) + "\n"
    _emit(text, args.output)
    return EXIT_OK


def _occurrence(args):
    if args.occurrence == "binomial":
        return OccurrenceSpec.binomial(args.p0, N_T=args.nt)
    return OccurrenceSpec.markov1(args.p01, args.p11, N_T=args.nt)


def cmd_simulate(args):
    occ = _occurrence(args)
    hyper = HyperParams(args.c_median, args.c_log_sd, args.w_mean, args.w_sd)
    station = simulate_station(occ, hyper, args.years, args.seed, start_year=args.start_year)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            station.write_csv(fh)
    else:
        station.write_csv(sys.stdout)
    if args.truth_output:
        maxima = simulate_annual_maxima(occ, hyper, args.truth_years, args.seed)
        truth = {
            "seed": args.seed,
            "years": args.truth_years,
            "occurrence": occ.to_dict(),
            "hyper": hyper.to_dict(),
            "levels": {repr(k): v for k, v in oracle_return_levels(maxima, args.tr).items()},
        }
        Path(args.truth_output).write_text(json.dumps(truth, indent=2) + "\n", encoding="utf-8")
    return EXIT_OK


def equivalence_sweep(p0s, Cs, ws, N_t=365, grid_size=1000, tol=superstat.EQUIVALENCE_TOL):
    cases = []
    for p0, C, w in itertools.product(p0s, Cs, ws):
        occ = BinomialOccurrence(N_t, p0)
        theta = WeibullParams(C, w)
        grid = superstat.equivalence_grid(occ, theta, grid_size)
        report = superstat.verify_equivalence(grid, occ, theta, tol=tol)
        cases.append({"p0": p0, "C": C, "w": w, "N_T": N_t, **report.to_dict()})
    worst = max(cases, key=lambda c: c["max_abs_dev"])
    return {
        "n_cases": len(cases),
        "tol": tol,
        "max_abs_dev": worst["max_abs_dev"],
        "argmax_x": worst["argmax_x"],
        "argmax_case": {k: worst[k] for k in ("p0", "C", "w", "N_T")},
        "pass": all(c["pass"] for c in cases),
        "cases": cases,
    }


def cmd_verify_equivalence(args):
    result = equivalence_sweep(args.p0, args.C, args.w, args.nt, args.grid_size, args.tol)
    _emit(json.dumps(result, indent=2) + "\n", args.output)
    return EXIT_OK if result["pass"] else EXIT_EQUIV


COMMANDS = {
    "fit": cmd_fit,
    "return-levels": cmd_return_levels,
    "compare": cmd_compare,
    "simulate": cmd_simulate,
    "verify-equivalence": cmd_verify_equivalence,
}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"mevdist: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="mevdist: %(levelname)s: %(message)s")
    if not args.verbose:
        warnings.simplefilter("ignore")
    try:
        return COMMANDS[args.command](args)
    except (NumericalError, DegenerateModelError) as exc:
        print(f"mevdist: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except DomainError as exc:
        print(f"mevdist: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, MevdError) as exc:
        print(f"mevdist: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
