"""
main.py - Gap statistic toolkit (command line)

Estimates the number of clusters in a CSV dataset with the Gap statistic,
runs the simulation families, evaluates the analytic formulas and exposes
average-linkage clustering on its own.

Usage:
    python3 main.py run --input iris.csv --header --label-column 4 --metric euclidean
    python3 main.py simulate --family overlap --param 1,3,5 --reps 50 --out results/overlap.csv
    python3 main.py analyze rect-distance --a 11 --b 6
    python3 main.py analyze predict-m --sigma 1 --delta 5 --davg 3.48 --variant log
    python3 main.py analyze concentration --p 100 --n 100 --seed 1
    python3 main.py cluster --input points.csv --k 2 --out labels.csv

Exit status: 0 on success (an undefined "nd" selection included),
1 on a numerical failure, 2 on bad input or flags.
"""

import argparse
import json
import math
import os
import sys
from pathlib import Path
from typing import List, Optional

REPO_ROOT = os.path.abspath(os.path.dirname(__file__))
SRC_DIR = os.path.join(REPO_ROOT, "src")
if SRC_DIR not in sys.path:
    sys.path.insert(0, SRC_DIR)

import pandas as pd

from analysis.geometry import (
    DIRECT,
    LOG,
    RectSpec,
    UnequalSizeScenario,
    distance_concentration,
    expected_rect_distance,
    feasible_ratio,
    monte_carlo_rect_distance,
)
from clustering.linkage import average_linkage, cut_tree
from clustering.metric import EUCLIDEAN, METRICS, SQEUCLIDEAN, pairwise_matrix
from common.errors import InvalidConfig, InvalidK, NumericalError, UsageError
from common.log import setup_logging
from data_io.dataset_io import load_csv
from gap.gapstat import DEFAULT_B, DEFAULT_K_MAX, DEFAULT_SEED, GapConfig, GapVariant, curve_frame, estimate_clusters
from gap.report import write_report
from gap.streams import derive_rng
from simulation.simharness import (
    DEFAULT_VARIANTS,
    FAMILIES,
    modal_selection,
    summarize,
    sweep,
    write_summary,
    write_traces,
)

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_USAGE = 2

VARIANT_NAMES = [v.value for v in GapVariant]


# ------------------ Parsing helpers ------------------
def parse_float_list(text: str) -> List[float]:
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("expected at least one value")
    return values


def parse_variant_list(text: str) -> List[GapVariant]:
    names = [part.strip() for part in text.split(",") if part.strip()]
    if not names:
        raise argparse.ArgumentTypeError("expected at least one Gap variant")
    try:
        return [GapVariant.parse(name) for name in names]
    except InvalidConfig as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def json_safe(payload: dict) -> dict:
    """Non-finite floats become None so the output stays strict JSON."""
    return {key: None if isinstance(value, float) and not math.isfinite(value) else value
            for key, value in payload.items()}


def print_json(payload: dict) -> None:
    print(json.dumps(json_safe(payload), indent=2, allow_nan=False))


def add_input_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", required=True, help="CSV file of observations")
    parser.add_argument("--header", action="store_true", help="First line holds feature names")
    parser.add_argument("--label-column", type=int, default=None,
                        help="0-based column with row labels (excluded from the features)")


def load_input(args):
    return load_csv(args.input, has_header=args.header, label_column=args.label_column)


# ------------------ Subcommands ------------------
def cmd_run(args) -> int:
    data = load_input(args)
    config = GapConfig(
        k_max=args.kmax,
        b=args.b,
        variant=args.variant,
        seed=args.seed,
        metric=args.metric,
        sd_ddof=args.sd_ddof,
        threads=args.threads,
    )
    result = estimate_clusters(data, config)
    if args.out:
        write_report(result, args.out, data=data, source=args.input)
    if args.plot_data:
        path = Path(args.plot_data)
        path.parent.mkdir(parents=True, exist_ok=True)
        curve_frame(result.curve).to_csv(path, index=False)
    print(result.selection.label)
    return EXIT_OK


def cmd_simulate(args) -> int:
    config = GapConfig(k_max=args.kmax, b=args.b, metric=args.metric, threads=1)
    reports = sweep(args.family, args.param, args.reps, config, args.variants, args.seed, args.threads)

    if args.out:
        out = Path(args.out)
        write_summary(reports, out)
        write_traces(reports, out.with_suffix(".traces.json"))

    table = summarize(reports)
    print(table[["family", "param", "variant", "repetitions"] + [c for c in table.columns if c.startswith("pct_")]]
          .to_string(index=False))
    for report in reports:
        modal = ", ".join(f"{v.value}={modal_selection(report, v)}" for v in args.variants)
        print(f"[INFO] {report.family}({report.param}) modal: {modal}")
    return EXIT_OK


def cmd_rect_distance(args) -> int:
    rect = RectSpec(args.a, args.b)
    payload = {"a": rect.a, "b": rect.b, "expected_distance": expected_rect_distance(rect)}
    if args.monte_carlo:
        mean, se = monte_carlo_rect_distance(rect, derive_rng(args.seed), n_pairs=args.monte_carlo)
        payload["monte_carlo_mean"] = mean
        payload["monte_carlo_se"] = se
    print_json(payload)
    return EXIT_OK


def cmd_predict_m(args) -> int:
    scenario = UnequalSizeScenario(sigma=args.sigma, delta=args.delta, m=args.m, d_avg=args.davg)
    rng = derive_rng(args.seed) if args.davg is None else None
    result = feasible_ratio(scenario, args.variant, rng)
    print_json({
        "variant": result.variant,
        "m": scenario.m,
        "holds": result.holds,
        "max_m": result.max_m,
        "e_d1": result.e_d1,
        "e_d2": result.e_d2,
        "d_avg": result.d_avg,
    })
    return EXIT_OK


def cmd_concentration(args) -> int:
    spread = distance_concentration(args.p, args.n, derive_rng(args.seed))
    print_json({"p": args.p, "n": args.n, "seed": args.seed, "relative_spread": spread})
    return EXIT_OK


ANALYZE_FORMULAS = {
    "rect-distance": cmd_rect_distance,
    "predict-m": cmd_predict_m,
    "concentration": cmd_concentration,
}


def cmd_analyze(args) -> int:
    return ANALYZE_FORMULAS[args.formula](args)


def cmd_cluster(args) -> int:
    data = load_input(args)
    if not 1 <= args.k <= data.n:
        raise InvalidK(f"k must be in [1, {data.n}], got {args.k}")
    dm = pairwise_matrix(data, args.metric, threads=args.threads)
    part = cut_tree(average_linkage(dm), args.k)
    frame = pd.DataFrame({"row": range(data.n), "label": part.labels})
    if args.out:
        path = Path(args.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False)
    else:
        print(frame.to_csv(index=False), end="")
    return EXIT_OK


# ------------------ Argument parser ------------------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", action="store_true", help="Log progress to stderr")
    common.add_argument("--debug", action="store_true", help="Log every replicate to stderr")
    common.add_argument("--threads", type=int, default=1, help="Worker threads (results do not depend on it)")

    parser = argparse.ArgumentParser(description="Gap statistic toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", parents=[common], help="Estimate the number of clusters of a CSV dataset")
    add_input_flags(run)
    run.add_argument("--variant", choices=VARIANT_NAMES, default=GapVariant.LOG_POOLED.value)
    run.add_argument("--kmax", type=int, default=DEFAULT_K_MAX)
    run.add_argument("--b", type=int, default=DEFAULT_B, help="Number of reference datasets")
    run.add_argument("--seed", type=int, default=DEFAULT_SEED)
    run.add_argument("--metric", choices=list(METRICS), default=SQEUCLIDEAN)
    run.add_argument("--sd-ddof", type=int, choices=[0, 1], default=0,
                     help="Divisor of the reference standard deviation: B (0) or B-1 (1)")
    run.add_argument("--out", help="JSON report path")
    run.add_argument("--plot-data", help="CSV path for the Gap curve plot data")
    run.set_defaults(handler=cmd_run)

    sim = sub.add_parser("simulate", parents=[common], help="Run a simulation family")
    sim.add_argument("--family", required=True, choices=list(FAMILIES))
    sim.add_argument("--param", required=True, type=parse_float_list,
                     help="Delta (overlap), size row 1-5 (unequal) or dimension (degenerate); comma list for a sweep")
    sim.add_argument("--reps", type=int, default=50)
    sim.add_argument("--variants", type=parse_variant_list, default=list(DEFAULT_VARIANTS))
    sim.add_argument("--seed", type=int, default=0, help="Master seed")
    sim.add_argument("--kmax", type=int, default=DEFAULT_K_MAX)
    sim.add_argument("--b", type=int, default=DEFAULT_B)
    sim.add_argument("--metric", choices=list(METRICS), default=EUCLIDEAN,
                     help="Distance used by the simulation families (plain Euclidean by default)")
    sim.add_argument("--out", help="Frequency CSV path; traces go to <stem>.traces.json")
    sim.set_defaults(handler=cmd_simulate)

    analyze = sub.add_parser("analyze", help="Evaluate an analytic formula")
    formulas = analyze.add_subparsers(dest="formula", required=True)

    rect = formulas.add_parser("rect-distance", parents=[common], help="Expected distance in an a x b rectangle")
    rect.add_argument("--a", type=float, required=True)
    rect.add_argument("--b", type=float, required=True)
    rect.add_argument("--monte-carlo", type=int, default=0, metavar="PAIRS",
                      help="Also report a Monte Carlo estimate from this many pairs")
    rect.add_argument("--seed", type=int, default=DEFAULT_SEED)
    rect.set_defaults(handler=cmd_analyze)

    predict = formulas.add_parser("predict-m", parents=[common], help="Largest size ratio still detected as k = 2")
    predict.add_argument("--sigma", type=float, default=1.0)
    predict.add_argument("--delta", type=float, default=5.0)
    predict.add_argument("--davg", type=float, default=None,
                         help="Mean between-cluster distance; estimated by Monte Carlo when omitted")
    predict.add_argument("--variant", choices=[LOG, DIRECT], default=LOG)
    predict.add_argument("--m", type=float, default=1.0, help="Size ratio N1/N2 to check")
    predict.add_argument("--seed", type=int, default=DEFAULT_SEED)
    predict.set_defaults(handler=cmd_analyze)

    conc = formulas.add_parser("concentration", parents=[common], help="Relative spread of pairwise distances")
    conc.add_argument("--p", type=int, required=True)
    conc.add_argument("--n", type=int, default=100)
    conc.add_argument("--seed", type=int, default=DEFAULT_SEED)
    conc.set_defaults(handler=cmd_analyze)

    cluster = sub.add_parser("cluster", parents=[common], help="Average-linkage partition into k clusters")
    add_input_flags(cluster)
    cluster.add_argument("--k", type=int, required=True)
    cluster.add_argument("--metric", choices=list(METRICS), default=SQEUCLIDEAN)
    cluster.add_argument("--out", help="CSV path for (row, label); stdout when omitted")
    cluster.set_defaults(handler=cmd_cluster)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    setup_logging(verbose=args.verbose, debug=args.debug)
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"[FAIL] {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"[FAIL] {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"[FAIL] numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
