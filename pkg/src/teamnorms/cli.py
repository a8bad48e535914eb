"""Command-line entry point.

Two invocation forms share one executable:

    simulate --config FILE [--runs R] [--seed S] [--workers N] --out DIR
             [--dump-landscape PATH]
    simulate sweep --figure {main,degree,rho,nsoc} [--runs R] [--seed S]
             [--workers N] --out DIR

The first runs the grid described by a YAML config (a single cell when no
sweep section is present) and writes DIR/results.csv; the second runs one of
the shipped figure grids and writes DIR/<figure>.csv.  --dump-landscape
writes the replication-0 landscape of the first cell in the stable text
format (debugging aid; the run itself is skipped unless --out is given).

Exit codes: 0 success, 2 configuration error, 3 runtime error.
"""

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .engine import derive_run_seed, run_streams
from .errors import ParameterError
from .experiments import (FIGURES, figure_grids, load_config, run_figure,
                          run_grid, write_csv)
from .landscape import build_interaction_structure, build_landscape, save_landscape

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def _add_common(parser):
    parser.add_argument("--runs", type=int, default=None,
                        help="replications per cell (overrides the config)")
    parser.add_argument("--seed", type=int, default=None,
                        help="base seed (overrides the config)")
    parser.add_argument("--workers", type=int, default=None,
                        help="parallel worker processes (default: serial)")
    parser.add_argument("--out", type=Path, default=None,
                        help="output directory for the CSV")


def _simulate_parser():
    parser = argparse.ArgumentParser(
        prog="simulate", description="Run the scenario grid from a config file.")
    parser.add_argument("--config", type=Path, required=True, help="YAML scenario/grid file")
    _add_common(parser)
    parser.add_argument("--dump-landscape", type=Path, default=None, metavar="PATH",
                        help="write the replication-0 landscape of the first cell and, "
                             "unless --out is also given, skip the simulation")
    return parser


def _sweep_parser():
    parser = argparse.ArgumentParser(
        prog="simulate sweep", description="Run a shipped figure grid.")
    parser.add_argument("--figure", choices=FIGURES, required=True)
    parser.add_argument("--config", type=Path, default=None,
                        help="optional YAML file supplying the base scenario")
    _add_common(parser)
    return parser


def _progress(msg):
    print(msg, file=sys.stderr, flush=True)


def _dump_first_cell(grid, path):
    sid, params = grid.cells()[0]
    landscape_rng, _, _ = run_streams(params, derive_run_seed(params.seed, 0))
    structure = build_interaction_structure(params.p, params.n, params.k,
                                            params.c, params.s, landscape_rng)
    land = build_landscape(structure, params.rho, landscape_rng)
    save_landscape(land, path, seed=params.seed)
    _progress(f"landscape of cell {sid}, replication 0 -> {path}")


def _base_from(args):
    """Base scenario from --config if given, else the defaults."""
    if args.config is not None:
        grid = load_config(args.config)
        return grid.base, grid.runs, grid.confidence
    from .engine import ScenarioParams
    return ScenarioParams(), 200, 0.999


def _run_simulate(argv):
    args = _simulate_parser().parse_args(argv)
    grid = load_config(args.config)
    if args.runs is not None:
        grid = replace(grid, runs=args.runs)
    if args.seed is not None:
        grid = replace(grid, base=replace(grid.base, seed=args.seed))
    if args.dump_landscape is not None:
        _dump_first_cell(grid, args.dump_landscape)
        if args.out is None:
            return EXIT_OK
    if args.out is None:
        raise ParameterError("--out is required to run the simulation")
    args.out.mkdir(parents=True, exist_ok=True)
    results = run_grid(grid, workers=args.workers, progress=_progress)
    target = args.out / "results.csv"
    write_csv(results, target)
    _progress(f"wrote {target}")
    return EXIT_OK


def _run_sweep(argv):
    args = _sweep_parser().parse_args(argv)
    base, runs, confidence = _base_from(args)
    if args.runs is not None:
        runs = args.runs
    if args.seed is not None:
        base = replace(base, seed=args.seed)
    if args.out is None:
        raise ParameterError("--out is required")
    args.out.mkdir(parents=True, exist_ok=True)
    results = run_figure(args.figure, base, runs=runs, confidence=confidence,
                         workers=args.workers, progress=_progress)
    target = args.out / f"{args.figure}.csv"
    write_csv(results, target)
    _progress(f"wrote {target}")
    return EXIT_OK


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        if argv and argv[0] == "sweep":
            return _run_sweep(argv[1:])
        return _run_simulate(argv)
    except ParameterError as exc:
        print(f"simulate: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as exc:
        # argparse exits with 2 on bad usage, which matches EXIT_CONFIG
        return int(exc.code) if exc.code is not None else EXIT_OK
    except Exception as exc:
        print(f"simulate: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
