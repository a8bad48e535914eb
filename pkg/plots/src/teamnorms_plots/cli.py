"""Command-line figure renderer.

    plot --csv FILE --figure {main,degree,rho,nsoc} --out FILE [--no-band]

Renders the simulation sweep CSV into the corresponding multi-panel figure;
the output format follows the file suffix (.pdf/.svg recommended, vector).
Exit codes: 0 success, 2 bad arguments or malformed CSV, 3 runtime error.
"""

import argparse
import sys
from pathlib import Path

from .figures import FIGURES, ParseError, figure_spec, render


def _parser():
    parser = argparse.ArgumentParser(
        prog="plot", description="Render CI-band figures from sweep CSVs.")
    parser.add_argument("--csv", type=Path, required=True, help="sweep CSV file")
    parser.add_argument("--figure", choices=FIGURES, required=True)
    parser.add_argument("--out", type=Path, required=True, help="output image path")
    parser.add_argument("--no-band", action="store_true",
                        help="draw means only, without the confidence band")
    return parser


def main(argv=None):
    try:
        args = _parser().parse_args(argv)
        spec = figure_spec(args.figure, args.csv, args.out, shade_ci=not args.no_band)
        render(spec)
        print(f"wrote {args.out}", file=sys.stderr)
        return 0
    except ParseError as exc:
        print(f"plot: parse error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    except Exception as exc:
        print(f"plot: error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
