"""plots <kind> <run-dir> -o out.png

Renders one figure from a persisted run directory (or, for mass_sweep,
an experiment directory holding summary.csv).
"""

from __future__ import annotations

import argparse
import sys

from .io import MissingDataError
from .render import KINDS, FigureJob, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plots", description=__doc__)
    parser.add_argument("kind", choices=sorted(KINDS))
    parser.add_argument("run_dir", help="run directory (experiment dir for mass_sweep)")
    parser.add_argument("-o", "--out", required=True, help="output image path")
    parser.add_argument("--cmap", default="inferno", help="matplotlib colormap")
    parser.add_argument("--x-range", type=float, nargs=2, metavar=("LO", "HI"),
                        help="x-axis limits for position panels")
    parser.add_argument("--fps", type=int, default=12, help="animation frame rate")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    job = FigureJob(
        run_dir=args.run_dir,
        kind=args.kind,
        out_path=args.out,
        colormap=args.cmap,
        x_range=tuple(args.x_range) if args.x_range else None,
        options={"fps": args.fps},
    )
    try:
        path = render(job)
    except MissingDataError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    print(path, file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
