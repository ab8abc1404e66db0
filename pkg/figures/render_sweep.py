#!/usr/bin/env python3
"""Plot mean convergence time against edge density from an aggregate sweep CSV.

Usage: render_sweep.py <agg.csv> <out.png>
"""

import argparse
import sys

from figlib import FigureSpec, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("agg_csv", help="aggregate sweep CSV (n,p,mean_time,...)")
    parser.add_argument("out_image", help="output image path (.png, .svg, ...)")
    parser.add_argument("--x-label")
    parser.add_argument("--y-label")
    args = parser.parse_args(argv)
    try:
        render(FigureSpec(args.agg_csv, "time-vs-p", args.out_image,
                          x_label=args.x_label, y_label=args.y_label))
    except (OSError, ValueError) as exc:
        print(f"render_sweep: error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out_image}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
