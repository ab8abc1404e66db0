#!/usr/bin/env python3
"""Plot a per-run energy or second-eigenvalue trace from a step report CSV.

Usage: render_trace.py <report.csv> <out.png> --kind {energy|lambda}
"""

import argparse
import sys

from figlib import FigureSpec, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("report_csv", help="per-step report CSV (t,energy,...,lambda,...)")
    parser.add_argument("out_image", help="output image path")
    parser.add_argument("--kind", choices=["energy", "lambda"], default="energy")
    parser.add_argument("--x-label")
    parser.add_argument("--y-label")
    args = parser.parse_args(argv)
    try:
        render(FigureSpec(args.report_csv, f"{args.kind}-trace", args.out_image,
                          x_label=args.x_label, y_label=args.y_label))
    except (OSError, ValueError) as exc:
        print(f"render_trace: error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out_image}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
