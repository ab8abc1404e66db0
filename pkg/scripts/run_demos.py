#!/usr/bin/env python3
"""Run the four qualitative demos and print what each one exhibits."""

import sys

from hksim.cli import main as cli_main


def main() -> int:
    for argv in (
        ["demo", "nofrz", "--steps", "41"],
        ["demo", "initdep", "--delta", "0.001"],
        ["demo", "noorder"],
        ["demo", "nondet", "--eps", "0.1"],
    ):
        print("=" * 60)
        code = cli_main(argv)
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
