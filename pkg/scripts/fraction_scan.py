#!/usr/bin/env python3
"""Separable-fraction grid scan with progress logging and a resumable cache.

Delegates to the scan subcommand so interrupted runs resume from the JSONL
cache.  The defaults target the 3x17 system at a grid that finishes in
minutes; raise --grid toward 50 for the full, hours-scale map.
"""

import argparse
import os
import sys

from isoqudit.cli import main as cli_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--two-s", type=int, default=16)
    ap.add_argument("--grid", type=int, default=12)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", default="fraction_scan.csv")
    ap.add_argument("--cache", default="fraction_scan_cache.jsonl")
    ap.add_argument("--max-outer", type=int, default=1000)
    ap.add_argument("--cap-terms", type=int, default=2000)
    args = ap.parse_args()

    argv = [
        "scan",
        "--two-s", str(args.two_s),
        "--grid", str(args.grid),
        "--seed", str(args.seed),
        "--out", args.out,
        "--cache", args.cache,
        "--max-outer", str(args.max_outer),
        "--cap-terms", str(args.cap_terms),
        "--tol-converge", "1e-9",
    ]
    print(f"scanning two_s={args.two_s} on a {args.grid}x{args.grid} grid "
          f"(cache: {args.cache})", file=sys.stderr)
    code = cli_main(argv)
    if code == 0:
        print(f"records written to {args.out} "
              f"({os.path.getsize(args.out)} bytes)", file=sys.stderr)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
