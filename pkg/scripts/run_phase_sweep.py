#!/usr/bin/env python3
"""Sweep random 3SAT instances across clause/variable ratios and audit the
propagation engine's verdict against the brute-force oracle.

Writes a deterministic aggregate JSON report per ratio point, including
re-runnable DIMACS dumps for every instance where the engine's non-empty
fixpoint disagrees with the oracle.  This is the empirical audit of the
satisfiability-decision claim: soundness (no false UNSAT) must hold
everywhere, the completeness rate is reported as observed.
"""

import argparse
import sys

from satprop.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=12, help="variables per instance")
    parser.add_argument("--count", type=int, default=50, help="instances per ratio point")
    parser.add_argument("--seed", type=int, default=1, help="base generator seed")
    parser.add_argument("--out", default="phase_sweep.json")
    args = parser.parse_args()

    gen = f"n={args.n},m={args.n}..{6 * args.n}..{max(1, args.n // 2)}," \
          f"seed={args.seed},count={args.count}"
    return cli_main(["bench", "--gen", gen, "--oracle", "auto",
                     "--out", args.out])


if __name__ == "__main__":
    sys.exit(main())
