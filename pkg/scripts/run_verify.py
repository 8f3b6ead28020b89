#!/usr/bin/env python3
"""Run the full property battery (algebra axioms, exhaustive bc-vs-oracle
pair check, structural laws, fixpoint equivalences, soundness).

Pass --quick for the subsampled variant.
"""

import sys

from satprop.cli import main as cli_main

if __name__ == "__main__":
    sys.exit(cli_main(["verify", *sys.argv[1:]]))
