"""Error maxima of the new routine and the LAPACK-style baseline on
triangular matrices, for the unit-interval and the safe-range regimes.

    python3 scripts/regime_comparison.py --count 65536 --threads 4 > fig2.csv
"""

import argparse
import csv
import sys
from dataclasses import dataclass

from kogsvd.cli import HEADER, csv_row
from kogsvd.harness import RunConfig, run_batch


@dataclass(frozen=True)
class Experiment:
    count: int = 1 << 16
    seed: int = 0x2024
    threads: int = 1
    precisions: tuple = ("binary32", "binary64")
    regimes: tuple = ("circ", "bullet")
    routines: tuple = ("kog", "lasv2")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=Experiment.count)
    ap.add_argument("--seed", type=lambda s: int(s, 16), default=Experiment.seed)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args(argv)
    exp = Experiment(args.count, args.seed, args.threads)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(HEADER)
    for precision in exp.precisions:
        for regime in exp.regimes:
            for routine in exp.routines:
                cfg = RunConfig(precision=precision, shape="triangular", regime=regime, count=exp.count,
                                seed=exp.seed, routine=routine, threads=exp.threads)
                w.writerow(csv_row(cfg, run_batch(cfg)))
                sys.stdout.flush()


if __name__ == "__main__":
    main()
