"""Relative error of the smaller singular value of general matrices as the
lower exponent cutoff varsigma grows (elements in [2^varsigma mu, nu/4]).

    python3 scripts/varsigma_sweep.py --start 0 --stop 2000 --step 100 --count 16384
"""

import argparse
import csv
import sys

from kogsvd.cli import HEADER, csv_row
from kogsvd.harness import RunConfig, run_batch


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--precision", choices=["single", "double"], default="double")
    ap.add_argument("--start", type=int, default=0)
    ap.add_argument("--stop", type=int, default=2000)
    ap.add_argument("--step", type=int, default=100)
    ap.add_argument("--count", type=int, default=1 << 14)
    ap.add_argument("--seed", type=lambda s: int(s, 16), default=0x4)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args(argv)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(HEADER)
    for vs in range(args.start, args.stop + 1, args.step):
        # varsigma = 0 is the plain safe-range regime
        kw = dict(regime="sigma", varsigma=vs) if vs else dict(regime="bullet")
        try:
            cfg = RunConfig(precision=args.precision, shape="general", count=args.count, seed=args.seed,
                            threads=args.threads, **kw)
        except ValueError as exc:
            print(f"skipping varsigma={vs}: {exc}", file=sys.stderr)
            continue
        w.writerow(csv_row(cfg, run_batch(cfg)))
        sys.stdout.flush()


if __name__ == "__main__":
    main()
