"""Command-line batch runner writing one CSV row per batch."""

from __future__ import annotations

import argparse
import csv
import io
import re
import sys
from dataclasses import replace

from .harness import BatchAbort, RunConfig, run_batch

HEADER = ["precision", "shape", "regime", "varsigma", "count", "seed", "routine",
          "reG", "reS1", "reS2", "reU", "reV", "maxKappa2"]

_SHORT_PRECISION = {"binary32": "single", "binary64": "double"}
_SHORT_SHAPE = {"triangular": "tri", "general": "gen"}


def _sweep(text: str) -> range:
    m = re.fullmatch(r"varsigma=(\d+)\.\.(\d+)(?::(\d+))?", text)
    if not m:
        raise argparse.ArgumentTypeError("expected varsigma=A..B[:step]")
    a, b, step = int(m[1]), int(m[2]), int(m[3] or 1)
    if step < 1 or b < a:
        raise argparse.ArgumentTypeError("need A <= B and step >= 1")
    return range(a, b + 1, step)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kogsvd", description=__doc__)
    ap.add_argument("--precision", choices=["single", "double"], default="double")
    ap.add_argument("--shape", choices=["tri", "gen"], default="tri")
    ap.add_argument("--regime", choices=["circ", "bullet", "sigma"], default="bullet")
    ap.add_argument("--varsigma", type=int, default=0)
    ap.add_argument("--count", type=int, default=1 << 12)
    ap.add_argument("--seed", type=lambda s: int(s, 16), default=0, help="64-bit seed in hex")
    ap.add_argument("--routine", choices=["kog", "lasv2"], default="kog")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", default="-", help="CSV path, '-' for stdout")
    ap.add_argument("--sweep", type=_sweep, help="varsigma=A..B:step, one row per value")
    ap.add_argument("--no-cr-hypot", action="store_true", help="assume hypot is not correctly rounded")
    ap.add_argument("--exact-minus", action="store_true")
    ap.add_argument("--kahan-det", action="store_true")
    ap.add_argument("--coverage", action="store_true", help="print branch counts to stderr")
    return ap


def csv_row(cfg: RunConfig, stats) -> list[str]:
    return [
        _SHORT_PRECISION[cfg.precision],
        _SHORT_SHAPE[cfg.shape],
        cfg.regime,
        str(cfg.varsigma),
        str(cfg.count),
        f"{cfg.seed:#x}",
        cfg.routine,
        *stats.row(),
    ]


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        base = RunConfig(
            precision=args.precision,
            shape=args.shape,
            regime="sigma" if args.sweep else args.regime,
            varsigma=args.sweep[0] if args.sweep else args.varsigma,
            count=args.count,
            seed=args.seed,
            routine=args.routine,
            threads=args.threads,
            cr_hypot=not args.no_cr_hypot,
            exact_minus=args.exact_minus,
            kahan_det=args.kahan_det,
        )
        configs = [replace(base, varsigma=v) for v in args.sweep] if args.sweep else [base]
    except ValueError as exc:
        print(f"kogsvd: {exc}", file=sys.stderr)
        return 2
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    status = 0
    for cfg in configs:
        try:
            stats = run_batch(cfg)
        except BatchAbort as exc:
            print(f"kogsvd: abort: {exc}", file=sys.stderr)
            status = 1
            continue
        w.writerow(csv_row(cfg, stats))
        if args.coverage:
            for k, v in sorted(stats.coverage.items()):
                print(f"{k}\t{v}", file=sys.stderr)
    if args.out == "-":
        sys.stdout.write(buf.getvalue())
    else:
        with open(args.out, "w", newline="") as fh:
            fh.write(buf.getvalue())
    return status


def main() -> None:
    sys.exit(run())
