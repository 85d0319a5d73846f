#!/usr/bin/env python3
"""Rank-3 certificates for a grid of E(m, n, F), written as JSON files."""

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from lnd.constructions import FamilyParamsE
from lnd.rank_lab import family_rank3


def run_point(point):
    m, n, F = point
    t0 = time.perf_counter()
    _, cert = family_rank3(FamilyParamsE(m, n, F), raise_on_fail=False)
    return point, cert.to_dict(), cert.ok, time.perf_counter() - t0


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--n", type=int, nargs="+", default=[1, 2])
    ap.add_argument("--F", nargs="+", default=["t1", "t1^2", "t1 + t2"])
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out-dir", default="grid-certs")
    args = ap.parse_args(argv)

    points = [(m, n, F) for m in args.m for n in args.n for F in args.F]
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(run_point, points))
    else:
        results = [run_point(p) for p in points]

    failures = 0
    for (m, n, F), doc, ok, secs in results:
        name = f"E_{m}_{n}_{F.replace(' ', '').replace('^', '').replace('+', 'p')}.json"
        (out / name).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        failures += not ok
        print(f"E({m},{n},{F}): {'ok' if ok else 'FAILED'}  {secs:.2f} s  -> {out / name}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
