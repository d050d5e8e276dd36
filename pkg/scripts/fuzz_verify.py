#!/usr/bin/env python3
"""Fuzz the descent solver against the dense-scan oracle on random series.

Each instance draws a non-regular cosine series, solves it by descent and
diffs the roots against a brute-force dense scan.  Any missing or spurious
root is a solver bug by construction and fails the run.
"""

import argparse
import time

import numpy as np

from qgspectra import build_chain, regularization_order, verify_spectrum
from qgspectra.fuzz import random_series, standard_window


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=200, help="number of instances")
    parser.add_argument("--seed", type=int, default=20260809, help="corpus seed")
    parser.add_argument("--half-periods", type=int, default=50, help="window length in pi/S0 units")
    parser.add_argument("--oversampling", type=int, default=50, help="oracle grid density")
    parser.add_argument("--verbose", action="store_true", help="print every instance")
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    failures = 0
    worst_dev = 0.0
    deepest = 0
    t0 = time.perf_counter()
    for i in range(args.count):
        series = random_series(rng)
        window = standard_window(series, args.half_periods)
        order = build_chain(series).order
        deepest = max(deepest, order)
        report = verify_spectrum(series, window, oversampling=args.oversampling)
        worst_dev = max(worst_dev, report.max_deviation)
        status = "ok" if report.clean else "DIFF"
        if not report.clean:
            failures += 1
            print(
                f"[{i:4d}] {status}: M={order} matched={report.matched} "
                f"missing={list(report.missing)} spurious={list(report.spurious)}"
            )
        elif args.verbose:
            print(
                f"[{i:4d}] {status}: M={order:2d} matched={report.matched:3d} "
                f"maxdev={report.max_deviation:.2e}"
            )
    elapsed = time.perf_counter() - t0

    print(
        f"\n{args.count} instances, {failures} failures, deepest chain M={deepest}, "
        f"worst deviation {worst_dev:.2e}, {elapsed:.1f} s"
    )
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
