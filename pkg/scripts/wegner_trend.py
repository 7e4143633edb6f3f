#!/usr/bin/env python3
"""Frequency of the resonance bad event across length scales.

Runs the W1/W2 estimators at a ladder of box sizes and prints a small table
with Wilson confidence intervals.  Useful for eyeballing where the desk-scale
trend sits relative to the L^-q target.
"""

import argparse

from msalab.msa import MSAParams, estimate_property
from msalab.randomfield import AlloySpec


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--scales", type=int, nargs="+", default=[8, 16, 32])
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--g", type=float, default=5.0)
    ap.add_argument("--E0", type=float, default=0.0)
    ap.add_argument("--eta", type=float, default=0.25)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    params = MSAParams(E0=args.E0, eta=args.eta)
    print(f"{'prop':4} {'L':>4} {'freq':>8} {'ci':>17} {'bound':>10}")
    for prop in ("W1", "W2"):
        for L in args.scales:
            row = estimate_property(
                prop, alloy=AlloySpec(g=args.g), interaction=None,
                n=1, d=1, N=1, L=L, params=params,
                trials=args.trials, seed_start=args.seed,
            )
            print(
                f"{prop:4} {L:4d} {row.frequency:8.4f} "
                f"[{row.ci_low:.4f},{row.ci_high:.4f}] {row.bound:10.3e}"
            )


if __name__ == "__main__":
    main()
