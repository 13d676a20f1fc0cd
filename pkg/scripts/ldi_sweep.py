"""Sweep the event threshold k for the binomial and Poisson inequalities.

Prints, per k, the estimated event probability and the worst ratio of the
upper-confidence product to exp(-s^2/4) over the s grid. Tightness is an
exploration here, not a pass/fail claim.

    python3 scripts/ldi_sweep.py --trials 4000
"""

import argparse

from convexdist import AlphabetRegion, CountUpper, FiniteAlphabet
from convexdist.samplers import Binomial, Poisson, ProcessSpec
from convexdist.lab import LdiExperiment, run_ldi


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=4000)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    g = FiniteAlphabet.uniform(10)
    B = AlphabetRegion(range(4))
    s_grid = (0.5, 1.0, 1.5, 2.0, 3.0)
    setups = [
        ("binomial n=30 t=0.5", ProcessSpec(g, Binomial(30, 0.5)), "binomial", range(3, 10)),
        ("poisson t=8", ProcessSpec(g, Poisson(8.0)), "poisson_pi", range(1, 7)),
    ]
    for label, spec, kind, ks in setups:
        print(f"# {label}, distance {kind}")
        print(f"{'k':>3} {'p_A':>8} {'max ratio':>10} {'at s':>5} violated")
        for k in ks:
            exp = LdiExperiment(spec, CountUpper(B, k), kind, s_grid, args.trials, args.seed)
            rows = run_ldi(exp, workers=args.workers).rows
            worst = max(rows, key=lambda r: r.product_hi / r.bound)
            print(f"{k:>3} {rows[0].p_A:>8.4f} {worst.product_hi / worst.bound:>10.4f} {worst.s:>5} "
                  f"{any(r.violated for r in rows)}")


if __name__ == "__main__":
    main()
