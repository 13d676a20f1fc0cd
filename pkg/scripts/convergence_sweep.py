"""Binomial distance against its Poisson-type limit along a geometric n grid.

    python3 scripts/convergence_sweep.py --k 3 --points 2
"""

import argparse
import math

from convexdist import AlphabetRegion, CountingMeasure, CountLower
from convexdist.lab import run_convergence


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", type=int, default=3, help="required count inside B = {0, 1}")
    ap.add_argument("--points", type=int, default=2, help="atoms of xi placed outside B")
    ap.add_argument("--steps", type=int, default=8)
    args = ap.parse_args()

    B = AlphabetRegion([0, 1])
    xi = CountingMeasure({10 + i: 1 for i in range(args.points)})
    m = xi.mass
    grid = [(m + 1) * 4**j for j in range(1, args.steps + 1)]
    print(f"# nu(B) >= {args.k}, xi = {xi.to_text() or 'empty'}")
    print(f"{'n':>8} {'d_pi':>10} {'d_n':>10} {'gap':>10} {'bound':>10} {'gap*sqrt(n-m)':>14}")
    for r in run_convergence(xi, CountLower(B, args.k), grid):
        print(f"{r.n:>8} {r.d_pi:>10.6f} {r.d_n:>10.6f} {r.gap:>10.6f} {r.bound:>10.6f} "
              f"{r.gap * math.sqrt(r.n - m):>14.6f}")


if __name__ == "__main__":
    main()
