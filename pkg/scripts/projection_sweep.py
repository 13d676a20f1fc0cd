"""Hat-space classical distance against the binomial distance of the projection.

Runs the exhaustive comparison over small alphabets and lengths, and prints the
largest disagreement found together with the dominance and sandwich counts.

    python3 scripts/projection_sweep.py --subsets 100
"""

import argparse
import time

from convexdist.checks import projection_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--subsets", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-n", type=int, default=4)
    args = ap.parse_args()

    for m in (2, 3):
        for n in range(2, args.max_n + 1):
            t0 = time.perf_counter()
            rep = projection_suite(alphabet_sizes=(m,), ns=(n,), subsets=args.subsets, seed=args.seed)
            print(f"|E|={m} n={n}: {rep.cases:>6} cases  max gap {rep.max_gap:.2e}  "
                  f"dominance/sandwich failures {rep.dominance_violations}/{rep.sandwich_violations}  "
                  f"({time.perf_counter() - t0:.1f}s)")


if __name__ == "__main__":
    main()
