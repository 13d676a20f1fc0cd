"""Compare the min-norm solver with the sphere-grid oracle on random instances.

    python3 scripts/oracle_check.py --instances 500
"""

import argparse

from convexdist.checks import oracle_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instances", type=int, default=200)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    rep = oracle_suite(args.instances, seed=args.seed)
    print(f"{rep.instances} instances, {rep.checks} values")
    print(f"solver - oracle in [{rep.min_diff:.3e}, {rep.max_diff:.3e}], failures {len(rep.failures)}")
    for xi, A, n, value, oracle in rep.failures[:10]:
        print(f"  xi={xi.to_text()} A={A!r} n={n}: solver {value:.9f} oracle {oracle:.9f}")


if __name__ == "__main__":
    main()
