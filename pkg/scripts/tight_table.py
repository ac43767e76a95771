"""Greedy vs optimum on the tight family, one row per n."""

import argparse
from fractions import Fraction

from lobbykit.experiments import lobby_tight_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=10)
    ap.add_argument("--epsilon", type=Fraction, default=Fraction(1, 100))
    args = ap.parse_args()
    rep = lobby_tight_report(range(2, args.n_max + 1), args.epsilon)
    print(f"{'n':>3} {'greedy':>12} {'opt':>8} {'ratio':>10}")
    for r in rep.records:
        print(f"{r['n']:>3} {float(r['greedy_price']):>12.6f} {float(r['opt_price']):>8.4f} "
              f"{float(r['ratio']):>10.6f}")
    print("all checks passed" if rep.passed else "CHECK FAILED")


if __name__ == "__main__":
    main()
