"""Empirical non-nice and any-maybe rates against their exponential bounds over a grid of (m, n)."""

import argparse

from lobbykit.experiments import dodgson_freq_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--n", type=int, nargs="+", default=[15, 31, 63, 101, 201, 401])
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    print(f"{'m':>2} {'n':>4} {'not nice':>9} {'bound':>9} {'any maybe':>10} {'bound':>9}")
    for m in args.m:
        for n in args.n:
            agg = dodgson_freq_report(m, n, args.trials, args.seed).aggregate
            print(f"{m:>2} {n:>4} {agg['not_nice_rate']:>9.4f} {agg['not_nice_bound']:>9.4f} "
                  f"{agg['any_maybe_rate']:>10.4f} {agg['any_maybe_bound']:>9.4f}")


if __name__ == "__main__":
    main()
