"""Estimated susceptibility frequencies across electorate sizes, as CSV on stdout."""

import argparse
import csv
import sys

from irvmono.montecarlo import CultureModel, estimate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--model", choices=[m.value for m in CultureModel], default="iac")
    ap.add_argument("--voters", type=int, nargs="+", default=[25, 50, 101, 250, 501, 1000, 2001])
    ap.add_argument("--trials", type=int, default=200_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    out = csv.writer(sys.stdout)
    out.writerow(["model", "voters", "statistic", "estimate", "low", "high", "count", "denominator"])
    for v in args.voters:
        r = estimate(CultureModel(args.model), v, args.trials, seed=args.seed)
        for key in ("upward_creatable", "downward_creatable", "any_failure_possible", "tied_discarded"):
            f = getattr(r, key)
            out.writerow([args.model, v, key, f"{f.estimate:.6f}", f"{f.low:.6f}", f"{f.high:.6f}", f.count, f.denominator])


if __name__ == "__main__":
    main()
