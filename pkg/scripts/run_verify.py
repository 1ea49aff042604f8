"""Exhaustive condition-vs-brute-force check over a band of electorate sizes.

    python3 scripts/run_verify.py --max-voters 16 --direction downward upward upward-exact
"""

import argparse
import json
import os

from irvmono.oracle import exhaustive_verify


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--min-voters", type=int, default=1)
    ap.add_argument("--max-voters", type=int, default=12)
    ap.add_argument("--direction", nargs="+", default=["downward", "upward", "upward-exact"])
    ap.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    ap.add_argument("--out", help="write the JSON reports here")
    args = ap.parse_args()

    reports = []
    for d in args.direction:
        r = exhaustive_verify(args.max_voters, d, workers=args.workers, min_voters=args.min_voters)
        reports.append(r.as_dict())
        print(
            f"{d:13s} V={r.min_voters}..{r.max_voters}: {r.checked_profiles} checked, "
            f"{r.skipped_ties} tied, {r.creatable} creatable, {len(r.mismatches)} mismatches "
            f"({r.elapsed:.1f}s)"
        )
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(reports, fh, indent=2)


if __name__ == "__main__":
    main()
