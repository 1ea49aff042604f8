"""Coverage of Wilson intervals over many seeds against exact enumerated fractions."""

import argparse
import time

from irvmono.montecarlo import CultureModel, estimate, exact_frequencies


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--model", choices=[m.value for m in CultureModel], default="iac")
    ap.add_argument("--voters", type=int, default=12)
    ap.add_argument("--trials", type=int, default=200_000)
    ap.add_argument("--seeds", type=int, default=100)
    ap.add_argument("--confidence", type=float, default=0.99)
    args = ap.parse_args()

    model = CultureModel(args.model)
    start = time.perf_counter()
    exact = {k: float(v) for k, v in exact_frequencies(model, args.voters).items()}
    print(f"exact fractions ({time.perf_counter() - start:.1f}s):")
    for k, v in exact.items():
        print(f"  {k:22s} {v:.6f}")

    covered = dict.fromkeys(exact, 0)
    start = time.perf_counter()
    for seed in range(args.seeds):
        r = estimate(model, args.voters, args.trials, seed=seed, confidence=args.confidence)
        for k in exact:
            f = getattr(r, k)
            covered[k] += f.low <= exact[k] <= f.high
    per_run = (time.perf_counter() - start) / args.seeds
    print(f"coverage over {args.seeds} seeds ({per_run:.2f}s per run):")
    for k, n in covered.items():
        print(f"  {k:22s} {n}/{args.seeds}")


if __name__ == "__main__":
    main()
