"""Kendall tau against crisp TOPSIS, optionally repeated over several master seeds."""

import argparse
import json
from pathlib import Path

from rankzzy.harness import DEFAULT_P_SET, correlation_csv, correlation_experiment, correlation_summary


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--runs", type=int, default=50)
    parser.add_argument("--p-set", type=float, nargs="+", default=list(DEFAULT_P_SET))
    parser.add_argument("--seeds", type=int, nargs="+", default=[0], help="master seeds to sweep")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("-o", "--output", type=Path, default=Path("correlation"))
    args = parser.parse_args()

    sweep = {}
    for seed in args.seeds:
        records = correlation_experiment(args.runs, args.p_set, seed, threads=args.threads)
        summary = correlation_summary(records)
        sweep[seed] = summary
        medians = "  ".join(f"p={k}: {v.get('median', float('nan')):.3f}" for k, v in summary.items())
        print(f"seed {seed:>3}  {medians}")
        if seed == args.seeds[0]:
            Path(f"{args.output}.csv").write_text(correlation_csv(records))
    Path(f"{args.output}.summary.json").write_text(json.dumps(sweep, indent=2) + "\n")

    if len(args.seeds) > 1 and {"1.0", "2.0"} <= set(next(iter(sweep.values()))):
        diffs = [s["2.0"]["median"] - s["1.0"]["median"] for s in sweep.values()]
        lower = sum(d < 0 for d in diffs)
        equal = sum(d == 0 for d in diffs)
        print(f"p=2 median below p=1 in {lower}/{len(diffs)} seeds, equal in {equal}, above in {len(diffs) - lower - equal}")


if __name__ == "__main__":
    main()
