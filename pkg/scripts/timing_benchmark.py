"""Ranking time over growing random problems (2x2 up to 50x40)."""

import argparse
import json
from pathlib import Path

from rankzzy.harness import default_schedule, timing_benchmark, timing_csv, timing_summary


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--runs", type=int, default=5)
    parser.add_argument("--steps", type=int, default=7)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--p", type=float, default=1.0)
    parser.add_argument("-o", "--output", type=Path, default=Path("timing"))
    args = parser.parse_args()

    records = timing_benchmark(default_schedule(args.steps), args.runs, args.seed, args.p)
    summary = timing_summary(records)
    Path(f"{args.output}.csv").write_text(timing_csv(records))
    Path(f"{args.output}.summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    for row in summary:
        print(f"{row['n_actions']:>3}x{row['n_values']:<3} mean {row['mean']:7.3f}s  min {row['min']:7.3f}s  max {row['max']:7.3f}s")


if __name__ == "__main__":
    main()
