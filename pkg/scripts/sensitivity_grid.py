"""Top action over a (p, nu) grid for a problem file; writes CSV."""

import argparse
from pathlib import Path

from rankzzy.pipeline import sensitivity_grid
from rankzzy.problem_io import load_problem

EXAM = Path(__file__).resolve().parents[1] / "problems" / "exam.json"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("problem", nargs="?", type=Path, default=EXAM)
    parser.add_argument("--grid", type=int, default=25)
    parser.add_argument("--p-range", type=float, nargs=2, default=(0.05, 2.0))
    parser.add_argument("--nu-range", type=float, nargs=2, default=(0.0, 1.0))
    parser.add_argument("-o", "--output", type=Path, default=Path("sensitivity.csv"))
    args = parser.parse_args()

    grid = sensitivity_grid(load_problem(args.problem), tuple(args.p_range), tuple(args.nu_range), args.grid)
    args.output.write_text(grid.to_csv())
    for a in grid.actions:
        print(f"{a}: top in {100 * grid.top_share(a):.1f}% of cells")
    print(f"wrote {args.output}")


if __name__ == "__main__":
    main()
