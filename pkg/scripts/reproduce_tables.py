"""Print the exam example's intermediate tables next to the published values."""

import argparse
from pathlib import Path

from rankzzy.matrix import build_matrix, normalize
from rankzzy.pipeline import rank
from rankzzy.problem_io import load_problem

EXAM = Path(__file__).resolve().parents[1] / "problems" / "exam.json"

PUBLISHED_SCORES = {
    ("MC", "min"): (0.061, 0.198, 0.473, 0.792),
    ("MC", "max"): (0.091, 0.247, 0.553, 0.902),
    ("OA", "min"): (0.279, 0.502, 0.790, 0.957),
    ("OA", "max"): (0.348, 0.576, 0.892, 1.068),
}
PUBLISHED_CRISP = {("MC", "min"): 0.945, ("MC", "max"): 1.091, ("OA", "min"): 1.367, ("OA", "max"): 1.546}
PUBLISHED_AGGREGATED = {"MC": 1.018, "OA": 1.457}


def fmt(t):
    return "(" + ", ".join(f"{v:.3f}" for v in t) + ")"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("problem", nargs="?", type=Path, default=EXAM)
    args = parser.parse_args()
    problem = load_problem(args.problem)

    matrix = build_matrix(problem)
    print("fuzzy decision matrix")
    for a, row in zip(matrix.actions, matrix.entries):
        print(f"  {a:4s}", "  ".join(fmt(t) for t in row))

    normalized = normalize(matrix, problem.params.epsilon)
    print(f"\nnormalized (epsilon = {problem.params.epsilon:g})")
    for a, row in zip(normalized.actions, normalized.entries):
        print(f"  {a:4s}", "  ".join(fmt(t) for t in row))

    report = rank(problem)
    print("\nscores (computed | published)")
    for a in problem.actions:
        b = report.bundles[a]
        for key, fz, crisp in (("min", b.fuzzy_min, b.crisp_min), ("max", b.fuzzy_max, b.crisp_max)):
            ref = (a, key)
            print(f"  {a} {key}: {fmt(fz)} {crisp:.3f} | {fmt(PUBLISHED_SCORES.get(ref, ()))} {PUBLISHED_CRISP.get(ref, float('nan')):.3f}")
        print(f"  {a} aggregated: {b.aggregated:.3f} | {PUBLISHED_AGGREGATED.get(a, float('nan')):.3f}")
    print("\nranking:", " > ".join(report.ranking))


if __name__ == "__main__":
    main()
