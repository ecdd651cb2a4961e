from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from rankzzy.fuzzy import Trapezoid
from rankzzy.problem_io import load_problem

ROOT = Path(__file__).resolve().parents[1]
PROBLEMS = ROOT / "problems"
EXAM = PROBLEMS / "exam.json"
INFEASIBLE = PROBLEMS / "infeasible.json"

settings.register_profile("default", deadline=None, max_examples=200)
settings.load_profile("default")

# published reference numbers for the two-action exam example
FAIRNESS_MC = (0.132, 0.236, 0.436, 0.622)
FAIRNESS_OA = (0.510, 0.704, 0.904, 0.946)
NORMALIZED = {
    ("MC", "Fairness"): (1e-4, 0.128, 0.374, 0.602),
    ("OA", "Fairness"): (0.464, 0.703, 0.948, 1.000),
    ("MC", "Cost"): (0.609, 0.722, 0.869, 1.000),
    ("OA", "Cost"): (1e-4, 0.068, 0.155, 0.228),
}
FUZZY_SCORES = {
    ("MC", "min"): (0.061, 0.198, 0.473, 0.792),
    ("MC", "max"): (0.091, 0.247, 0.553, 0.902),
    ("OA", "min"): (0.279, 0.502, 0.790, 0.957),
    ("OA", "max"): (0.348, 0.576, 0.892, 1.068),
}
CRISP_SCORES = {("MC", "min"): 0.945, ("MC", "max"): 1.091, ("OA", "min"): 1.367, ("OA", "max"): 1.546}
AGGREGATED = {"MC": 1.018, "OA": 1.457}
LOWER = {"Fairness": (0.60, 0.70, 0.80, 0.90), "Cost": (0.10, 0.15, 0.20, 0.25)}
UPPER = {"Fairness": (0.75, 0.80, 0.90, 1.00), "Cost": (0.15, 0.20, 0.25, 0.30)}


@pytest.fixture(scope="session")
def exam_problem():
    return load_problem(EXAM)


# strategies ---------------------------------------------------------------------

def _sorted4(draw, lo, hi):
    xs = sorted(draw(st.lists(st.floats(lo, hi, allow_nan=False), min_size=4, max_size=4)))
    return Trapezoid(*xs)


@st.composite
def trapezoids(draw, lo=-10.0, hi=10.0):
    return _sorted4(draw, lo, hi)


@st.composite
def positive_trapezoids(draw, lo=1e-3, hi=10.0):
    return _sorted4(draw, lo, hi)


@st.composite
def simplex(draw, n_min=1, n_max=6):
    n = draw(st.integers(n_min, n_max))
    raw = np.array(draw(st.lists(st.floats(0.01, 1.0), min_size=n, max_size=n)))
    return raw / raw.sum()


def random_positive_row(rng: np.random.Generator, n: int, lo=0.01, hi=1.0) -> list[Trapezoid]:
    return [Trapezoid(*np.sort(rng.uniform(lo, hi, 4))) for _ in range(n)]


def crisp_weights(w) -> list[Trapezoid]:
    return [Trapezoid.crisp(float(x)) for x in w]


# acceptance report --------------------------------------------------------------

ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
