import itertools
import math

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from conftest import CRISP_SCORES, LOWER, NORMALIZED, UPPER, random_positive_row
from rankzzy import domain as dom
from rankzzy.domain import WeightDomain, WeightScheme
from rankzzy.errors import DimensionMismatch, GridTooLarge, InfeasibleDomain, NonPositiveRow
from rankzzy.fuzzy import Trapezoid
from rankzzy.optimizer import (
    MAXIMIZE,
    MINIMIZE,
    OptimizationSpec,
    active_constraints,
    brute_force_oracle,
    optimize,
)
from rankzzy.score import defuzzify, fuzzy_p_score

T = Trapezoid
NAMES = ("Fairness", "Cost")
EXAM_DOMAIN = WeightDomain(NAMES, [LOWER[n] for n in NAMES], [UPPER[n] for n in NAMES])


def row_of(action):
    return [T(*NORMALIZED[(action, v)]) for v in NAMES]


def random_domain(rng, n_values):
    """Crisp box spanned by a few random points of the simplex."""
    samples = rng.dirichlet(np.ones(n_values), size=int(rng.integers(2, 5)))
    return WeightDomain(
        tuple(f"v{j}" for j in range(n_values)),
        [T.crisp(float(x)) for x in samples.min(axis=0)],
        [T.crisp(float(x)) for x in samples.max(axis=0)],
    )


def fuzzy_domain(rng, n_values):
    """Random fuzzy margins around a point of the simplex."""
    w = rng.dirichlet(np.ones(n_values))
    m = rng.uniform(0, 0.3, size=(n_values, 4))
    lo = np.maximum(w[:, None] - np.sort(m)[:, ::-1], 0.0)
    up = np.minimum(w[:, None] + np.sort(m), 1.0)
    return WeightDomain(tuple(f"v{j}" for j in range(n_values)), [T(*r) for r in lo], [T(*r) for r in up])


def naive_grid_optimum(spec, resolution):
    """Scan the full product grid with plain loops and the textbook score formula."""
    lo, up = spec.domain.lower_array(), spec.domain.upper_array()
    axes = [np.linspace(lo[j, k], up[j, k], resolution) for j in range(lo.shape[0]) for k in range(4)]
    best = None
    for point in itertools.product(*axes):
        w = WeightScheme.from_array(np.array(point).reshape(-1, 4)) if _ordered(point) else None
        if w is None or not dom.member_of(w, spec.domain):
            continue
        val = defuzzify(fuzzy_p_score(spec.row, w, spec.p))
        if best is None or (val < best if spec.direction == MINIMIZE else val > best):
            best = val
    return best


def _ordered(point):
    return all(point[i] <= point[i + 1] + 1e-12 for j in range(0, len(point), 4) for i in range(j, j + 3))


class TestPublished:
    def test_mc_minimum_at_lower_bounds(self):
        res = optimize(OptimizationSpec(row_of("MC"), EXAM_DOMAIN, 1, MINIMIZE))
        assert res.objective == pytest.approx(CRISP_SCORES[("MC", "min")], abs=1e-3)
        assert res.weights.as_array() == pytest.approx(EXAM_DOMAIN.lower_array(), abs=1e-3)

    def test_oa_maximum_at_upper_bounds(self):
        res = optimize(OptimizationSpec(row_of("OA"), EXAM_DOMAIN, 1, MAXIMIZE))
        assert res.objective == pytest.approx(CRISP_SCORES[("OA", "max")], abs=1e-3)
        assert res.weights.as_array() == pytest.approx(EXAM_DOMAIN.upper_array(), abs=1e-3)

    @pytest.mark.parametrize("p", [-1, 0, 1, 2])
    @pytest.mark.parametrize("direction", [MINIMIZE, MAXIMIZE])
    @pytest.mark.parametrize("action", ["MC", "OA"])
    def test_exam_matches_oracle(self, p, direction, action):
        spec = OptimizationSpec(row_of(action), EXAM_DOMAIN, p, direction)
        assert optimize(spec).objective == pytest.approx(brute_force_oracle(spec, 11).objective, abs=2e-2)

    def test_exam_oracle_coarse_grid(self):
        spec = OptimizationSpec(row_of("MC"), EXAM_DOMAIN, 1, MINIMIZE)
        assert abs(optimize(spec).objective - brute_force_oracle(spec, 6).objective) <= 2e-2


class TestContract:
    def test_singleton(self):
        w = T.crisp(0.5)
        d = WeightDomain(("a", "b"), [w, w], [w, w])
        row = [T(0.2, 0.3, 0.4, 0.5), T(0.5, 0.6, 0.7, 0.8)]
        for p in (-2, 0, 1, 3):
            res = optimize(OptimizationSpec(row, d, p, MAXIMIZE))
            assert res.iterations == 0 and res.converged
            assert res.objective == defuzzify(fuzzy_p_score(row, [w, w], p))
            assert brute_force_oracle(OptimizationSpec(row, d, p)).objective == res.objective

    @pytest.mark.parametrize("p", [math.inf, -math.inf])
    def test_infinite_p(self, p):
        res = optimize(OptimizationSpec(row_of("OA"), EXAM_DOMAIN, p))
        assert res.weights_ignored
        assert res.weights == EXAM_DOMAIN.midpoint()
        assert dom.member_of(res.weights, EXAM_DOMAIN)

    def test_infeasible(self):
        hi = T.crisp(0.9)
        d = WeightDomain(("a", "b"), [hi, hi], [T.crisp(1)] * 2)
        with pytest.raises(InfeasibleDomain):
            optimize(OptimizationSpec(row_of("MC"), d))

    def test_non_positive_row(self):
        with pytest.raises(NonPositiveRow):
            optimize(OptimizationSpec([T(0, 0.1, 0.2, 0.3), T.crisp(1)], EXAM_DOMAIN))

    def test_dimension(self):
        with pytest.raises(DimensionMismatch):
            optimize(OptimizationSpec([T.crisp(1)], EXAM_DOMAIN))

    def test_bad_direction(self):
        with pytest.raises(ValueError):
            OptimizationSpec(row_of("MC"), EXAM_DOMAIN, direction="sideways")

    def test_bad_tolerance(self):
        with pytest.raises(ValueError):
            OptimizationSpec(row_of("MC"), EXAM_DOMAIN, tolerance=0)

    def test_deterministic(self):
        rng = np.random.default_rng(5)
        d = fuzzy_domain(rng, 3)
        row = random_positive_row(rng, 3)
        a = optimize(OptimizationSpec(row, d, 0.5, MAXIMIZE, seed=11))
        b = optimize(OptimizationSpec(row, d, 0.5, MAXIMIZE, seed=11))
        assert a == b

    @settings(max_examples=40, suppress_health_check=[HealthCheck.too_slow])
    @given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.sampled_from([-1.0, 0.0, 0.5, 1.0, 2.0]))
    def test_certificate_and_sandwich(self, seed, n_values, p):
        rng = np.random.default_rng(seed)
        d = fuzzy_domain(rng, n_values)
        row = random_positive_row(rng, n_values)
        lo = optimize(OptimizationSpec(row, d, p, MINIMIZE, seed=seed))
        hi = optimize(OptimizationSpec(row, d, p, MAXIMIZE, seed=seed))
        mid = defuzzify(fuzzy_p_score(row, d.midpoint(), p))
        for res in (lo, hi):
            assert dom.member_of(res.weights, d)
            assert res.fuzzy_score == fuzzy_p_score(row, res.weights, p)
            assert res.objective == pytest.approx(defuzzify(res.fuzzy_score), abs=1e-8)
        assert lo.objective <= mid + 1e-9 <= hi.objective + 2e-9

    @settings(max_examples=25, suppress_health_check=[HealthCheck.too_slow])
    @given(st.integers(0, 2**32 - 1), st.integers(2, 4))
    def test_linear_maximizer_is_on_boundary(self, seed, n_values):
        rng = np.random.default_rng(seed)
        d = fuzzy_domain(rng, n_values)
        res = optimize(OptimizationSpec(random_positive_row(rng, n_values), d, 1, MAXIMIZE, seed=seed))
        assert active_constraints(res.weights, d)

    def test_dominant_value_hits_its_bound(self):
        d = WeightDomain(("a", "b"), [T.crisp(0.2)] * 2, [T.crisp(0.8)] * 2)
        row = [T.crisp(1.0), T.crisp(0.01)]
        for res in (optimize(OptimizationSpec(row, d, 1, MAXIMIZE)), brute_force_oracle(OptimizationSpec(row, d, 1, MAXIMIZE))):
            assert res.weights[0].d == pytest.approx(0.8, abs=1e-6)


class TestOracle:
    def test_limits(self):
        d = dom.from_crisp([0.25] * 4)
        with pytest.raises(GridTooLarge):
            brute_force_oracle(OptimizationSpec([T.crisp(1)] * 4, d))
        with pytest.raises(GridTooLarge):
            brute_force_oracle(OptimizationSpec(row_of("MC"), EXAM_DOMAIN), grid_resolution=12)

    @pytest.mark.parametrize("seed", range(6))
    @pytest.mark.parametrize("p", [-1.0, 0.0, 1.0, 2.0])
    def test_separable_search_equals_full_scan(self, seed, p):
        rng = np.random.default_rng(seed)
        d = fuzzy_domain(rng, 2)
        row = random_positive_row(rng, 2)
        for direction in (MINIMIZE, MAXIMIZE):
            spec = OptimizationSpec(row, d, p, direction)
            fast = brute_force_oracle(spec, 3)
            assert dom.member_of(fast.weights, d)
            assert fast.objective == pytest.approx(naive_grid_optimum(spec, 3), rel=1e-9)

    def test_agreement_on_random_instances(self):
        rng = np.random.default_rng(2024)
        worst = 0.0
        for i in range(30):
            d = random_domain(rng, 2)
            row = random_positive_row(rng, 2)
            for p in (-1.0, 0.0, 1.0, 2.0):
                for direction in (MINIMIZE, MAXIMIZE):
                    spec = OptimizationSpec(row, d, p, direction, seed=i)
                    worst = max(worst, abs(optimize(spec).objective - brute_force_oracle(spec).objective))
        assert worst <= 3e-2
