import math
from decimal import Decimal, Overflow, localcontext

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import AGGREGATED, CRISP_SCORES, FUZZY_SCORES, LOWER, NORMALIZED, UPPER, crisp_weights
from rankzzy import fuzzy
from rankzzy.domain import WeightScheme
from rankzzy.errors import DimensionMismatch, EmptyRow, NonPositiveEntry
from rankzzy.fuzzy import Trapezoid
from rankzzy.score import ScoreParams, aggregate_nu, defuzzify, fuzzy_p_score, parse_p, score_vertices

T = Trapezoid


def row_of(action):
    return [T(*NORMALIZED[(action, v)]) for v in ("Fairness", "Cost")]


def bounds(table):
    return WeightScheme([T(*table[v]) for v in ("Fairness", "Cost")])


def plain_score(row, weights, p):
    """Reference written from the definition with plain floats."""
    r = [list(t) for t in row]
    w = [list(t) for t in weights]
    if math.isinf(p):
        pick = max if p > 0 else min
        return [pick(x[k] for x in r) for k in range(4)]
    if p == 0:
        return sorted(math.prod(x[k] ** y[k] for x, y in zip(r, w)) for k in range(4))
    out = []
    for k in range(4):
        # for negative p the powered row is reversed, so weight vertex k meets row vertex 3 - k
        rk = 3 - k if p < 0 else k
        out.append(sum(y[k] * x[rk] ** p for x, y in zip(r, w)) ** (1 / p))
    if p < 0:
        out.reverse()
    return out


def decimal_score(row, weights, p):
    """The finite-p formula in 50-digit decimal arithmetic."""
    with localcontext() as ctx:
        ctx.prec = 50
        ctx.traps[Overflow] = False
        dp = Decimal(p)
        out = []
        for k in range(4):
            rk = 3 - k if p < 0 else k
            acc = sum(Decimal(y.to_list()[k]) * Decimal(x.to_list()[rk]) ** dp for x, y in zip(row, weights))
            out.append(float((acc.ln() / dp).exp()))
    return out[::-1] if p < 0 else out


@st.composite
def positive_rows(draw, n_min=1, n_max=5):
    n = draw(st.integers(n_min, n_max))
    return [
        T(*sorted(draw(st.lists(st.floats(0.01, 1.0), min_size=4, max_size=4)))) for _ in range(n)
    ], n


@st.composite
def dyadic_simplex(draw, n):
    """Crisp weights k_j / 2**20 whose floating-point sum is exactly 1."""
    total = 2**20
    cuts = sorted(draw(st.lists(st.integers(1, total - 1), min_size=n - 1, max_size=n - 1, unique=True)))
    parts = np.diff([0, *cuts, total])
    return [float(k) / total for k in parts]


@st.composite
def row_and_simplex(draw):
    row, n = draw(positive_rows())
    return row, crisp_weights(draw(dyadic_simplex(n)))


@st.composite
def row_and_fuzzy_weights(draw):
    row, n = draw(positive_rows())
    ws = [T(*sorted(draw(st.lists(st.floats(0.0, 1.0), min_size=4, max_size=4)))) for _ in range(n)]
    return row, ws


class TestPublished:
    @pytest.mark.parametrize(
        "action,table,key", [("MC", LOWER, "min"), ("MC", UPPER, "max"), ("OA", LOWER, "min"), ("OA", UPPER, "max")]
    )
    def test_fuzzy_and_crisp(self, action, table, key):
        s = fuzzy_p_score(row_of(action), bounds(table), 1)
        assert s.to_list() == pytest.approx(FUZZY_SCORES[(action, key)], abs=1e-3)
        assert defuzzify(s) == pytest.approx(CRISP_SCORES[(action, key)], abs=2e-3)

    @pytest.mark.parametrize("action", ["MC", "OA"])
    def test_aggregate(self, action):
        got = aggregate_nu(CRISP_SCORES[(action, "min")], CRISP_SCORES[(action, "max")], 1, 0.5)
        assert got == pytest.approx(AGGREGATED[action], abs=1e-3)

    def test_defuzzify_published(self):
        assert defuzzify(T(*FUZZY_SCORES[("OA", "min")])) == pytest.approx(1.367, abs=1e-3)
        assert defuzzify(T(*FUZZY_SCORES[("MC", "max")])) == pytest.approx(1.091, abs=1e-3)
        assert defuzzify(fuzzy.ZERO) == 0


class TestScore:
    @pytest.mark.parametrize("p", [-3, -1, 0, 0.5, 1, 2, 7])
    def test_single_entry(self, p):
        x = T(0.2, 0.3, 0.5, 0.9)
        assert fuzzy_p_score([x], [fuzzy.ONE], p).to_list() == pytest.approx(x.to_list(), rel=1e-12)

    def test_limits_ignore_weights(self):
        row = [T(0.1, 0.5, 0.6, 0.7), T(0.2, 0.3, 0.9, 1.0)]
        assert fuzzy_p_score(row, [T.crisp(0.5)] * 2, math.inf) == fuzzy.envelope_max(row)
        assert fuzzy_p_score(row, [T.crisp(0.9)] * 2, "-inf") == fuzzy.envelope_min(row)

    def test_rejects_non_positive(self):
        with pytest.raises(NonPositiveEntry):
            fuzzy_p_score([T(0, 0.1, 0.2, 0.3)], [fuzzy.ONE], 1)

    def test_rejects_empty(self):
        with pytest.raises(EmptyRow):
            fuzzy_p_score([], [], 1)

    def test_rejects_length(self):
        with pytest.raises(DimensionMismatch):
            fuzzy_p_score([T.crisp(1)], [fuzzy.ONE, fuzzy.ONE], 1)

    @given(row_and_fuzzy_weights(), st.sampled_from([-4.0, -1.0, -0.3, 0.0, 0.5, 1.0, 2.0, 5.0, math.inf, -math.inf]))
    def test_three_routes_agree(self, rw, p):
        row, ws = rw
        # a negative power of a (near) zero weighted sum is undefined or overflows
        assume(p >= 0 or math.isinf(p) or min(sum(w.to_list()[k] for w in ws) for k in range(4)) > 1e-3)
        a = fuzzy_p_score(row, ws, p).to_list()
        b = score_vertices(np.array([t.to_list() for t in row]), np.array([w.to_list() for w in ws]), p)
        c = plain_score(row, ws, p)
        assert a == pytest.approx(c, rel=1e-9, abs=1e-12)
        assert list(b) == pytest.approx(c, rel=1e-9, abs=1e-12)

    @given(row_and_fuzzy_weights(), st.sampled_from([-5e-4, -1e-6, -2e-9, 2e-9, 1e-6, 5e-4, -2.0, 3.0]))
    def test_matches_high_precision(self, rw, p):
        row, ws = rw
        assume(min(sum(w.to_list()[k] for w in ws) for k in range(4)) > 0.05)
        assume(max(sum(w.to_list()[k] for w in ws) for k in range(4)) < 2.0 or abs(p) > 1e-3)
        want = decimal_score(row, ws, p)
        assume(all(1e-200 < v < 1e200 for v in want))  # inf marks a decimal overflow
        got = fuzzy_p_score(row, ws, p).to_list()
        kernel = score_vertices(np.array([t.to_list() for t in row]), np.array([w.to_list() for w in ws]), p)
        assert got == pytest.approx(want, rel=1e-9)
        assert list(kernel) == pytest.approx(want, rel=1e-9)

    @given(row_and_simplex(), st.sampled_from([-10, -1, -1e-6, 0, 1e-6, 1, 2, 10, math.inf, -math.inf]))
    def test_consistency(self, rw, p):
        row, ws = rw
        s = fuzzy_p_score(row, ws, p)
        assert all(math.isfinite(v) for v in s)
        assert s.a <= s.b <= s.c <= s.d

    @given(row_and_simplex(), st.floats(-5, 5), st.floats(-5, 5))
    def test_monotone_in_p(self, rw, p, q):
        row, ws = rw
        p, q = min(p, q), max(p, q)
        lo, hi = fuzzy_p_score(row, ws, p), fuzzy_p_score(row, ws, q)
        floor, ceil = fuzzy.envelope_min(row), fuzzy.envelope_max(row)
        for k in range(4):
            assert lo.to_list()[k] <= hi.to_list()[k] + 1e-9
            assert floor.to_list()[k] - 1e-9 <= lo.to_list()[k]
            assert hi.to_list()[k] <= ceil.to_list()[k] + 1e-9

    @given(row_and_simplex())
    def test_continuity_at_zero(self, rw):
        row, ws = rw
        assert abs(defuzzify(fuzzy_p_score(row, ws, 1e-6)) - defuzzify(fuzzy_p_score(row, ws, 0))) < 1e-4


class TestAggregate:
    @given(st.floats(0.01, 5), st.floats(-4, 4), st.floats(0, 1))
    def test_degenerate_interval(self, m, p, nu):
        assert aggregate_nu(m, m, p, nu) == pytest.approx(m, rel=1e-9)

    @given(st.floats(0.01, 5), st.floats(0.01, 5), st.sampled_from([-2.0, -1.0, 0.0, 0.5, 1.0, 3.0]))
    def test_endpoints_and_monotone(self, a, b, p):
        lo, hi = min(a, b), max(a, b)
        assert aggregate_nu(lo, hi, p, 0.0) == lo
        assert aggregate_nu(lo, hi, p, 1.0) == hi
        grid = [aggregate_nu(lo, hi, p, nu) for nu in np.linspace(0, 1, 21)]
        assert all(x <= y + 1e-12 for x, y in zip(grid, grid[1:]))

    def test_limits(self):
        assert aggregate_nu(1, 2, math.inf, 0.3) == 2
        assert aggregate_nu(1, 2, -math.inf, 0.3) == 1

    def test_geometric(self):
        assert aggregate_nu(1, 4, 0, 0.5) == pytest.approx(2)

    def test_nu_range(self):
        with pytest.raises(ValueError):
            aggregate_nu(1, 2, 1, 1.5)


class TestParams:
    def test_defaults(self):
        p = ScoreParams()
        assert (p.p, p.nu, p.epsilon, p.stance) == (1.0, 0.5, 1e-4, "balanced")

    @pytest.mark.parametrize("nu,stance", [(0.2, "pessimistic"), (0.5, "balanced"), (0.8, "optimistic")])
    def test_stance(self, nu, stance):
        assert ScoreParams(nu=nu).stance == stance

    @pytest.mark.parametrize("kw", [{"nu": -0.1}, {"nu": 1.1}, {"epsilon": 0}, {"p": "nan"}])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            ScoreParams(**kw)

    def test_parse_p(self):
        assert parse_p("inf") == math.inf
        assert parse_p("-inf") == -math.inf
        assert parse_p("2.5") == 2.5
