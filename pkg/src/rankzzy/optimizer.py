"""Extremes of the defuzzified p-score over a weight domain.

The decision variables are the ``4 * n_values`` weight vertices, subject to the
vertex chain of each weight, the box ``lower <= w <= upper`` and the core-sum
window ``sum b <= 1 <= sum c``. scipy's SLSQP does the SQP iterations; gradients
come from batched central differences.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
import numpy as np
from scipy.optimize import minimize

from . import domain as dom
from .domain import WeightDomain, WeightScheme
from .errors import (
    BoundsOutOfOrder,
    DimensionMismatch,
    GridTooLarge,
    InfeasibleCoreSum,
    InfeasibleDomain,
    NonPositiveRow,
    ScoreOverflow,
)
from .fuzzy import Trapezoid, as_trapezoid
from .score import defuzzify, fuzzy_p_score, is_zero_p, parse_p, score_vertices

MINIMIZE = "minimize"
MAXIMIZE = "maximize"
FD_REL_STEP = 1e-6


@dataclass(frozen=True)
class OptimizationSpec:
    row: tuple[Trapezoid, ...]
    domain: WeightDomain
    p: float = 1.0
    direction: str = MINIMIZE
    tolerance: float = 1e-8
    max_iterations: int = 500
    multistart_points: int = 3
    seed: int = 0
    screen_iterations: int = 5

    def __post_init__(self):
        object.__setattr__(self, "row", tuple(as_trapezoid(r) for r in self.row))
        object.__setattr__(self, "p", parse_p(self.p))
        if self.direction not in (MINIMIZE, MAXIMIZE):
            raise ValueError(f"direction must be {MINIMIZE!r} or {MAXIMIZE!r}")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")


@dataclass(frozen=True)
class OptimizationResult:
    objective: float
    fuzzy_score: Trapezoid
    weights: WeightScheme
    iterations: int
    converged: bool
    weights_ignored: bool = False


def _prepare(spec: OptimizationSpec) -> np.ndarray:
    try:
        dom.validate(spec.domain)
    except (BoundsOutOfOrder, InfeasibleCoreSum) as exc:
        raise InfeasibleDomain(str(exc)) from exc
    if len(spec.row) != len(spec.domain):
        raise DimensionMismatch(f"row has {len(spec.row)} entries, domain has {len(spec.domain)} values")
    if not spec.row:
        raise DimensionMismatch("empty row")
    for r in spec.row:
        if not r.a > 0:
            raise NonPositiveRow(f"row entries must be strictly positive, got {r!r}")
    return np.array([r.to_list() for r in spec.row], dtype=float)


def _finish(spec: OptimizationSpec, w: np.ndarray, iterations: int, converged: bool, ignored=False):
    weights = WeightScheme.from_array(w)
    score = fuzzy_p_score(spec.row, weights, spec.p)
    return OptimizationResult(defuzzify(score), score, weights, iterations, converged, ignored)


def _linear_constraints(n_values: int):
    """Rows of ``G x >= h`` for the vertex chain and the core-sum window."""
    n = 4 * n_values
    rows, rhs = [], []
    for j in range(n_values):
        for k in range(3):
            g = np.zeros(n)
            g[4 * j + k + 1], g[4 * j + k] = 1.0, -1.0
            rows.append(g)
            rhs.append(0.0)
    g = np.zeros(n)
    g[1::4] = -1.0
    rows.append(g)
    rhs.append(-1.0)
    g = np.zeros(n)
    g[2::4] = 1.0
    rows.append(g)
    rhs.append(1.0)
    return np.array(rows), np.array(rhs)


def _start_points(spec: OptimizationSpec) -> list[np.ndarray]:
    """Lower corner, upper corner and midpoint, each repaired into the domain.

    Starts that coincide after repair are replaced by seeded random feasible
    points, and random points fill up to ``multistart_points``.
    """
    d = spec.domain
    lo, up = d.lower_array(), d.upper_array()
    rng = np.random.default_rng(spec.seed)
    starts = []
    for c in (lo, up, 0.5 * (lo + up)):
        fixed = dom.repair(d, c)
        if any(np.array_equal(fixed, s) for s in starts):
            fixed = dom.repair(d, rng.uniform(lo, up))
        starts.append(fixed)
    while len(starts) < spec.multistart_points:
        starts.append(dom.repair(d, rng.uniform(lo, up)))
    return starts


def optimize(spec: OptimizationSpec) -> OptimizationResult:
    """Minimize or maximize the defuzzified p-score of one action over the domain."""
    rows = _prepare(spec)
    d = spec.domain
    if math.isinf(spec.p):
        # the limit scores ignore the weights; report the domain midpoint
        return _finish(spec, d.midpoint().as_array(), 0, True, ignored=True)
    if d.is_singleton:
        return _finish(spec, d.lower_array(), 0, True)

    n_values = len(d)
    lo, up = d.lower_array().ravel(), d.upper_array().ravel()
    free = up > lo
    sign = 1.0 if spec.direction == MINIMIZE else -1.0
    p = spec.p

    G_full, h_full = _linear_constraints(n_values)
    # fixed variables are folded into the right-hand side
    h = h_full - G_full[:, ~free] @ lo[~free]
    G = G_full[:, free]
    keep = np.any(G != 0, axis=1)
    G, h = G[keep], h[keep]

    def full(xf):
        x = lo.copy()
        x[free] = xf
        return x

    def objective_batch(X):
        W = X.reshape(X.shape[0], n_values, 4)
        vals = np.linalg.norm(score_vertices(rows, W, p), axis=-1)
        return sign * vals

    def fun(xf):
        val = objective_batch(full(xf)[None, :])[0]
        return val if np.isfinite(val) else 1e300

    def jac(xf):
        x = full(xf)
        step = FD_REL_STEP * np.maximum(1.0, np.abs(x[free]))
        m = step.size
        X = np.tile(x, (2 * m, 1))
        idx = np.flatnonzero(free)
        X[np.arange(m), idx] += step
        X[m + np.arange(m), idx] -= step
        vals = objective_batch(X)
        g = (vals[:m] - vals[m:]) / (2 * step)
        return np.where(np.isfinite(g), g, 0.0)

    constraints = [{"type": "ineq", "fun": lambda xf: G @ xf - h, "jac": lambda xf: G}]
    bounds = list(zip(lo[free], up[free]))

    def run(x0, maxiter):
        with warnings.catch_warnings():
            # SLSQP clips its own trial points to the bounds and says so
            warnings.simplefilter("ignore", RuntimeWarning)
            res = minimize(
                fun,
                x0,
                jac=jac,
                method="SLSQP",
                bounds=bounds,
                constraints=constraints,
                options={"maxiter": maxiter, "ftol": spec.tolerance},
            )
        w = dom.repair(d, full(res.x).reshape(n_values, 4))
        val = objective_batch(w.ravel()[None, :])[0]
        if not np.isfinite(val):
            raise ScoreOverflow(f"p-score is not finite at a feasible point (p={p})")
        return val, w, bool(res.success), int(res.nit)

    # short screening runs from every start, then a full run from the best one
    screen_iter = min(spec.screen_iterations, spec.max_iterations)
    candidates = []
    total_iter = 0
    for start in _start_points(spec):
        val, w, ok, nit = run(start.ravel()[free], screen_iter)
        total_iter += nit
        candidates.append((val, w, ok))
    best = min(range(len(candidates)), key=lambda i: candidates[i][0])
    if not candidates[best][2]:
        val, w, ok, nit = run(candidates[best][1].ravel()[free], spec.max_iterations)
        total_iter += nit
        if val <= candidates[best][0]:
            candidates[best] = (val, w, ok)
        else:
            candidates[best] = (candidates[best][0], candidates[best][1], ok)
    val, w, converged = candidates[best]
    return _finish(spec, w, total_iter, converged)


def active_constraints(weights: WeightScheme, domain: WeightDomain, atol: float = 1e-7) -> list[str]:
    """Names of the constraints that hold with equality at ``weights``."""
    w = weights.as_array()
    lo, up = domain.lower_array(), domain.upper_array()
    active = []
    for j, name in enumerate(domain.names):
        for k, v in enumerate("abcd"):
            if lo[j, k] < up[j, k]:
                if abs(w[j, k] - lo[j, k]) <= atol:
                    active.append(f"{name}.{v}>=lower")
                if abs(w[j, k] - up[j, k]) <= atol:
                    active.append(f"{name}.{v}<=upper")
        for k in range(3):
            if abs(w[j, k + 1] - w[j, k]) <= atol:
                active.append(f"{name}.{'abcd'[k]}<={'abcd'[k + 1]}")
    if abs(w[:, 1].sum() - 1) <= atol:
        active.append("sum(b)<=1")
    if abs(w[:, 2].sum() - 1) <= atol:
        active.append("sum(c)>=1")
    return active


# test oracle ------------------------------------------------------------------

MAX_ORACLE_VALUES = 3
MAX_ORACLE_RESOLUTION = 11


def _column_terms(rows: np.ndarray, cols: np.ndarray, k: int, p: float) -> np.ndarray:
    """Squared score vertex fed by weight column ``k`` for every candidate column.

    For p > 0 weight vertex k pairs with row vertex k. For p < 0 the row powers
    are reversed before the product, so weight vertex k pairs with row vertex
    3 - k. For p = 0 the pairing is by matching vertex.
    """
    if is_zero_p(p):
        return np.exp(2.0 * (cols * np.log(rows[:, k])).sum(axis=1))
    rk = rows[:, k] if p > 0 else rows[:, 3 - k]
    s = (cols * rk ** p).sum(axis=1)
    with np.errstate(divide="ignore", over="ignore"):
        return s ** (2.0 / p)


def brute_force_oracle(spec: OptimizationSpec, grid_resolution: int = 11) -> OptimizationResult:
    """Exact optimum over a regular grid of weight vertices.

    Every vertex of every weight ranges over ``grid_resolution`` evenly spaced
    values between its bounds; grid points violating the vertex chain or the
    core-sum window are dropped. The squared vertex norm of the score is a sum
    of four terms, each driven by one weight column, so the search enumerates
    (b, c) column pairs and attaches the best compatible a and d columns. The
    result is the same as scanning the full product grid.
    """
    rows = _prepare(spec)
    n_values = len(spec.domain)
    if n_values > MAX_ORACLE_VALUES or not 2 <= grid_resolution <= MAX_ORACLE_RESOLUTION:
        raise GridTooLarge(
            f"oracle supports at most {MAX_ORACLE_VALUES} values and resolution 2..{MAX_ORACLE_RESOLUTION}"
        )
    if math.isinf(spec.p) or spec.domain.is_singleton:
        return optimize(spec)
    lo, up = spec.domain.lower_array(), spec.domain.upper_array()
    sign = 1.0 if spec.direction == MINIMIZE else -1.0

    cols, terms = [], []
    for k in range(4):
        axes = [np.unique(np.linspace(lo[j, k], up[j, k], grid_resolution)) for j in range(n_values)]
        c = np.array(list(itertools.product(*axes)))
        cols.append(c)
        terms.append(sign * _column_terms(rows, c, k, spec.p))
    ca, cb, cc, cd = cols
    ta, tb, tc, td = terms
    tol = dom.FEAS_ATOL

    ok_a = np.all(ca[:, None, :] <= cb[None, :, :] + tol, axis=2)
    cand_a = np.where(ok_a, ta[:, None], np.inf)
    best_a_idx = cand_a.argmin(axis=0)
    best_a = cand_a[best_a_idx, np.arange(cb.shape[0])]

    ok_d = np.all(cd[:, None, :] >= cc[None, :, :] - tol, axis=2)
    cand_d = np.where(ok_d, td[:, None], np.inf)
    best_d_idx = cand_d.argmin(axis=0)
    best_d = cand_d[best_d_idx, np.arange(cc.shape[0])]

    ok_bc = np.all(cb[:, None, :] <= cc[None, :, :] + tol, axis=2)
    ok_bc &= (cb.sum(axis=1) <= 1 + tol)[:, None]
    ok_bc &= (cc.sum(axis=1) >= 1 - tol)[None, :]
    total = np.where(ok_bc, (best_a + tb)[:, None] + (tc + best_d)[None, :], np.inf)
    flat = int(total.argmin())
    if not np.isfinite(total.flat[flat]):
        raise InfeasibleDomain("no grid point satisfies the domain constraints")
    bi, ci = divmod(flat, cc.shape[0])
    w = np.column_stack([ca[best_a_idx[bi]], cb[bi], cc[ci], cd[best_d_idx[ci]]])
    return _finish(spec, w, 0, True)
