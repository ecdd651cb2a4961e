"""Generalized fuzzy p-mean score, defuzzification and min/max aggregation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import fuzzy
from .domain import WeightScheme
from .errors import DimensionMismatch, EmptyRow, NonPositiveEntry, ScoreOverflow
from .fuzzy import Trapezoid

ZERO_P_ATOL = 1e-9
# below this |p| the operator composition loses digits to the 1/p root
SMALL_P = 1e-3


def parse_p(p) -> float:
    """Accept numbers and the strings 'inf', '+inf', '-inf'."""
    if isinstance(p, str):
        s = p.strip().lower()
        if s in ("inf", "+inf", "infinity", "+infinity"):
            return math.inf
        if s in ("-inf", "-infinity"):
            return -math.inf
        return float(s)
    return float(p)


def is_zero_p(p: float) -> bool:
    return abs(p) < ZERO_P_ATOL


def format_p(p: float) -> str | float:
    if math.isinf(p):
        return "inf" if p > 0 else "-inf"
    return p


@dataclass(frozen=True)
class ScoreParams:
    p: float = 1.0
    nu: float = 0.5
    epsilon: float = 1e-4

    def __post_init__(self):
        object.__setattr__(self, "p", parse_p(self.p))
        if math.isnan(self.p):
            raise ValueError("p must not be NaN")
        if not 0.0 <= self.nu <= 1.0:
            raise ValueError(f"nu must lie in [0, 1], got {self.nu}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")

    @property
    def stance(self) -> str:
        if self.nu < 0.5:
            return "pessimistic"
        if self.nu > 0.5:
            return "optimistic"
        return "balanced"


@dataclass(frozen=True)
class ScoreBundle:
    """Scores of one action: fuzzy extremes, their defuzzified values and the mix."""

    fuzzy_min: Trapezoid
    fuzzy_max: Trapezoid
    crisp_min: float
    crisp_max: float
    aggregated: float
    weights_min: WeightScheme
    weights_max: WeightScheme
    converged: bool = True
    weights_ignored: bool = False
    iterations: dict = field(default_factory=dict)


def _check_row(row: Sequence[Trapezoid]) -> list[Trapezoid]:
    row = [fuzzy.as_trapezoid(r) for r in row]
    if not row:
        raise EmptyRow("score of an empty row")
    for r in row:
        if not r.a > 0:
            raise NonPositiveEntry(f"score needs strictly positive entries, got {r!r}; normalize first")
    return row


def fuzzy_p_score(row: Sequence[Trapezoid], weights: WeightScheme | Sequence[Trapezoid], p: float) -> Trapezoid:
    """Weighted fuzzy power mean of a positive row.

    Finite nonzero ``p`` composes the fuzzy operators:
    ``(sum_j w_j * r_j**p) ** (1/p)``. ``p = 0`` is the weighted geometric product
    taken vertex by matching vertex; ``p = +/-inf`` are the vertex-wise envelopes
    of the row and ignore the weights. For ``|p| < 1e-3`` the same formula is
    evaluated through ``expm1``/``log1p`` because the ``1/p`` root would amplify
    rounding in the composed operators.
    """
    row = _check_row(row)
    ws = list(weights.weights if isinstance(weights, WeightScheme) else weights)
    ws = [fuzzy.as_trapezoid(w) for w in ws]
    if len(ws) != len(row):
        raise DimensionMismatch(f"{len(row)} entries but {len(ws)} weights")
    p = parse_p(p)
    if math.isinf(p):
        return fuzzy.envelope_max(row) if p > 0 else fuzzy.envelope_min(row)
    if is_zero_p(p):
        prod = [1.0, 1.0, 1.0, 1.0]
        for r, w in zip(row, ws):
            for k, (rv, wv) in enumerate(zip(r, w)):
                prod[k] *= rv ** wv
        return Trapezoid(*sorted(prod))
    if abs(p) < SMALL_P:
        rows = np.array([r.to_list() for r in row])
        out = score_vertices(rows, np.array([w.to_list() for w in ws]), p)
        if not np.all(np.isfinite(out)):
            raise ScoreOverflow(f"p-mean not finite at p={p}")
        return Trapezoid(*out)
    try:
        acc = fuzzy.ZERO
        for r, w in zip(row, ws):
            acc = acc + fuzzy.mul(w, fuzzy.power(r, p))
        if p < 0 and not acc.a > 0:
            raise ScoreOverflow(f"weighted sum {acc!r} has a zero vertex; its power 1/p={1 / p} is infinite")
        return fuzzy.power(acc, 1.0 / p)
    except OverflowError as exc:
        raise ScoreOverflow(f"p-mean overflow at p={p}") from exc
    except fuzzy.InvalidTrapezoid as exc:
        raise ScoreOverflow(f"p-mean not finite at p={p}: {exc}") from exc


def score_vertices(rows: np.ndarray, weights: np.ndarray, p: float) -> np.ndarray:
    """Array kernel of :func:`fuzzy_p_score`.

    ``rows`` is ``(n_values, 4)`` (one action) and ``weights`` is
    ``(..., n_values, 4)``; returns ``(..., 4)``. No validation; used inside the
    optimizer where weights may be perturbed off the trapezoid cone.
    """
    if math.isinf(p):
        env = rows.max(axis=0) if p > 0 else rows.min(axis=0)
        return np.broadcast_to(env, weights.shape[:-2] + (4,)).copy()
    if is_zero_p(p):
        out = np.exp((weights * np.log(rows)).sum(axis=-2))
        return np.sort(out, axis=-1)
    lr = p * np.log(rows)
    if p < 0:
        lr = lr[:, ::-1]
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        total = (weights * np.exp(lr)).sum(axis=-2)
        # near total = 1 the root amplifies rounding; expm1/log1p recover the digits
        shifted = (weights.sum(axis=-2) - 1.0) + (weights * np.expm1(lr)).sum(axis=-2)
        log_total = np.where(np.abs(shifted) < 0.5, np.log1p(shifted), np.log(total))
        out = np.exp(log_total / p)
    if p < 0:
        out = out[..., ::-1]
    return out


def defuzzify(x: Trapezoid) -> float:
    """Vertex-method distance to crisp zero."""
    return fuzzy.vertex_norm(x)


def aggregate_nu(crisp_min: float, crisp_max: float, p: float, nu: float) -> float:
    """Convex p-mean mix of the defuzzified extremes; ``nu`` weighs the maximum."""
    if not 0.0 <= nu <= 1.0:
        raise ValueError(f"nu must lie in [0, 1], got {nu}")
    p = parse_p(p)
    if math.isinf(p):
        return crisp_max if p > 0 else crisp_min
    if nu == 0.0:
        return crisp_min
    if nu == 1.0:
        return crisp_max
    if is_zero_p(p):
        if crisp_min == 0.0 or crisp_max == 0.0:
            return 0.0
        return math.exp((1 - nu) * math.log(crisp_min) + nu * math.log(crisp_max))
    if crisp_min == 0.0 or crisp_max == 0.0:
        if p < 0:
            return 0.0
        return ((1 - nu) * crisp_min ** p + nu * crisp_max ** p) ** (1.0 / p)
    # expm1/log1p keep the 1/p root accurate when p is close to zero
    s = (1 - nu) * math.expm1(p * math.log(crisp_min)) + nu * math.expm1(p * math.log(crisp_max))
    return math.exp(math.log1p(s) / p)
