"""Domains of bounded fuzzy weights.

A domain holds a fuzzy lower and upper bound per value. A weight scheme is a
member when every weight sits vertex-wise between its bounds and the cores
straddle one: ``sum_j b(w_j) <= 1 <= sum_j c(w_j)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import fuzzy
from .errors import BoundsOutOfOrder, DimensionMismatch, InfeasibleCoreSum, NotNormalized
from .fuzzy import Trapezoid

FEAS_ATOL = 1e-9


@dataclass(frozen=True)
class WeightScheme:
    weights: tuple[Trapezoid, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(fuzzy.as_trapezoid(w) for w in self.weights))

    @classmethod
    def from_array(cls, arr) -> WeightScheme:
        arr = np.asarray(arr, dtype=float).reshape(-1, 4)
        return cls(tuple(Trapezoid(*row) for row in arr))

    def as_array(self) -> np.ndarray:
        return np.array([w.to_list() for w in self.weights], dtype=float).reshape(-1, 4)

    def __len__(self):
        return len(self.weights)

    def __iter__(self):
        return iter(self.weights)

    def __getitem__(self, j):
        return self.weights[j]


@dataclass(frozen=True)
class WeightDomain:
    names: tuple[str, ...]
    lower: tuple[Trapezoid, ...]
    upper: tuple[Trapezoid, ...]

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "lower", tuple(fuzzy.as_trapezoid(t) for t in self.lower))
        object.__setattr__(self, "upper", tuple(fuzzy.as_trapezoid(t) for t in self.upper))
        if not len(self.names) == len(self.lower) == len(self.upper):
            raise DimensionMismatch("names, lower and upper must have equal length")

    def __len__(self):
        return len(self.names)

    def lower_array(self) -> np.ndarray:
        return np.array([t.to_list() for t in self.lower], dtype=float).reshape(-1, 4)

    def upper_array(self) -> np.ndarray:
        return np.array([t.to_list() for t in self.upper], dtype=float).reshape(-1, 4)

    @property
    def is_singleton(self) -> bool:
        return self.lower == self.upper

    def midpoint(self) -> WeightScheme:
        """Vertex-wise midpoint of the bounds, repaired into the domain."""
        mid = 0.5 * (self.lower_array() + self.upper_array())
        return WeightScheme.from_array(repair(self, mid))

    def reorder(self, names: Sequence[str]) -> WeightDomain:
        idx = [self.names.index(n) for n in names]
        return WeightDomain(tuple(names), [self.lower[i] for i in idx], [self.upper[i] for i in idx])


def validate(domain: WeightDomain) -> None:
    """Raise if the bounds are out of order or the core-sum window is empty."""
    for name, lo, up in zip(domain.names, domain.lower, domain.upper):
        if not fuzzy.leq_pointwise(fuzzy.ZERO, lo):
            raise BoundsOutOfOrder(name, f"lower bound {lo!r} has negative vertices")
        if not fuzzy.leq_pointwise(lo, up):
            raise BoundsOutOfOrder(name, f"lower {lo!r} is not below upper {up!r}")
        if not fuzzy.leq_pointwise(up, fuzzy.ONE):
            raise BoundsOutOfOrder(name, f"upper bound {up!r} exceeds 1")
    sum_lower_b = math.fsum(t.b for t in domain.lower)
    sum_upper_c = math.fsum(t.c for t in domain.upper)
    if sum_lower_b > 1 + FEAS_ATOL or sum_upper_c < 1 - FEAS_ATOL:
        raise InfeasibleCoreSum(sum_lower_b, sum_upper_c)


def is_valid(domain: WeightDomain) -> bool:
    try:
        validate(domain)
    except (BoundsOutOfOrder, InfeasibleCoreSum):
        return False
    return True


def member_of(w: WeightScheme, domain: WeightDomain, atol: float = FEAS_ATOL) -> bool:
    if len(w) != len(domain):
        raise DimensionMismatch(f"scheme has {len(w)} weights, domain has {len(domain)} values")
    arr = w.as_array()
    if np.any(np.diff(arr, axis=1) < -atol):
        return False
    if np.any(arr < domain.lower_array() - atol) or np.any(arr > domain.upper_array() + atol):
        return False
    return math.fsum(arr[:, 1]) <= 1 + atol and math.fsum(arr[:, 2]) >= 1 - atol


def repair(domain: WeightDomain, arr: np.ndarray) -> np.ndarray:
    """Move an arbitrary ``(n_values, 4)`` vertex array into the domain.

    Clips to the box, restores vertex order, then pulls the b (resp. c) column
    proportionally toward its bounds until the core sums straddle one. The
    domain must be valid.
    """
    lo, up = domain.lower_array(), domain.upper_array()
    w = np.clip(np.asarray(arr, dtype=float).reshape(lo.shape), lo, up)
    w = np.maximum.accumulate(w, axis=1)
    sb = w[:, 1].sum()
    if sb > 1:
        slack = sb - lo[:, 1].sum()
        t = (1 - lo[:, 1].sum()) / slack if slack > 0 else 0.0
        w[:, 1] = lo[:, 1] + max(t, 0.0) * (w[:, 1] - lo[:, 1])
        w[:, 0] = np.minimum(w[:, 0], w[:, 1])
    sc = w[:, 2].sum()
    if sc < 1:
        room = up[:, 2].sum() - sc
        t = (1 - sc) / room if room > 0 else 0.0
        w[:, 2] = w[:, 2] + min(t, 1.0) * (up[:, 2] - w[:, 2])
        w[:, 3] = np.maximum(w[:, 3], w[:, 2])
    return w


def from_crisp(weights: Sequence[float], names: Sequence[str] | None = None) -> WeightDomain:
    """Domain containing a crisp normalized weight vector: every value is bounded by
    the smallest and the largest weight."""
    w = np.asarray(weights, dtype=float)
    if w.size == 0 or np.any(w < 0) or abs(math.fsum(w) - 1.0) > 1e-9:
        raise NotNormalized(f"crisp weights must be nonnegative and sum to 1, got {list(w)}")
    names = tuple(names) if names is not None else tuple(f"v{j}" for j in range(w.size))
    if len(names) != w.size:
        raise DimensionMismatch("one name per weight")
    lo, hi = Trapezoid.crisp(float(w.min())), Trapezoid.crisp(float(w.max()))
    return WeightDomain(names, (lo,) * w.size, (hi,) * w.size)


def from_fuzzy(weights: Sequence[Trapezoid], names: Sequence[str] | None = None) -> WeightDomain:
    """Domain bounded by the vertex-wise envelopes of a fuzzy weight scheme."""
    ws = [fuzzy.as_trapezoid(t) for t in weights]
    names = tuple(names) if names is not None else tuple(f"v{j}" for j in range(len(ws)))
    if len(names) != len(ws):
        raise DimensionMismatch("one name per weight")
    lo, hi = fuzzy.envelope_min(ws), fuzzy.envelope_max(ws)
    return WeightDomain(names, (lo,) * len(ws), (hi,) * len(ws))
