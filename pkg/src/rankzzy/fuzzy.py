"""Trapezoidal LR-fuzzy numbers with linear reference functions.

A number is stored by its four ordered vertices ``(a, b, c, d)``: support
``[a, d]`` and core ``[b, c]``. The spread form ``(xL, xR, alphaL, alphaR)``
maps to vertices as ``a = xL - alphaL, b = xL, c = xR, d = xR + alphaR``.

Products, quotients and powers are vertex-wise. Reciprocals, quotients and
negative powers need strictly positive operands; products and nonnegative
powers accept a zero lower vertex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptySet, InvalidTrapezoid, NonPositiveOperand

_ORDER_RTOL = 1e-12


@dataclass(frozen=True)
class Trapezoid:
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        vals = (self.a, self.b, self.c, self.d)
        if not all(math.isfinite(v) for v in vals):
            raise InvalidTrapezoid(f"non-finite vertex in {vals}")
        for lo, hi in zip(vals, vals[1:]):
            if lo > hi + _ORDER_RTOL * (1.0 + abs(lo) + abs(hi)):
                raise InvalidTrapezoid(f"vertices must satisfy a <= b <= c <= d, got {vals}")
        # absorb ulp-level inversions so downstream code can rely on exact order
        fixed = tuple(float(v) for v in np.maximum.accumulate(np.asarray(vals, dtype=float)))
        for name, v in zip("abcd", fixed):
            object.__setattr__(self, name, v)

    # construction helpers -------------------------------------------------
    @classmethod
    def crisp(cls, v: float) -> Trapezoid:
        return cls(v, v, v, v)

    @classmethod
    def from_spread(cls, x_left, x_right, alpha_left, alpha_right) -> Trapezoid:
        if alpha_left < 0 or alpha_right < 0:
            raise InvalidTrapezoid("spreads must be nonnegative")
        return cls(x_left - alpha_left, x_left, x_right, x_right + alpha_right)

    @classmethod
    def from_array(cls, arr: Sequence[float]) -> Trapezoid:
        if len(arr) != 4:
            raise InvalidTrapezoid(f"expected 4 vertices, got {len(arr)}")
        return cls(*(float(v) for v in arr))

    def to_spread(self) -> tuple[float, float, float, float]:
        return (self.b, self.c, self.b - self.a, self.d - self.c)

    def to_array(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c, self.d])

    def to_list(self) -> list[float]:
        return [self.a, self.b, self.c, self.d]

    def __iter__(self):
        return iter((self.a, self.b, self.c, self.d))

    @property
    def is_positive(self) -> bool:
        return self.a > 0

    # operators delegate to the module functions
    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return sub(self, other)

    def __neg__(self):
        return neg(self)

    def __mul__(self, other):
        if isinstance(other, Trapezoid):
            return mul(self, other)
        return scale(other, self)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return div(self, other)

    def __pow__(self, lam):
        return power(self, lam)

    def __repr__(self):
        return f"Trapezoid({self.a:.6g}, {self.b:.6g}, {self.c:.6g}, {self.d:.6g})"


ZERO = Trapezoid(0.0, 0.0, 0.0, 0.0)
ONE = Trapezoid(1.0, 1.0, 1.0, 1.0)


def as_trapezoid(x) -> Trapezoid:
    if isinstance(x, Trapezoid):
        return x
    return Trapezoid.from_array(x)


def membership(x: Trapezoid, t: float) -> float:
    """Grade of membership of ``t`` in ``x`` (piecewise linear)."""
    if t < x.a or t > x.d:
        return 0.0
    if x.b <= t <= x.c:
        return 1.0
    if t < x.b:
        return (t - x.a) / (x.b - x.a)
    return (x.d - t) / (x.d - x.c)


def alpha_cut(x: Trapezoid, alpha: float) -> tuple[float, float]:
    """Closed interval ``{t : membership(x, t) >= alpha}`` for ``alpha`` in (0, 1]."""
    return (x.a + alpha * (x.b - x.a), x.d - alpha * (x.d - x.c))


# arithmetic -------------------------------------------------------------------

def add(x: Trapezoid, y: Trapezoid) -> Trapezoid:
    return Trapezoid(x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d)


def neg(x: Trapezoid) -> Trapezoid:
    return Trapezoid(-x.d, -x.c, -x.b, -x.a)


def sub(x: Trapezoid, y: Trapezoid) -> Trapezoid:
    return add(x, neg(y))


def scale(lam: float, x: Trapezoid) -> Trapezoid:
    if lam < 0:
        raise NonPositiveOperand(f"scale factor must be nonnegative, got {lam}")
    return Trapezoid(lam * x.a, lam * x.b, lam * x.c, lam * x.d)


def _require_positive(*xs: Trapezoid, op: str) -> None:
    for x in xs:
        if not x.a > 0:
            raise NonPositiveOperand(f"{op} needs strictly positive operands, got {x!r}")


def mul(x: Trapezoid, y: Trapezoid) -> Trapezoid:
    """Vertex-wise product.

    Crisp nonnegative factors reduce to scaling. Otherwise both operands must be
    nonnegative (a zero lower vertex is allowed so weights may touch zero).
    """
    if y.a == y.d and y.a >= 0:
        return scale(y.a, x)
    if x.a == x.d and x.a >= 0:
        return scale(x.a, y)
    if x.a < 0 or y.a < 0:
        raise NonPositiveOperand(f"mul needs nonnegative operands, got {x!r} and {y!r}")
    return Trapezoid(x.a * y.a, x.b * y.b, x.c * y.c, x.d * y.d)


def reciprocal(x: Trapezoid) -> Trapezoid:
    _require_positive(x, op="reciprocal")
    return Trapezoid(1.0 / x.d, 1.0 / x.c, 1.0 / x.b, 1.0 / x.a)


def div(x: Trapezoid, y: Trapezoid) -> Trapezoid:
    return mul(x, reciprocal(y))


def power(x: Trapezoid, lam: float) -> Trapezoid:
    """Vertex-wise power; negative exponents reverse the vertex order."""
    if lam < 0:
        _require_positive(x, op="pow")
    elif not float(lam).is_integer():
        if x.a < 0:
            raise NonPositiveOperand(f"fractional pow needs nonnegative operands, got {x!r}")
    elif lam % 2 == 0 and lam > 0 and x.a < 0:
        # even powers are not monotone across zero
        raise NonPositiveOperand(f"even pow of a sign-changing number {x!r}")
    vals = [v ** lam for v in x]
    if lam < 0:
        vals.reverse()
    return Trapezoid(*vals)


# orders and distances -----------------------------------------------------------

def leq_pointwise(x: Trapezoid, y: Trapezoid) -> bool:
    """Alpha-cut dominance; for trapezoids this reduces to four vertex inequalities."""
    return x.a <= y.a and x.b <= y.b and x.c <= y.c and x.d <= y.d


def vertex_norm(x: Trapezoid) -> float:
    return math.sqrt(x.a * x.a + x.b * x.b + x.c * x.c + x.d * x.d)


def vertex_distance(x: Trapezoid, y: Trapezoid) -> float:
    return math.sqrt(sum((u - v) ** 2 for u, v in zip(x, y)))


def preceq(x: Trapezoid, y: Trapezoid) -> bool:
    return vertex_norm(x) <= vertex_norm(y)


def envelope_min(xs: Iterable[Trapezoid]) -> Trapezoid:
    arr = _stack(xs)
    return Trapezoid(*arr.min(axis=0))


def envelope_max(xs: Iterable[Trapezoid]) -> Trapezoid:
    arr = _stack(xs)
    return Trapezoid(*arr.max(axis=0))


def _stack(xs: Iterable[Trapezoid]) -> np.ndarray:
    rows = [x.to_array() for x in xs]
    if not rows:
        raise EmptySet("envelope of an empty set")
    return np.vstack(rows)
