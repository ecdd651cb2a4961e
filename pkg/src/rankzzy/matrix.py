"""Fuzzy decision matrices: building them from agent assessments and normalizing them."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

import numpy as np

from . import fuzzy
from .errors import (
    EmptySamples,
    InvalidScale,
    KindMismatch,
    MissingAssessment,
    ProportionsNotNormalized,
    UnknownLabel,
)
from .fuzzy import Trapezoid

PROPORTION_ATOL = 1e-9


class Kind(str, Enum):
    QUANTITATIVE = "quantitative"
    QUALITATIVE = "qualitative"


class Objective(str, Enum):
    MAXIMIZE = "maximize"
    MINIMIZE = "minimize"


@dataclass(frozen=True)
class QualitativeScale:
    """Ordered labels, each paired with its fuzzy correspondence on [0, 1]."""

    categories: tuple[tuple[str, Trapezoid], ...]

    def __post_init__(self):
        cats = tuple((str(lbl), fuzzy.as_trapezoid(t)) for lbl, t in self.categories)
        object.__setattr__(self, "categories", cats)
        if len(cats) < 2:
            raise InvalidScale("a qualitative scale needs at least two categories")
        labels = [lbl for lbl, _ in cats]
        if len(set(labels)) != len(labels):
            raise InvalidScale(f"duplicate labels in scale: {labels}")
        for lbl, t in cats:
            if t.a < 0 or t.d > 1:
                raise InvalidScale(f"correspondence of {lbl!r} leaves [0, 1]: {t!r}")

    @property
    def labels(self) -> list[str]:
        return [lbl for lbl, _ in self.categories]

    def __getitem__(self, label: str) -> Trapezoid:
        for lbl, t in self.categories:
            if lbl == label:
                return t
        raise UnknownLabel(f"label {label!r} not in scale {self.labels}")


@dataclass(frozen=True)
class ValueSpec:
    name: str
    kind: Kind = Kind.QUANTITATIVE
    objective: Objective = Objective.MAXIMIZE
    unit: str | None = None
    scale: QualitativeScale | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "objective", Objective(self.objective))
        if (self.kind is Kind.QUALITATIVE) != (self.scale is not None):
            raise InvalidScale(f"value {self.name!r}: a scale is required iff the value is qualitative")

    @property
    def maximize(self) -> bool:
        return self.objective is Objective.MAXIMIZE


# assessment vectors ----------------------------------------------------------------

@dataclass(frozen=True)
class QuantitativeAssessment:
    """One numeric sample per agent."""

    samples: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(float(s) for s in self.samples))
        if not self.samples:
            raise EmptySamples("a quantitative assessment needs at least one sample")


@dataclass(frozen=True)
class QualitativeAssessment:
    """Share of agents choosing each label, keyed by label."""

    proportions: Mapping[str, float] = field(default_factory=dict)

    @classmethod
    def from_votes(cls, votes: Sequence[str]) -> QualitativeAssessment:
        if not votes:
            raise EmptySamples("no votes")
        counts = Counter(votes)
        n = len(votes)
        return cls({lbl: k / n for lbl, k in counts.items()})


@dataclass(frozen=True)
class FuzzyAssessment:
    """A pre-fuzzified entry that bypasses the transforms."""

    trapezoid: Trapezoid


Assessment = QuantitativeAssessment | QualitativeAssessment | FuzzyAssessment


@dataclass(frozen=True)
class FuzzyDecisionMatrix:
    actions: tuple[str, ...]
    values: tuple[ValueSpec, ...]
    entries: tuple[tuple[Trapezoid, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "actions", tuple(self.actions))
        object.__setattr__(self, "values", tuple(self.values))
        object.__setattr__(self, "entries", tuple(tuple(row) for row in self.entries))
        if len(self.entries) != len(self.actions):
            raise ValueError("matrix needs one row per action")
        for row in self.entries:
            if len(row) != len(self.values):
                raise ValueError("matrix rows must have one entry per value")

    @classmethod
    def from_array(cls, actions, values, arr) -> FuzzyDecisionMatrix:
        arr = np.asarray(arr, dtype=float)
        entries = [[Trapezoid(*arr[i, j]) for j in range(arr.shape[1])] for i in range(arr.shape[0])]
        return cls(actions, values, entries)

    def as_array(self) -> np.ndarray:
        """Entries as an ``(n_actions, n_values, 4)`` array of vertices."""
        return np.array([[t.to_list() for t in row] for row in self.entries], dtype=float).reshape(
            len(self.actions), len(self.values), 4
        )

    def column(self, j: int) -> list[Trapezoid]:
        return [row[j] for row in self.entries]

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.actions), len(self.values))


# transforms -------------------------------------------------------------------

def transform_quantitative(samples: Sequence[float]) -> Trapezoid:
    """(min, mean - sigma, mean + sigma, max) with the core clamped into the support.

    sigma is the population standard deviation.
    """
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise EmptySamples("a quantitative assessment needs at least one sample")
    lo, hi = float(x.min()), float(x.max())
    mean = float(x.mean())
    # float mean can land a hair outside [lo, hi]
    mean = min(max(mean, lo), hi)
    sigma = float(x.std())
    b = min(max(mean - sigma, lo), mean)
    c = max(min(mean + sigma, hi), mean)
    return Trapezoid(lo, b, c, hi)


def transform_qualitative(proportions: Mapping[str, float], scale: QualitativeScale) -> Trapezoid:
    """Convex combination of the scale's correspondences weighted by label shares."""
    known = set(scale.labels)
    for lbl, share in proportions.items():
        if lbl not in known:
            raise UnknownLabel(f"label {lbl!r} not in scale {scale.labels}")
        if not 0.0 <= share <= 1.0:
            raise ProportionsNotNormalized(f"share of {lbl!r} is {share}, outside [0, 1]")
    total = math.fsum(proportions.values())
    if abs(total - 1.0) > PROPORTION_ATOL:
        raise ProportionsNotNormalized(f"proportions sum to {total}, expected 1")
    result = fuzzy.ZERO
    for lbl, corr in scale.categories:
        share = proportions.get(lbl, 0.0)
        if share:
            result = result + fuzzy.scale(share, corr)
    return result


def transform_entry(assessment: Assessment, spec: ValueSpec) -> Trapezoid:
    if isinstance(assessment, FuzzyAssessment):
        return assessment.trapezoid
    if spec.kind is Kind.QUANTITATIVE:
        if not isinstance(assessment, QuantitativeAssessment):
            raise KindMismatch(f"value {spec.name!r} is quantitative but got {type(assessment).__name__}")
        return transform_quantitative(assessment.samples)
    if not isinstance(assessment, QualitativeAssessment):
        raise KindMismatch(f"value {spec.name!r} is qualitative but got {type(assessment).__name__}")
    return transform_qualitative(assessment.proportions, spec.scale)


def build_matrix(problem) -> FuzzyDecisionMatrix:
    """Fuzzify every (action, value) assessment of ``problem``.

    ``problem`` needs ``actions``, ``values`` and an ``assessments`` mapping keyed
    by ``(action, value_name)``.
    """
    rows = []
    for action in problem.actions:
        row = []
        for spec in problem.values:
            try:
                assessment = problem.assessments[(action, spec.name)]
            except KeyError:
                raise MissingAssessment(action, spec.name) from None
            row.append(transform_entry(assessment, spec))
        rows.append(row)
    return FuzzyDecisionMatrix(problem.actions, problem.values, rows)


def normalize(matrix: FuzzyDecisionMatrix, epsilon: float = 1e-4) -> FuzzyDecisionMatrix:
    """Map every column into (0, 1] with crisp column envelopes.

    With ``lo`` the smallest support vertex of the column and ``hi`` the largest,
    a maximize vertex ``v`` becomes ``(v - lo + eps) / (hi - lo + eps)`` and a
    minimize vertex ``(hi - v + eps) / (hi - lo + eps)`` (then re-sorted).
    """
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    x = matrix.as_array()
    lo = x[:, :, 0].min(axis=0)
    hi = x[:, :, 3].max(axis=0)
    denom = hi - lo + epsilon
    out = np.empty_like(x)
    for j, spec in enumerate(matrix.values):
        if spec.maximize:
            out[:, j, :] = (x[:, j, :] - lo[j] + epsilon) / denom[j]
        else:
            out[:, j, :] = ((hi[j] - x[:, j, :] + epsilon) / denom[j])[:, ::-1]
    return FuzzyDecisionMatrix.from_array(matrix.actions, matrix.values, out)
