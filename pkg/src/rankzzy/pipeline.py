"""End-to-end ranking: normalize, optimize score extremes, defuzzify, mix, sort."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import domain as dom
from .domain import WeightDomain
from .errors import DimensionMismatch, NoConvergence, RankzzyError
from .matrix import Assessment, FuzzyDecisionMatrix, ValueSpec, build_matrix, normalize
from .optimizer import MAXIMIZE, MINIMIZE, OptimizationResult, OptimizationSpec, optimize
from .score import ScoreBundle, ScoreParams, aggregate_nu, format_p

TIE_TOL = 1e-9


@dataclass(frozen=True)
class DecisionProblem:
    actions: tuple[str, ...]
    values: tuple[ValueSpec, ...]
    assessments: Mapping[tuple[str, str], Assessment]
    domain: WeightDomain
    params: ScoreParams = field(default_factory=ScoreParams)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "actions", tuple(self.actions))
        object.__setattr__(self, "values", tuple(self.values))
        names = [v.name for v in self.values]
        if len(set(self.actions)) != len(self.actions):
            raise DimensionMismatch("action identifiers must be unique")
        if len(set(names)) != len(names):
            raise DimensionMismatch("value names must be unique")
        if sorted(self.domain.names) != sorted(names):
            raise DimensionMismatch(f"domain covers {list(self.domain.names)}, values are {names}")
        object.__setattr__(self, "domain", self.domain.reorder(names))

    def validate(self) -> None:
        dom.validate(self.domain)
        build_matrix(self)


@dataclass
class RankingReport:
    actions: tuple[str, ...]
    value_names: tuple[str, ...]
    bundles: dict[str, ScoreBundle]
    ranking: list[str]
    ties: list[list[str]]
    normalized: FuzzyDecisionMatrix
    params: ScoreParams
    seed: int
    timing: dict[str, float] = field(default_factory=dict)

    @property
    def scores(self) -> dict[str, float]:
        return {a: self.bundles[a].aggregated for a in self.actions}

    def to_dict(self, include_timing: bool = True) -> dict:
        def scheme(w):
            return {name: t.to_list() for name, t in zip(self.value_names, w)}

        out = {
            "params": {
                "p": format_p(self.params.p),
                "nu": self.params.nu,
                "epsilon": self.params.epsilon,
                "stance": self.params.stance,
                "seed": self.seed,
            },
            "ranking": [
                {"position": k + 1, "action": a, "score": self.bundles[a].aggregated}
                for k, a in enumerate(self.ranking)
            ],
            "ties": self.ties,
            "actions": {},
            "normalized_matrix": {
                a: {v: t.to_list() for v, t in zip(self.value_names, row)}
                for a, row in zip(self.normalized.actions, self.normalized.entries)
            },
        }
        for a in self.actions:
            b = self.bundles[a]
            out["actions"][a] = {
                "fuzzy_min": b.fuzzy_min.to_list(),
                "fuzzy_max": b.fuzzy_max.to_list(),
                "crisp_min": b.crisp_min,
                "crisp_max": b.crisp_max,
                "aggregated": b.aggregated,
                "weights_min": scheme(b.weights_min),
                "weights_max": scheme(b.weights_max),
                "converged": b.converged,
                "weights_ignored": b.weights_ignored,
            }
        if include_timing:
            out["timing"] = dict(self.timing)
        return out

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2)

    def table(self) -> str:
        lines = [f"{k + 1}. {a} ({self.bundles[a].aggregated:.3f})" for k, a in enumerate(self.ranking)]
        return "  ".join(lines)


def _tag(exc: RankzzyError, step: str) -> RankzzyError:
    if exc.step is None:
        exc.step = step
    return exc


def _seed_for(seed: int, i: int, direction: int) -> int:
    return int(np.random.SeedSequence([seed, i, direction]).generate_state(1)[0])


def _solve_extremes(normalized, domain, p, seed, threads, optimizer_options):
    """Min and max problems of every action, in input order."""
    jobs = []
    for i, row in enumerate(normalized.entries):
        for direction, tag in ((MINIMIZE, 0), (MAXIMIZE, 1)):
            jobs.append(
                OptimizationSpec(row, domain, p, direction, seed=_seed_for(seed, i, tag), **optimizer_options)
            )
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(optimize, jobs))
    else:
        results = [optimize(s) for s in jobs]
    return [(results[2 * i], results[2 * i + 1]) for i in range(len(normalized.actions))]


def _bundle(lo: OptimizationResult, hi: OptimizationResult, p: float, nu: float) -> ScoreBundle:
    return ScoreBundle(
        fuzzy_min=lo.fuzzy_score,
        fuzzy_max=hi.fuzzy_score,
        crisp_min=lo.objective,
        crisp_max=hi.objective,
        aggregated=aggregate_nu(lo.objective, hi.objective, p, nu),
        weights_min=lo.weights,
        weights_max=hi.weights,
        converged=lo.converged and hi.converged,
        weights_ignored=lo.weights_ignored,
        iterations={"min": lo.iterations, "max": hi.iterations},
    )


def order_actions(actions: Sequence[str], scores: Sequence[float], tie_tol: float = TIE_TOL):
    """Descending order (stable on input order) and groups of tied neighbours."""
    idx = sorted(range(len(actions)), key=lambda i: -scores[i])
    ranking = [actions[i] for i in idx]
    ties, group = [], [idx[0]] if idx else []
    for prev, cur in zip(idx, idx[1:]):
        if abs(scores[prev] - scores[cur]) < tie_tol:
            group.append(cur)
        else:
            if len(group) > 1:
                ties.append([actions[i] for i in group])
            group = [cur]
    if len(group) > 1:
        ties.append([actions[i] for i in group])
    return ranking, ties


def rank_matrix(
    matrix: FuzzyDecisionMatrix,
    domain: WeightDomain,
    params: ScoreParams = ScoreParams(),
    seed: int = 0,
    *,
    threads: int = 1,
    strict: bool = False,
    tie_tol: float = TIE_TOL,
    optimizer_options: Mapping | None = None,
    timing: dict | None = None,
) -> RankingReport:
    """Steps 1 to 5 on an already fuzzified matrix."""
    timing = {} if timing is None else timing
    opts = dict(optimizer_options or {})
    domain = domain.reorder([v.name for v in matrix.values])
    try:
        dom.validate(domain)
    except RankzzyError as exc:
        raise _tag(exc, "domain") from None

    t0 = time.perf_counter()
    try:
        normalized = normalize(matrix, params.epsilon)
    except RankzzyError as exc:
        raise _tag(exc, "normalize") from None
    t1 = time.perf_counter()
    try:
        extremes = _solve_extremes(normalized, domain, params.p, seed, threads, opts)
    except RankzzyError as exc:
        raise _tag(exc, "optimize") from None
    t2 = time.perf_counter()
    bundles = {a: _bundle(lo, hi, params.p, params.nu) for a, (lo, hi) in zip(matrix.actions, extremes)}
    if strict:
        failed = [a for a, b in bundles.items() if not b.converged]
        if failed:
            raise _tag(NoConvergence(f"optimizer did not converge for {failed}"), "optimize")
    t3 = time.perf_counter()
    ranking, ties = order_actions(matrix.actions, [bundles[a].aggregated for a in matrix.actions], tie_tol)
    t4 = time.perf_counter()
    timing.update(normalize=t1 - t0, optimize=t2 - t1, aggregate=t3 - t2, rank=t4 - t3)
    return RankingReport(
        actions=matrix.actions,
        value_names=tuple(v.name for v in matrix.values),
        bundles=bundles,
        ranking=ranking,
        ties=ties,
        normalized=normalized,
        params=params,
        seed=seed,
        timing=timing,
    )


def rank(problem: DecisionProblem, **kwargs) -> RankingReport:
    """Run the full method on a decision problem."""
    t0 = time.perf_counter()
    try:
        matrix = build_matrix(problem)
    except RankzzyError as exc:
        raise _tag(exc, "build_matrix") from None
    timing = {"build_matrix": time.perf_counter() - t0}
    return rank_matrix(matrix, problem.domain, problem.params, problem.seed, timing=timing, **kwargs)


# sensitivity ---------------------------------------------------------------------

@dataclass
class SensitivityGrid:
    actions: tuple[str, ...]
    p_values: np.ndarray
    nu_values: np.ndarray
    scores: np.ndarray  # (n_p, n_nu, n_actions)

    @property
    def top(self) -> np.ndarray:
        """Index of the best action per cell; first in input order on ties."""
        return self.scores.argmax(axis=-1)

    def top_share(self, action: str) -> float:
        return float(np.mean(self.top == self.actions.index(action)))

    def rows(self):
        top = self.top
        for ip, p in enumerate(self.p_values):
            for inu, nu in enumerate(self.nu_values):
                for ia, a in enumerate(self.actions):
                    yield p, nu, a, self.scores[ip, inu, ia], ia == top[ip, inu]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p", "nu", "action", "score", "is_top"])
        for p, nu, a, s, is_top in self.rows():
            w.writerow([repr(float(p)), repr(float(nu)), a, repr(float(s)), int(is_top)])
        return buf.getvalue()


def sensitivity_grid(
    problem: DecisionProblem,
    p_range: tuple[float, float] = (0.0, 2.0),
    nu_range: tuple[float, float] = (0.0, 1.0),
    resolution: int = 25,
    *,
    threads: int = 1,
    optimizer_options: Mapping | None = None,
) -> SensitivityGrid:
    """Aggregated scores over a regular (p, nu) grid.

    Normalization runs once. The min/max optimizations depend on p only, so they
    run once per p row and are reused across the nu axis.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    matrix = build_matrix(problem)
    domain = problem.domain
    dom.validate(domain)
    normalized = normalize(matrix, problem.params.epsilon)
    p_values = np.linspace(p_range[0], p_range[1], resolution)
    nu_values = np.linspace(nu_range[0], nu_range[1], resolution)
    opts = dict(optimizer_options or {})
    scores = np.empty((resolution, resolution, len(matrix.actions)))
    for ip, p in enumerate(p_values):
        extremes = _solve_extremes(normalized, domain, float(p), problem.seed, threads, opts)
        for inu, nu in enumerate(nu_values):
            for ia, (lo, hi) in enumerate(extremes):
                scores[ip, inu, ia] = aggregate_nu(lo.objective, hi.objective, float(p), float(nu))
    return SensitivityGrid(matrix.actions, p_values, nu_values, scores)
