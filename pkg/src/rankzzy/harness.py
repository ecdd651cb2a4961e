"""Synthetic benchmarks: rank correlation against crisp TOPSIS and timing scaling.

Every run draws from its own generator seeded by ``(master_seed, run)``, so
results do not depend on execution order.
"""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import domain as dom
from .errors import LengthMismatch, NonPositiveValue, RankzzyError
from .fuzzy import Trapezoid, envelope_max, envelope_min
from .matrix import FuzzyDecisionMatrix, Kind, Objective, ValueSpec
from .pipeline import rank_matrix
from .score import ScoreParams, format_p

ENTRY_RANGE = (0.05, 1.0)
MIN_VERTEX = 1e-6
DEFAULT_P_SET = (-1.0, 0.0, 1.0, 2.0)


def run_rng(master_seed: int, run: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([master_seed, run]))


@dataclass
class SyntheticProblem:
    crisp: np.ndarray  # (n_actions, n_values)
    fuzzy: np.ndarray  # (n_actions, n_values, 4)
    objectives: list[Objective]
    lam: float
    seed: int

    def values(self) -> tuple[ValueSpec, ...]:
        return tuple(ValueSpec(f"v{j}", Kind.QUANTITATIVE, o) for j, o in enumerate(self.objectives))

    def matrix(self, extra_row: Sequence[Trapezoid] | None = None, extra_name: str = "z") -> FuzzyDecisionMatrix:
        arr = self.fuzzy
        actions = [f"a{i}" for i in range(arr.shape[0])]
        if extra_row is not None:
            arr = np.concatenate([arr, np.array([[t.to_list() for t in extra_row]])], axis=0)
            actions.append(extra_name)
        return FuzzyDecisionMatrix.from_array(actions, self.values(), arr)


def fuzzify(v: float, rho: float = 0.1, spread: float = 0.1, rng: np.random.Generator | None = None) -> Trapezoid:
    """Random trapezoid around a positive crisp value.

    Core ``[v(1 - rho u1), v(1 + rho u2)]``, support widened by a further
    relative ``spread``. Both lower vertices are floored at ``min(1e-6, v)`` so
    the result stays positive even for ``rho >= 1``.
    """
    if not v > 0:
        raise NonPositiveValue(f"fuzzify needs a positive value, got {v}")
    rng = rng if rng is not None else np.random.default_rng()
    u1, u2, u3, u4 = rng.uniform(0.0, 1.0, size=4)
    floor = min(MIN_VERTEX, v)
    b = max(v * (1 - rho * u1), floor)
    c = v * (1 + rho * u2)
    a = max(b * (1 - spread * u3), floor)
    d = c * (1 + spread * u4)
    return Trapezoid(a, b, c, d)


def random_objectives(n_values: int, rng: np.random.Generator) -> list[Objective]:
    flags = rng.integers(0, 2, size=n_values).astype(bool)
    if n_values >= 2 and (flags.all() or not flags.any()):
        flags[rng.integers(0, n_values)] ^= True
    return [Objective.MAXIMIZE if f else Objective.MINIMIZE for f in flags]


def gen_random_problem(n_actions: int, n_values: int, seed: int, rho: float = 0.1, spread: float = 0.1) -> SyntheticProblem:
    if n_actions < 2 or n_values < 1:
        raise ValueError("need at least 2 actions and 1 value")
    rng = np.random.default_rng(seed)
    crisp = rng.uniform(*ENTRY_RANGE, size=(n_actions, n_values))
    objectives = random_objectives(n_values, rng)
    fz = np.array([[fuzzify(v, rho, spread, rng).to_list() for v in row] for row in crisp])
    lam = float(rng.uniform(0.0, 1.0))
    return SyntheticProblem(crisp, fz, objectives, lam, seed)


def _columns(fz) -> list[list[Trapezoid]]:
    arr = np.asarray(fz, dtype=float)
    return [[Trapezoid(*arr[i, j]) for i in range(arr.shape[0])] for j in range(arr.shape[1])]


def ideal_solutions(fz, objectives: Sequence[Objective]) -> tuple[list[Trapezoid], list[Trapezoid]]:
    """Positive and negative ideal rows from vertex-wise column envelopes.

    The negative ideal is the opposite envelope of the positive one.
    """
    pis, nis = [], []
    for col, obj in zip(_columns(fz), objectives):
        hi, lo = envelope_max(col), envelope_min(col)
        if Objective(obj) is Objective.MAXIMIZE:
            pis.append(hi)
            nis.append(lo)
        else:
            pis.append(lo)
            nis.append(hi)
    return pis, nis


def build_z_lambda(
    fz,
    objectives: Sequence[Objective],
    lam: float,
    rng: np.random.Generator,
    crisp: np.ndarray | None = None,
    noise: bool = True,
) -> list[Trapezoid]:
    """Noisy convex combination ``(1-lam) PIS + lam NIS + lam(1-lam) eps``.

    ``eps_j`` is a crisp normal draw with the mean and standard deviation of the
    crisp matrix (of all fuzzy vertices when ``crisp`` is not given).
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    pis, nis = ideal_solutions(fz, objectives)
    ref = np.asarray(crisp if crisp is not None else fz, dtype=float)
    eps = rng.normal(ref.mean(), ref.std(), size=len(pis))
    factor = lam * (1 - lam)
    z = []
    for p, n, e in zip(pis, nis, eps):
        v = (1 - lam) * p.to_array() + lam * n.to_array()
        if noise and factor > 0:
            v = np.maximum(v + factor * e, MIN_VERTEX)
        z.append(Trapezoid(*np.sort(v)))
    return z


def centroid(t: Trapezoid) -> float:
    return (t.a + t.b + t.c + t.d) / 4.0


def topsis_closeness(x: np.ndarray, objectives: Sequence[Objective]) -> np.ndarray:
    """Crisp TOPSIS closeness with vector normalization and uniform weights.

    A column whose entries are all equal carries no information and is dropped.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ValueError("TOPSIS needs a matrix with at least 2 rows")
    n_values = x.shape[1]
    weights = np.full(n_values, 1.0 / n_values)
    v = np.zeros_like(x)
    for j in range(n_values):
        col = x[:, j]
        norm = math.sqrt(float(col @ col))
        if norm == 0 or np.all(col == col[0]):
            continue
        v[:, j] = weights[j] * col / norm
    maximize = np.array([Objective(o) is Objective.MAXIMIZE for o in objectives])
    best = np.where(maximize, v.max(axis=0), v.min(axis=0))
    worst = np.where(maximize, v.min(axis=0), v.max(axis=0))
    d_best = np.sqrt(((v - best) ** 2).sum(axis=1))
    d_worst = np.sqrt(((v - worst) ** 2).sum(axis=1))
    total = d_best + d_worst
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(total > 0, d_worst / total, 0.5)


def ordinal_positions(scores: Sequence[float]) -> np.ndarray:
    """1-based position of every item when sorted by descending score (stable)."""
    order = sorted(range(len(scores)), key=lambda i: -scores[i])
    pos = np.empty(len(scores), dtype=int)
    pos[order] = np.arange(1, len(scores) + 1)
    return pos


def topsis_rank(x: np.ndarray, objectives: Sequence[Objective]) -> np.ndarray:
    return ordinal_positions(topsis_closeness(x, objectives))


def kendall_tau(r: Sequence[float], t: Sequence[float]) -> float:
    """Pairwise-sign rank correlation ``2/(N(N-1)) sum_{i<j} sign(Ri-Rj) sign(Ti-Tj)``."""
    r = np.asarray(r, dtype=float)
    t = np.asarray(t, dtype=float)
    if r.shape != t.shape:
        raise LengthMismatch(f"rankings have lengths {r.size} and {t.size}")
    n = r.size
    if n < 2:
        raise ValueError("Kendall's tau needs at least 2 items")
    iu = np.triu_indices(n, k=1)
    sr = np.sign(r[:, None] - r[None, :])[iu]
    st = np.sign(t[:, None] - t[None, :])[iu]
    return float(2.0 * (sr * st).sum() / (n * (n - 1)))


# correlation experiment -----------------------------------------------------------

@dataclass
class CorrelationRecord:
    run: int
    p: float
    lam: float
    tau: float
    rankzzy: list[int] = field(default_factory=list)
    topsis: list[int] = field(default_factory=list)
    error: str | None = None


@dataclass
class CorrelationConfig:
    n_actions: int = 5
    n_values: int = 4
    p_set: tuple[float, ...] = DEFAULT_P_SET
    nu: float = 0.5
    epsilon: float = 1e-4
    rho: float = 0.1
    spread: float = 0.1
    noise: bool = True
    crisp_weights: tuple[float, ...] | None = None  # default: uniform


def correlation_run(run: int, seed: int, config: CorrelationConfig) -> list[CorrelationRecord]:
    rng = run_rng(seed, run)
    sub_seed = int(rng.integers(0, 2**63 - 1))
    prob = gen_random_problem(config.n_actions, config.n_values, sub_seed, config.rho, config.spread)
    z = build_z_lambda(prob.fuzzy, prob.objectives, prob.lam, rng, crisp=prob.crisp, noise=config.noise)
    z_crisp = np.array([centroid(t) for t in z])
    topsis = topsis_rank(np.vstack([prob.crisp, z_crisp]), prob.objectives)
    matrix = prob.matrix(z)
    weights = config.crisp_weights or (1.0 / config.n_values,) * config.n_values
    domain = dom.from_crisp(weights, [v.name for v in matrix.values])
    records = []
    for p in config.p_set:
        try:
            report = rank_matrix(matrix, domain, ScoreParams(p, config.nu, config.epsilon), seed=sub_seed)
            r = ordinal_positions([report.bundles[a].aggregated for a in matrix.actions])
            records.append(CorrelationRecord(run, p, prob.lam, kendall_tau(r, topsis), r.tolist(), topsis.tolist()))
        except (RankzzyError, FloatingPointError) as exc:
            records.append(CorrelationRecord(run, p, prob.lam, math.nan, [], topsis.tolist(), f"{type(exc).__name__}: {exc}"))
    return records


def correlation_experiment(
    n_runs: int = 50,
    p_set: Sequence[float] = DEFAULT_P_SET,
    seed: int = 0,
    config: CorrelationConfig | None = None,
    threads: int = 1,
) -> list[CorrelationRecord]:
    """Kendall's tau between the p-score ranking and TOPSIS over random 5x4 problems."""
    if n_runs < 1:
        raise ValueError("n_runs must be at least 1")
    config = config or CorrelationConfig()
    config = CorrelationConfig(**{**config.__dict__, "p_set": tuple(float(p) for p in p_set)})
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(lambda r: correlation_run(r, seed, config), range(n_runs)))
    else:
        chunks = [correlation_run(r, seed, config) for r in range(n_runs)]
    return [rec for chunk in chunks for rec in chunk]


def correlation_summary(records: Sequence[CorrelationRecord]) -> dict:
    out = {}
    ps = sorted({r.p for r in records})
    for p in ps:
        taus = np.array([r.tau for r in records if r.p == p and r.error is None])
        failed = [{"run": r.run, "error": r.error} for r in records if r.p == p and r.error is not None]
        key = str(format_p(p))
        if taus.size:
            q = np.quantile(taus, [0.0, 0.25, 0.5, 0.75, 1.0])
            out[key] = {
                "n": int(taus.size),
                "median": float(q[2]),
                "q25": float(q[1]),
                "q75": float(q[3]),
                "min": float(q[0]),
                "max": float(q[4]),
                "mean": float(taus.mean()),
                "failed": failed,
            }
        else:
            out[key] = {"n": 0, "failed": failed}
    return out


def correlation_csv(records: Sequence[CorrelationRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["run", "p", "lambda", "tau"])
    for r in records:
        w.writerow([r.run, format_p(r.p), repr(r.lam), repr(r.tau)])
    return buf.getvalue()


# timing benchmark ---------------------------------------------------------------

def default_schedule(steps: int = 7) -> list[tuple[int, int]]:
    """Sizes growing linearly from 2x2 to 50x40."""
    out = []
    for k in range(steps):
        t = k / (steps - 1)
        out.append((round(2 + 48 * t), round(2 + 38 * t)))
    return out


@dataclass
class TimingRecord:
    n_actions: int
    n_values: int
    run: int
    seconds: float


def timing_problem(n_actions: int, n_values: int, rng: np.random.Generator):
    """Random matrix plus a domain built around random crisp weights."""
    prob = gen_random_problem(n_actions, n_values, int(rng.integers(0, 2**63 - 1)))
    weights = rng.dirichlet(np.ones(n_values))
    weights = weights / weights.sum()
    matrix = prob.matrix()
    return matrix, dom.from_crisp(weights, [v.name for v in matrix.values])


def timing_benchmark(
    schedule: Sequence[tuple[int, int]] | None = None,
    n_runs: int = 5,
    seed: int = 0,
    p: float = 1.0,
) -> list[TimingRecord]:
    """Wall-clock time of a full ranking per problem size; runs sequentially."""
    if n_runs < 1:
        raise ValueError("n_runs must be at least 1")
    schedule = list(schedule or default_schedule())
    records = []
    for run in range(n_runs):
        rng = run_rng(seed, run)
        for n_actions, n_values in schedule:
            matrix, domain = timing_problem(n_actions, n_values, rng)
            t0 = time.perf_counter()
            rank_matrix(matrix, domain, ScoreParams(p=p), seed=seed)
            records.append(TimingRecord(n_actions, n_values, run, time.perf_counter() - t0))
    return records


def timing_summary(records: Sequence[TimingRecord]) -> list[dict]:
    sizes = []
    for r in records:
        if (r.n_actions, r.n_values) not in sizes:
            sizes.append((r.n_actions, r.n_values))
    out = []
    for na, nv in sizes:
        secs = np.array([r.seconds for r in records if (r.n_actions, r.n_values) == (na, nv)])
        out.append(
            {"n_actions": na, "n_values": nv, "mean": float(secs.mean()), "min": float(secs.min()), "max": float(secs.max())}
        )
    return out


def timing_csv(records: Sequence[TimingRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n_actions", "n_values", "run", "seconds"])
    for r in records:
        w.writerow([r.n_actions, r.n_values, r.run, repr(r.seconds)])
    return buf.getvalue()
