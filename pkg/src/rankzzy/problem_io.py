"""Reading and writing decision-problem files (JSON)."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path

from jsonschema import Draft202012Validator

from .domain import WeightDomain
from .errors import InvalidScale, InvalidTrapezoid, ProblemFormatError
from .fuzzy import Trapezoid
from .matrix import (
    FuzzyAssessment,
    Kind,
    QualitativeAssessment,
    QualitativeScale,
    QuantitativeAssessment,
    ValueSpec,
)
from .pipeline import DecisionProblem
from .score import ScoreParams, format_p


@lru_cache(maxsize=1)
def problem_schema() -> dict:
    text = resources.files("rankzzy").joinpath("problem.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def _trap(arr, where: str) -> Trapezoid:
    try:
        return Trapezoid.from_array(arr)
    except InvalidTrapezoid as exc:
        raise ProblemFormatError(f"{where}: {exc}") from None


def parse_problem(data: dict) -> DecisionProblem:
    """Build a problem from decoded JSON. Raises :class:`ProblemFormatError`.

    Only the file structure is checked here; domain feasibility is left to
    :func:`rankzzy.domain.validate`.
    """
    errors = sorted(Draft202012Validator(problem_schema()).iter_errors(data), key=lambda e: list(e.path))
    if errors:
        msgs = [f"{'/'.join(str(p) for p in e.path) or '<root>'}: {e.message}" for e in errors[:10]]
        raise ProblemFormatError("invalid problem file:\n  " + "\n  ".join(msgs))

    actions = list(data["actions"])
    values = []
    try:
        for v in data["values"]:
            scale = None
            if "scale" in v:
                scale = QualitativeScale(
                    tuple((c["label"], _trap(c["trapezoid"], f"scale of {v['name']}")) for c in v["scale"])
                )
            values.append(ValueSpec(v["name"], v["kind"], v["objective"], v.get("unit"), scale))
    except InvalidScale as exc:
        raise ProblemFormatError(str(exc)) from None
    names = [v.name for v in values]
    if len(set(names)) != len(names):
        raise ProblemFormatError(f"duplicate value names: {names}")

    keys = {f"{a}/{v.name}": (a, v) for a in actions for v in values}
    assessments = {}
    for key, entry in data["assessments"].items():
        if key not in keys:
            raise ProblemFormatError(f"assessment key {key!r} does not match any 'action/value' pair")
        action, spec = keys[key]
        if "trapezoid" in entry:
            assessments[(action, spec.name)] = FuzzyAssessment(_trap(entry["trapezoid"], key))
            continue
        qualitative = "samples" not in entry
        if qualitative != (spec.kind is Kind.QUALITATIVE):
            raise ProblemFormatError(f"{key}: assessment kind does not match value kind {spec.kind.value!r}")
        if "samples" in entry:
            assessments[(action, spec.name)] = QuantitativeAssessment(tuple(entry["samples"]))
        elif "votes" in entry:
            assessments[(action, spec.name)] = QualitativeAssessment.from_votes(entry["votes"])
        else:
            assessments[(action, spec.name)] = QualitativeAssessment(dict(entry["proportions"]))
    missing = [k for k in keys if (keys[k][0], keys[k][1].name) not in assessments]
    if missing:
        raise ProblemFormatError(f"missing assessments: {missing}")

    bounds = data["bounds"]
    if sorted(bounds) != sorted(names):
        raise ProblemFormatError(f"bounds cover {sorted(bounds)}, values are {sorted(names)}")
    domain = WeightDomain(
        tuple(names),
        [_trap(bounds[n]["lower"], f"lower bound of {n}") for n in names],
        [_trap(bounds[n]["upper"], f"upper bound of {n}") for n in names],
    )
    raw = dict(data.get("params", {}))
    seed = int(raw.pop("seed", 0))
    try:
        params = ScoreParams(**raw)
    except ValueError as exc:
        raise ProblemFormatError(f"params: {exc}") from None
    return DecisionProblem(tuple(actions), tuple(values), assessments, domain, params, seed)


def load_problem(path) -> DecisionProblem:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"{path}: not valid JSON ({exc})") from None
    return parse_problem(data)


def problem_to_dict(problem: DecisionProblem) -> dict:
    """Inverse of :func:`parse_problem` (votes are written back as proportions)."""
    values = []
    for v in problem.values:
        item = {"name": v.name, "kind": v.kind.value, "objective": v.objective.value}
        if v.unit:
            item["unit"] = v.unit
        if v.scale is not None:
            item["scale"] = [{"label": lbl, "trapezoid": t.to_list()} for lbl, t in v.scale.categories]
        values.append(item)
    assessments = {}
    for (a, name), entry in problem.assessments.items():
        if isinstance(entry, FuzzyAssessment):
            assessments[f"{a}/{name}"] = {"trapezoid": entry.trapezoid.to_list()}
        elif isinstance(entry, QuantitativeAssessment):
            assessments[f"{a}/{name}"] = {"samples": list(entry.samples)}
        else:
            assessments[f"{a}/{name}"] = {"proportions": dict(entry.proportions)}
    d = problem.domain
    return {
        "actions": list(problem.actions),
        "values": values,
        "assessments": assessments,
        "bounds": {n: {"lower": lo.to_list(), "upper": up.to_list()} for n, lo, up in zip(d.names, d.lower, d.upper)},
        "params": {
            "p": format_p(problem.params.p),
            "nu": problem.params.nu,
            "epsilon": problem.params.epsilon,
            "seed": problem.seed,
        },
    }


def save_problem(problem: DecisionProblem, path) -> None:
    Path(path).write_text(json.dumps(problem_to_dict(problem), indent=2) + "\n", encoding="utf-8")
