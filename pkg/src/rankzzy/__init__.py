"""Ranking alternatives under bounded fuzzy weights with a generalized p-mean score."""

from .domain import WeightDomain, WeightScheme, from_crisp, from_fuzzy, member_of, repair, validate
from .errors import RankzzyError
from .fuzzy import Trapezoid
from .matrix import (
    FuzzyAssessment,
    FuzzyDecisionMatrix,
    Kind,
    Objective,
    QualitativeAssessment,
    QualitativeScale,
    QuantitativeAssessment,
    ValueSpec,
    build_matrix,
    normalize,
    transform_qualitative,
    transform_quantitative,
)
from .optimizer import OptimizationResult, OptimizationSpec, brute_force_oracle, optimize
from .pipeline import DecisionProblem, RankingReport, SensitivityGrid, rank, rank_matrix, sensitivity_grid
from .problem_io import load_problem, parse_problem, save_problem
from .score import ScoreBundle, ScoreParams, aggregate_nu, defuzzify, fuzzy_p_score

__version__ = "0.1.0"

__all__ = [
    "DecisionProblem",
    "FuzzyAssessment",
    "FuzzyDecisionMatrix",
    "Kind",
    "Objective",
    "OptimizationResult",
    "OptimizationSpec",
    "QualitativeAssessment",
    "QualitativeScale",
    "QuantitativeAssessment",
    "RankingReport",
    "RankzzyError",
    "ScoreBundle",
    "ScoreParams",
    "SensitivityGrid",
    "Trapezoid",
    "ValueSpec",
    "WeightDomain",
    "WeightScheme",
    "aggregate_nu",
    "brute_force_oracle",
    "build_matrix",
    "defuzzify",
    "from_crisp",
    "from_fuzzy",
    "fuzzy_p_score",
    "load_problem",
    "member_of",
    "normalize",
    "optimize",
    "parse_problem",
    "rank",
    "rank_matrix",
    "repair",
    "save_problem",
    "sensitivity_grid",
    "transform_qualitative",
    "transform_quantitative",
    "validate",
]
