"""Exception hierarchy shared by every rankzzy module."""


class RankzzyError(ValueError):
    """Base class; carries an optional pipeline step tag."""

    step: str | None = None


# fuzzy core
class InvalidTrapezoid(RankzzyError):
    pass


class NonPositiveOperand(RankzzyError):
    pass


class EmptySet(RankzzyError):
    pass


# matrix builder
class EmptySamples(RankzzyError):
    pass


class UnknownLabel(RankzzyError):
    pass


class ProportionsNotNormalized(RankzzyError):
    pass


class MissingAssessment(RankzzyError):
    def __init__(self, action, value):
        super().__init__(f"no assessment for action {action!r} on value {value!r}")
        self.action = action
        self.value = value


class KindMismatch(RankzzyError):
    pass


class InvalidScale(RankzzyError):
    pass


# weight domain
class BoundsOutOfOrder(RankzzyError):
    def __init__(self, value, detail=""):
        super().__init__(f"bounds out of order for value {value!r}{': ' + detail if detail else ''}")
        self.value = value


class InfeasibleCoreSum(RankzzyError):
    def __init__(self, sum_lower_b, sum_upper_c):
        super().__init__(
            f"infeasible core-sum window: sum of lower-bound cores (b) = {sum_lower_b:.6g} "
            f"must be <= 1 and sum of upper-bound cores (c) = {sum_upper_c:.6g} must be >= 1"
        )
        self.sum_lower_b = sum_lower_b
        self.sum_upper_c = sum_upper_c


class DimensionMismatch(RankzzyError):
    pass


class NotNormalized(RankzzyError):
    pass


# score / optimizer
class NonPositiveEntry(RankzzyError):
    pass


class EmptyRow(RankzzyError):
    pass


class ScoreOverflow(RankzzyError):
    pass


class InfeasibleDomain(RankzzyError):
    pass


class NonPositiveRow(NonPositiveEntry):
    pass


class NoConvergence(RankzzyError):
    pass


class GridTooLarge(RankzzyError):
    pass


# eval harness
class NonPositiveValue(RankzzyError):
    pass


class LengthMismatch(RankzzyError):
    pass


# input files
class ProblemFormatError(RankzzyError):
    pass
