from utils.errors import ToolkitError


class CriteriaError(ToolkitError):
    module = "criteria"


class MissingDegrees(CriteriaError):
    """Tower degrees exceed the cap and none were declared."""


class NonIntegerAlpha(CriteriaError):
    """A generated alpha is not an algebraic integer."""


class ModeParamsMissing(CriteriaError):
    pass


class MajorantUnverified(CriteriaError):
    """The declared tail majorant fails on a checked index."""


class GuardFailed(CriteriaError):
    """log log |alpha| is undefined or nonpositive where a bound needs it."""


class ExpressionTooLarge(CriteriaError):
    """A value is too large for the requested exact or Ball evaluation."""
