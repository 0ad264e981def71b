from utils.errors import ToolkitError


class EvaluatorError(ToolkitError):
    module = "evaluator"


class TermMagnitude(EvaluatorError):
    """|b_n/alpha_n| < 1 could not be certified."""


class FactorNearZero(EvaluatorError):
    """An inner factor's Ball contains zero."""


class BudgetExhausted(EvaluatorError):
    """Target radius not reached within the term and precision budget; carries the best enclosure."""

    def __init__(self, message: str, enclosure=None, **kwargs):
        super().__init__(message, **kwargs)
        self.enclosure = enclosure
