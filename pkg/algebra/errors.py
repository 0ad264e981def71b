from utils.errors import ToolkitError


class AlgebraError(ToolkitError):
    module = "algebra"


class ZeroPolynomial(AlgebraError):
    """The polynomial has no roots to select from."""


class Reducible(AlgebraError):
    """The proposed minimal polynomial factors over the integers."""


class AmbiguousSelector(AlgebraError):
    """The root region holds zero or several roots."""


class PrecisionBudgetExceeded(AlgebraError):
    """Refinement hit the precision cap."""


class ZeroReciprocal(AlgebraError):
    pass


class FactorSelectionAmbiguous(AlgebraError):
    """Several resultant factors stay compatible at the precision cap."""


class DegreeCapExceeded(AlgebraError):
    pass
