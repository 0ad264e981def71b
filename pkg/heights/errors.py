from utils.errors import ToolkitError


class HeightsError(ToolkitError):
    module = "heights"


class ConjugatePair(HeightsError):
    """The two numbers share a minimal polynomial; the gap lemma does not apply."""
