from utils.errors import ToolkitError


class LemmaError(ToolkitError):
    module = "lemmalab"


class PreconditionFailed(LemmaError):
    """A lemma's hypothesis fails on the checked prefix."""
