from typing import Optional

from utils.errors import ToolkitError


class CliError(ToolkitError):
    module = "cli"


class ParseError(CliError):
    """Spec file is not valid JSON."""

    def __init__(self, message: str, line: int, column: int, *, operation: Optional[str] = "load_spec"):
        super().__init__(message, operation=operation, coordinates=f"line {line}, column {column}")
        self.line = line
        self.column = column


class SchemaError(CliError):
    """A field is missing, has the wrong type or an invalid value."""

    def __init__(self, message: str, path: str, *, operation: Optional[str] = "load_spec"):
        super().__init__(message, operation=operation, coordinates=path)
        self.path = path


class ExpressionError(CliError):
    """Grammar violation in a generator expression; `column` is 1-based."""

    def __init__(self, message: str, column: int, text: str = "", *, operation: Optional[str] = "expression"):
        coordinates = f"column {column} of '{text}'" if text else f"column {column}"
        super().__init__(message, operation=operation, coordinates=coordinates)
        self.column = column
        self.text = text
