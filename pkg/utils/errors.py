"""Shared error base for every prodcert module."""

from typing import Any, Optional


class ToolkitError(Exception):
    """Domain error carrying where it happened, for CLI rendering."""

    module = "prodcert"

    def __init__(self, message: str, *, operation: Optional[str] = None, coordinates: Any = None):
        super().__init__(message)
        self.message = message
        self.operation = operation
        self.coordinates = coordinates

    def render(self) -> str:
        where = self.module
        if self.operation:
            where = f"{where}.{self.operation}"
        if self.coordinates is not None:
            where = f"{where} at {self.coordinates}"
        return f"error: {where}: {self.message}"
