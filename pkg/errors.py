"""
Exception types shared by the symflex modules.
"""

from typing import Any, Dict, Optional


class SymflexError(ValueError):
    """Base class for every domain error raised by symflex."""


class GraphFormatError(SymflexError):
    """A graph, colouring or motion document could not be parsed."""


class InvalidGraphError(SymflexError):
    """The graph is not a valid Cn-symmetric graph; carries the full report."""

    def __init__(self, report: Any):
        self.report = report
        super().__init__(f"invalid Cn-symmetric graph: {report.summary()}")


class ColouringError(SymflexError):
    """A colouring is not a total red/blue assignment on exactly E(G)."""


class SearchBoundExceeded(SymflexError):
    """An enumeration was refused because its search space is over the bound."""

    def __init__(self, what: str, actual: int, bound: int):
        self.what = what
        self.actual = actual
        self.bound = bound
        super().__init__(f"{what} = {actual} exceeds the search bound {bound}")


class PreconditionError(SymflexError):
    """An operation was called on input violating its precondition."""

    def __init__(self, reason: str, witness: Optional[Dict[str, Any]] = None):
        self.reason = reason
        self.witness = witness
        super().__init__(reason if witness is None else f"{reason}: {witness}")


class BasePointError(SymflexError):
    """No generic base points were found within the retry budget."""
