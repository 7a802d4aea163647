"""Exception types shared across the package."""

from __future__ import annotations


class NetcodeError(Exception):
    """Base class for all package errors."""


class NotInvertible(NetcodeError, ArithmeticError):
    pass


class NoSolution(NetcodeError, ArithmeticError):
    pass


class ValidationError(NetcodeError, ValueError):
    """A network violates one of its structural invariants.

    ``where`` names the offending node, edge or demand.
    """

    def __init__(self, message: str, where: str | None = None) -> None:
        super().__init__(message)
        self.where = where


class CycleDetected(ValidationError):
    pass


class SourceHasInEdge(ValidationError):
    pass


class TerminalHasOutEdge(ValidationError):
    pass


class UnknownDemand(ValidationError):
    pass


class ParseError(NetcodeError, ValueError):
    def __init__(self, message: str, location: str | None = None) -> None:
        if location:
            message = f"{location}: {message}"
        super().__init__(message)
        self.location = location


class CharacteristicMismatch(NetcodeError, ValueError):
    pass


class BudgetExceeded(NetcodeError):
    def __init__(self, message: str, required: int = 0, budget: int = 0) -> None:
        super().__init__(message)
        self.required = required
        self.budget = budget
