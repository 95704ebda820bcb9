"""Shared exception types."""


class DelplanError(Exception):
    """Base class for all package errors."""


class FormulaError(DelplanError):
    """Syntax or validation error in a formula string.

    Carries the character position of the offending token when known.
    """

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class ModelError(DelplanError):
    """Ill-formed epistemic or event model (dangling ids, bad point, ...)."""


class ScenarioError(DelplanError):
    """Scenario file fails schema validation or cross-reference checks."""


class NonPropositionalError(ScenarioError):
    """Event model has a non-propositional precondition or postcondition."""


class BudgetExceeded(DelplanError):
    """A state, world or depth budget was exceeded.

    `where` names the operation or level that blew up, so callers can
    report which stage of a nested construction failed.
    """

    def __init__(self, message: str, where: str | None = None):
        self.where = where
        super().__init__(message if where is None else f"{message} [{where}]")
