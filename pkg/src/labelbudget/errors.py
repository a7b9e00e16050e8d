"""Semantic exception hierarchy.

Every public operation raises one of these instead of bare ValueError, so
callers (CLI exit codes, HTTP status mapping) can route failures without
string matching.
"""


class LabelBudgetError(Exception):
    """Base error for this package."""


class ValidationError(LabelBudgetError, ValueError):
    """An input violates a documented precondition or parameter range."""


class ResourceLimitError(LabelBudgetError):
    """A computation would exceed a configured size or budget cap."""


class NumericalError(LabelBudgetError, ArithmeticError):
    """A numeric routine failed to converge or lost its bracket."""
