"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: InputError -> 2, BudgetError -> 3,
anything else -> 4.
"""


class RepcountError(Exception):
    """Base class for all errors raised by this package."""


class InputError(RepcountError):
    """Malformed or inconsistent user input (bad form text, bad psi, ...)."""


class FormParseError(InputError):
    """Syntax or semantic error in the form grammar, with a position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class BudgetError(RepcountError):
    """A computation would exceed its configured size/evaluation budget."""
