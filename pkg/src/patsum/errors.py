"""Exception types shared across the package.

Each class maps onto one CLI exit code.
"""


class PatsumError(Exception):
    exit_code = 1


class ParseError(PatsumError, ValueError):
    """Malformed textual input."""

    exit_code = 2

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class PreconditionError(PatsumError, ValueError):
    """An operation was called outside its domain."""

    exit_code = 3


class IncompatibleError(PatsumError, ValueError):
    """Inputs that cannot be reconciled with each other."""

    exit_code = 4
