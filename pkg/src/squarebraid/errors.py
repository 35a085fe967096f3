"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the range an operation supports."""


class ParseError(ValueError):
    """Malformed presentation or move-log text."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class UnsoundMove(RuntimeError):
    """A Tietze move failed its free-group soundness check."""

    def __init__(self, message: str, log=None):
        self.log = list(log or [])
        super().__init__(message)
