"""Exception hierarchy; each class carries the CLI exit code it maps to."""


class FiberconeError(Exception):
    exit_code = 4


class ParseError(FiberconeError):
    exit_code = 1

    def __init__(self, message, line=None, column=None, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        where = f"line {line}, column {column}: " if line is not None else ""
        exp = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{where}{message}{exp}")


class HypothesisError(FiberconeError):
    """An input violates a mathematical precondition (non-homogeneous,
    not m-primary, I not inside K, zerodivisor, ...)."""

    exit_code = 2


class ResourceCapError(FiberconeError):
    exit_code = 3


class DefectError(FiberconeError):
    """A proved identity or inequality was observed false."""

    exit_code = 4
