"""Exception hierarchy for lexspec."""


class LexSpecError(Exception):
    """Base class for all errors raised by this package."""


class GraphParseError(LexSpecError, ValueError):
    """Malformed edge-list or graph6 input."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SizeCapError(LexSpecError):
    """A computation would exceed a configured size cap."""


class OracleTooLarge(SizeCapError):
    """The explicit product construction would exceed the oracle cap."""


class NumericalError(LexSpecError, ArithmeticError):
    """An eigensolver failed or produced values the theory rules out."""


class TheoryViolation(LexSpecError, AssertionError):
    """An identity that must hold exactly did not (indicates a bug)."""
