"""Exception hierarchy shared by every module."""

from __future__ import annotations


class ResforgeError(Exception):
    """Base class for all library errors."""


class DomainError(ResforgeError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class NumericOverflow(ResforgeError, ArithmeticError):
    """An exponential argument is too large to be represented safely."""


class ZeroDivisor(ResforgeError, ZeroDivisionError):
    """Series division by a divisor whose leading coefficient vanishes."""


class UnsupportedPole(ResforgeError):
    """No expansion is available for the requested function at the requested point."""


class PoleOrderMismatch(ResforgeError):
    """The pole order inferred from a Laurent expansion exceeds the catalogued order."""


class QuadratureFailure(ResforgeError):
    """Contour quadrature did not reach the requested accuracy."""


class StructureRecoveryFailure(ResforgeError):
    """Numeric residues could not be matched against the series-term grammar."""


class UnsupportedTerm(ResforgeError):
    """A series term falls outside the grammar an operation supports."""


class DivergentTerm(ResforgeError):
    """A series term does not converge for the given parameters."""

    def __init__(self, message: str, delta=None):
        super().__init__(message)
        self.delta = delta


class TargetUnreachable(ResforgeError):
    """A certified sum could not meet its error target within the term budget."""

    def __init__(self, message: str, term=None):
        super().__init__(message)
        self.term = term


class NoRationalFound(ResforgeError):
    """Rational reconstruction found no convergent inside the acceptance gap."""


class ParseError(ResforgeError, ValueError):
    """Malformed input text for the expression language."""

    def __init__(self, message: str, position: int, expected: tuple[str, ...] = ()):
        detail = f"{message} at position {position}"
        if expected:
            detail += f" (expected one of: {', '.join(expected)})"
        super().__init__(detail)
        self.position = position
        self.expected = expected


class UnsupportedCombination(ResforgeError, ValueError):
    """Well-formed input that does not name a catalogued function or term shape."""
