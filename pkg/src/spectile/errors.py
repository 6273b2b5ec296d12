"""Exception types and the explicit Undecided search outcome."""

from __future__ import annotations


class SpectileError(Exception):
    """Base class for all errors raised by this package."""


class InvalidModulus(SpectileError):
    """A cyclic factor modulus is out of range."""


class Overflow(SpectileError):
    """Group order or exponent does not fit in 64-bit arithmetic."""


class GroupMismatch(SpectileError):
    """An element or multiset does not belong to the expected group."""


class NotADivisor(SpectileError):
    """A size argument does not divide the group order."""


class InvalidArgument(SpectileError):
    """An argument violates a documented precondition."""


class EmptyInput(SpectileError):
    """A nonempty set was required."""


class NotTwoDistinctPrimes(SpectileError):
    """The group is not Z_p x Z_q with distinct primes p, q."""


class NotPQShape(SpectileError):
    """The group is not Z_p^2 x Z_q^2 with distinct primes p, q."""


class WrongShape(SpectileError):
    """The group does not have the factor shape an operation requires."""


class InvalidDirection(SpectileError):
    """A direction argument is zero or lies in the wrong factor."""


class TooSmall(SpectileError):
    """The input set is below the minimum size an operation requires."""


class NotATilingPair(SpectileError):
    """The given (set, complement) pair does not tile the group."""


class NotASpectralPair(SpectileError):
    """The given (set, spectrum) pair is not a spectral pair."""


class TheoremViolation(SpectileError):
    """A certified-impossible situation occurred; report the input."""


class BudgetExhausted(SpectileError):
    """A search ran out of node budget before reaching a verdict."""


class ParseError(SpectileError):
    """A document could not be parsed."""


class InvalidElement(ParseError):
    """A parsed element tuple is not valid for the declared group."""


class Undecided:
    """Singleton outcome for searches that ran out of budget.

    Distinct from both a witness and a proven-absent None; callers must
    treat it explicitly and never coerce it to a boolean verdict.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNDECIDED"

    def __bool__(self) -> bool:
        raise TypeError("Undecided outcome has no boolean value")


UNDECIDED = Undecided()
