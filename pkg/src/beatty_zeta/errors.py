"""Exception types shared by all modules.

The CLI maps these onto exit codes (see :mod:`beatty_zeta.cli`).
"""


class BeattyZetaError(Exception):
    """Base class for library errors."""


class DomainError(BeattyZetaError, ValueError):
    """An argument lies outside the domain of the operation."""


class PoleError(DomainError):
    """Evaluation requested exactly at a pole."""


class RegionUnsupported(DomainError):
    """The continuation scheme does not cover the requested half-plane."""


class BudgetExceeded(BeattyZetaError):
    """A summation or quadrature would exceed its configured term budget."""


class PrecisionError(BeattyZetaError, ArithmeticError):
    """Working precision cannot certify the requested quantity."""


class AmbiguousDecomposition(PrecisionError):
    """More than one lattice point ``k*gamma + l`` lies within tolerance."""


class UnsupportedInput(DomainError):
    """The oracle has no convergent scheme for these parameters."""
