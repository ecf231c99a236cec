"""Exception hierarchy for the library."""

from __future__ import annotations


class ChoquetError(Exception):
    """Base class for all library-specific errors."""


class SpaceMismatchError(ChoquetError):
    """Operands are defined on different state spaces."""


class NotConvexError(ChoquetError):
    """Operation requires a convex (supermodular) capacity."""

    def __init__(self, message: str, pair: tuple[int, int] | None = None):
        super().__init__(message)
        self.pair = pair


class NullEventError(ChoquetError):
    """Conditioning event carries no capacity mass."""


class ZeroConditioningMassError(ChoquetError):
    """A vertex assigns (near-)zero probability to the conditioning event."""


class MassSumError(ChoquetError):
    """Point masses do not form a unit-total assignment."""


class AlphaOutOfRangeError(ChoquetError, ValueError):
    """Mixing weight must lie in [0, 1]."""


class NotRationalizableError(ChoquetError):
    """No single mixing weight reproduces the given conditional values."""


class GridViolationError(ChoquetError, ValueError):
    """A reference level sits below the act's maximum on the conditioning event."""


class NoMatchingPairError(ChoquetError):
    """The cross-event side condition has no solution in the admissible range."""


class InputError(ChoquetError, ValueError):
    """Malformed user input (files, event strings, CLI parameters)."""
