"""Exception hierarchy shared by every module."""


class CayleyTMError(Exception):
    """Base class for all errors raised by this package."""


class BudgetExhausted(CayleyTMError):
    """A semi-decidable backend ran out of rewriting steps."""


class NotDecidable(CayleyTMError):
    """The operation needs a backend with a solvable word problem."""


class InvalidAlphabet(CayleyTMError):
    """The generating set is malformed or not closed under inverses."""


class FiniteGroupError(CayleyTMError):
    """A finite group was offered where a tape graph (infinite) is required."""


class MachineError(CayleyTMError):
    """A machine description violates its load-time invariants."""


class PointerClobber(CayleyTMError):
    """The single-pointer word-problem walk revisited a cell holding a live pointer."""


class NoPath(CayleyTMError):
    """No super-reduced word of the requested length exists."""


class LowDegreeResidue(CayleyTMError):
    """An expanded relator kept a non-zero component at or below the degree floor."""


class DimensionOverflow(CayleyTMError):
    """A degree-wise monomial basis exceeded the configured size cap."""


class EscapeError(CayleyTMError):
    """The element or its expression cannot support the escape construction."""
