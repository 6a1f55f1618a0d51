"""Exception types shared across the toolkit.

Precision failures form their own branch so callers (and the CLI, which maps
them to a distinct exit code) can tell "needs more digits" apart from "wrong".
"""


class RecbasesError(Exception):
    """Base class for all toolkit-specific errors."""


class PrecisionExhausted(RecbasesError):
    """A value could not be refined to the precision the operation needs."""


class Undecidable(PrecisionExhausted):
    """A comparison hit the stated precision of a decimal literal undecided.

    Experiments must abort on this rather than guess.
    """

    def __init__(self, max_precision: int, message: str = ""):
        self.max_precision = max_precision
        super().__init__(message or f"undecidable at stated precision {max_precision} bits")


class RationalTerminated(RecbasesError):
    """A rational's continued fraction ended before the requested index."""

    def __init__(self, length: int):
        self.length = length
        super().__init__(f"expansion terminates after {length} digits")


class InvalidParity(RecbasesError):
    """An integer argument has the wrong parity for the construction."""


class DegenerateAlpha(RecbasesError):
    """The given number is rational where an irrational is required."""


class UnboundedDigits(RecbasesError):
    """A continued fraction digit exceeded the stated bound."""

    def __init__(self, index: int, digit: int, bound: int):
        self.index = index
        self.digit = digit
        self.bound = bound
        super().__init__(f"digit a_{index} = {digit} exceeds bound {bound}")


class PatternNotFound(RecbasesError):
    """The requested digit pattern did not occur within the scan horizon."""


class ScheduleInfeasible(RecbasesError):
    """A digit construction step could not satisfy its cap."""

    def __init__(self, index: int, message: str = ""):
        self.index = index
        super().__init__(message or f"no admissible digit at index {index}")


class BranchExhausted(RecbasesError):
    """A nested-interval level offered fewer than two children."""

    def __init__(self, level: int, message: str = ""):
        self.level = level
        super().__init__(message or f"level {level} offers fewer than 2 children")


class CapExceeded(RecbasesError):
    """A brute-force bound was exceeded; only the algebraic check ran."""
