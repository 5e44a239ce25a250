"""Exception types raised by the langspin library."""


class LangspinError(Exception):
    """Base class for all langspin errors."""


class SelfLoop(LangspinError):
    """A language was connected to itself."""


class DuplicateEdge(LangspinError):
    """The same ordered (src, dst) pair appeared twice in an edge list."""


class InvalidWeight(LangspinError):
    """An interaction weight was negative, NaN or infinite."""


class ArityMismatch(LangspinError):
    """An operation received a parameter of the wrong arity."""


class InvalidSpin(LangspinError):
    """A spin value lies outside the parameter's allowed set."""


class InvalidEnergy(LangspinError):
    """An energy difference was NaN."""


class TooLarge(LangspinError):
    """State space exceeds the enumeration cap."""

    def __init__(self, state_count, cap):
        super().__init__(f"state space has {state_count} states, exceeds cap {cap}")
        self.state_count = state_count
        self.cap = cap


class FormatError(LangspinError):
    """A text input failed to parse; carries the 1-based line (and column)."""

    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + loc)
        self.line = line
        self.column = column


class UnknownValue(LangspinError):
    """A parameter value is unknown and the policy forbids imputation."""

    def __init__(self, language, parameter):
        super().__init__(f"unknown value for ({language}, {parameter}) with policy 'fail'")
        self.language = language
        self.parameter = parameter


class InsufficientSamples(LangspinError):
    """No trajectory samples remain after discarding burn-in."""
