"""Exception types shared across the package."""


class BBOBMixError(Exception):
    """Base class for all package errors."""


class ParameterError(BBOBMixError, ValueError):
    """An argument is out of range or malformed; the message names the field."""


class EvaluationError(BBOBMixError, ArithmeticError):
    """An objective evaluation produced a non-finite value."""


class CapabilityError(BBOBMixError):
    """A request exceeds what the implementation supports (e.g. Sobol' dimension)."""


class InputFormatError(BBOBMixError, ValueError):
    """An input file could not be parsed; the message carries location info."""
