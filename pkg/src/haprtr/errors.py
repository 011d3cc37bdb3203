"""Exception types shared across the package."""


class HaprtrError(Exception):
    """Base class for package-specific errors."""


class DimensionMismatchError(HaprtrError, ValueError):
    """Operands have incompatible shapes or lengths."""


class BasePointMismatchError(HaprtrError, ValueError):
    """Tangent vectors rooted at different sphere points were combined."""


class AntipodalError(HaprtrError, ValueError):
    """Parallel transport requested between numerically antipodal points."""


class ParameterError(HaprtrError, ValueError):
    """A configuration or generation parameter is outside its admissible range."""


class DegenerateInputError(HaprtrError, ValueError):
    """Input carries no usable observations or data rows."""


class CsvSchemaError(HaprtrError, ValueError):
    """A results CSV does not match the expected column schema."""


class NumericFailureError(HaprtrError, RuntimeError):
    """A solver oracle produced NaN or Inf.

    ``iteration`` holds the outer iteration index at which the failure was
    detected, or None when the failure happened outside the main loop.
    """

    def __init__(self, message, iteration=None):
        if iteration is not None:
            message = f"iteration {iteration}: {message}"
        super().__init__(message)
        self.iteration = iteration


class InstanceFormatError(HaprtrError, ValueError):
    """An instance file violates the HAP1 format.

    ``line`` holds the 1-based line number of the offending line.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
