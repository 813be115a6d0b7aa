class RealSphError(Exception):
    """Base class for all errors raised by the package."""


class SpecError(RealSphError):
    """Malformed or unsupported input (CLI exit code 2)."""


class InconsistencyError(RealSphError):
    """Input data violates a structural constraint (CLI exit code 3)."""
