"""Exception types shared across the package."""


class QsearchError(Exception):
    """Base class for package-specific failures."""


class ConfigError(QsearchError, ValueError):
    """Invalid run configuration (CLI exit code 2)."""


class DimensionMismatchError(QsearchError, ValueError):
    """Operands refer to state spaces of different dimension."""


class StepCapExceededError(QsearchError):
    """An integration would need more steps than the policy allows."""


class NormDriftError(QsearchError):
    """Norm conservation broke down; the integration is unreliable."""


class DegeneratePoleError(QsearchError):
    """Denominator roots too close for a stable partial-fraction split.

    Callers should fall back to time-domain integration.
    """


class PropertyViolationError(QsearchError):
    """A checked invariant failed at runtime (CLI exit code 3)."""
