"""Exception types shared across the package."""


class GapkitError(Exception):
    """Base class for all package-specific failures."""


class DimensionMismatch(GapkitError, ValueError):
    """Operands live in different ambient dimensions."""


class ParameterError(GapkitError, ValueError):
    """A parameter is outside its legal range or combination."""


class ParseError(GapkitError, ValueError):
    """An instance file is malformed or violates a declared invariant."""


class GenerationError(GapkitError, RuntimeError):
    """A generator could not deliver the requested certified label."""


class BudgetExceeded(GapkitError, RuntimeError):
    """An exhaustive enumeration would exceed its configured cap."""


class InfeasibleParameters(GapkitError, ValueError):
    """No integer batch size exists for the requested cost tradeoff."""


class MalformedMetric(GapkitError, ValueError):
    """A distance table is not a metric (symmetry, diagonal, or sign)."""
