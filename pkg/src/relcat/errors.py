"""Exception types shared across the toolkit."""


class RelcatError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(RelcatError):
    """Malformed or inconsistent input data (bad simplices, missing edge

    values, subcomplex violations, degree mismatches)."""


class ComputationError(RelcatError):
    """A computation could not be carried out as requested (mode caps,

    degenerate configurations, numerical failures)."""


class InconclusiveError(ComputationError):
    """A finite computation cannot certify either answer.

    Carries a human-readable hint (typically: enlarge the window box,
    refine the sampling, or raise the budget)."""
