"""Exception hierarchy shared by the design pipeline."""


class DesignError(Exception):
    """Base class for every error raised while building or solving a design."""


class SpecError(DesignError, ValueError):
    """A design specification is malformed or self-contradictory."""


class FeasibilityError(DesignError):
    """The array has too few sensors for the requested constraints."""


class RankError(DesignError):
    """The constraint system is rank deficient or too ill-conditioned to solve."""


class ZeroFilterError(DesignError, ValueError):
    """A metric was requested for an all-zero filter."""


class NonPositiveDenominator(DesignError, ArithmeticError):
    """A quadratic form that must be positive came out non-positive."""
