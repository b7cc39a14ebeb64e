"""Exception types raised across the package."""

from __future__ import annotations


class FPDMSError(ValueError):
    """Base class for every error raised by this package."""


class ParseError(FPDMSError):
    """Input text is not valid JSON in one of the accepted schemas."""


class MetricError(FPDMSError):
    """The matrix is not the distance matrix of a finite metric space.

    ``violations`` lists every violated axiom as a human readable string.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations) or "invalid metric")


class NotPositiveDefiniteError(FPDMSError):
    def __init__(self, min_eigenvalue, message=None):
        self.min_eigenvalue = float(min_eigenvalue)
        super().__init__(message or f"zeta matrix is not positive definite (smallest eigenvalue {min_eigenvalue:.3e})")


class AffinelyDependentError(FPDMSError):
    """Points are not in general position at the requested rank tolerance."""


class DomainError(FPDMSError):
    """An argument lies outside the domain of a map (e.g. pair too far apart)."""


class TriSimilarityError(FPDMSError):
    def __init__(self, margin, triple, message=None):
        self.margin = float(margin)
        self.triple = triple
        super().__init__(message or f"tri-similarity violated at {triple} (margin {margin:.3e})")


class RadiusError(FPDMSError):
    """Circumradius is not strictly below one."""


class BudgetExceededError(FPDMSError):
    """Exact Gromov-Hausdorff enumeration would exceed the size cap."""


class NotClusteredError(FPDMSError):
    def __init__(self, epsilon, witness):
        self.epsilon = float(epsilon)
        self.witness = witness
        i, j, k = witness
        super().__init__(
            f"relation d < {epsilon:g} is not transitive: {i}~{j} and {j}~{k} but not {i}~{k}"
        )


class ConstraintError(FPDMSError):
    """Family parameters violate the validity constraints of that family."""


class ExtrapolationError(FPDMSError):
    """Richardson extrapolation did not settle within tolerance."""


class FitError(FPDMSError):
    """Polynomial fit of a small-t expansion left a residual above tolerance."""


class HypothesisViolation(FPDMSError):
    """A named hypothesis of a geometric construction does not hold."""

    def __init__(self, names):
        self.names = list(names)
        super().__init__("hypothesis violated: " + ", ".join(self.names))


class UnreachableTypeError(FPDMSError):
    """Target cluster type cannot be reached from the seed by the available moves."""
