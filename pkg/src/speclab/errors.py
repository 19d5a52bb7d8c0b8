"""Exception types shared across the package."""

from __future__ import annotations

__all__ = [
    "SpeclabError",
    "InvalidParametersError",
    "SingularFormulaError",
    "BranchCutError",
    "SizeExceededError",
    "NonConvergenceError",
    "NoDominanceSplitError",
    "Beta0ConstraintError",
    "NoSubcriticalBranchError",
]


class SpeclabError(Exception):
    """Base class for all package-specific failures."""


class InvalidParametersError(SpeclabError, ValueError):
    """Inputs outside the domain of the requested operation."""


class SingularFormulaError(SpeclabError, ValueError):
    """A closed-form expression is singular at the requested point."""


class BranchCutError(SpeclabError, ValueError):
    """Spectral parameter sits on a square-root branch cut."""


class SizeExceededError(SpeclabError, ValueError):
    """Matrix too large for a dense reference computation."""


class NonConvergenceError(SpeclabError, RuntimeError):
    """An adaptive truncation hit its hard size cap before stabilising."""


class NoDominanceSplitError(SpeclabError, ValueError):
    """Backward recurrence requested where no dominant/minimal split exists."""


class Beta0ConstraintError(SpeclabError, ValueError):
    """Trial function violates the boundary constraint of the beta = 0 form."""


class NoSubcriticalBranchError(SpeclabError, ValueError):
    """No coupling branch supports discrete spectrum below the threshold."""
