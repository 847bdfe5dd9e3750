"""Exception types shared across the package.

Each error names the condition it reports; callers map them to exit codes
in the command-line layer (validation 2, convergence 3, budget 4).
"""


class DickelabError(Exception):
    """Base class for all package errors."""


class ValidationError(DickelabError):
    """Configuration or argument failed validation."""


class InstabilityError(DickelabError):
    """A quadratic form is not positive definite; no stable normal modes."""


class ConvergenceError(DickelabError):
    """A numerical routine did not converge to the requested tolerance."""


class DomainError(DickelabError):
    """The computational domain is too small for the requested state."""


class PhaseError(DickelabError):
    """A phase-branch evaluator was called outside its domain."""


class RootError(DickelabError):
    """A bracketing root search found no sign change."""


class GridError(DickelabError):
    """A grid does not meet the requirements of a finite-difference stencil."""


class BudgetError(DickelabError):
    """A requested Hilbert-space dimension exceeds the configured budget."""


class ConventionMismatch(DickelabError):
    """A dipole spectrum was produced under a different truncation convention."""
