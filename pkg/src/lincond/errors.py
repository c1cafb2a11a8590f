"""Exception hierarchy shared across the package."""


class LinCondError(Exception):
    """Base class for all package errors."""


class DomainError(LinCondError, ValueError):
    """An argument violates a documented precondition."""


class ConfigError(LinCondError, ValueError):
    """A density spec string or CLI configuration is malformed."""


class NonFiniteEvaluation(LinCondError, ArithmeticError):
    """A user callable returned NaN or infinity."""


class NonConvergence(LinCondError, ArithmeticError):
    """An integral could not be resolved within the subdivision budget."""


class ZeroDensity(LinCondError, ArithmeticError):
    """Lin's function requested where the density is numerically zero."""


class NegativeDensity(LinCondError, ArithmeticError):
    """The perturbed joint density evaluated below -1e-12; the block
    parameters (beta too large) are invalid."""


class NoIntersection(LinCondError):
    """The hyperbola xy = z does not cross the requested circle."""


class SearchBudgetExceeded(LinCondError):
    """The frequency-doubling search hit its cap without reaching the
    prescribed slopes."""
