"""Exception hierarchy shared by all modules."""


class NestDerivError(Exception):
    """Base class for every error raised by this package."""


class SeriesError(NestDerivError, ValueError):
    """Invalid truncated-series operation (center mismatch, non-invertible, ...)."""


class DomainError(NestDerivError, ValueError):
    """Evaluation point outside the declared domain of a problem instance."""


class CatalogError(NestDerivError, ValueError):
    """Unknown instance name, missing tail model, or unusable custom instance."""


class EngineError(NestDerivError, ValueError):
    """Exact-engine precondition failure (f vanishing at the center, bad mode)."""


class RayError(NestDerivError, RuntimeError):
    """Ray solving or evaluation failure (no roots, lost branch, bad sign)."""


class CausticError(RayError):
    """Transport amplitude undefined: f'(s)^2 + n f(s) f''(s) <= 0."""
