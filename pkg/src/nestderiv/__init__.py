"""Nested derivatives, inverse-function Taylor series, and their ray asymptotics."""

from .bernoulli import (
    BernoulliTable,
    bernoulli_asymptotic,
    bernoulli_exact,
    nested_bernoulli_identity,
)
from .catalog import ProblemInstance, catalog_get, custom_from_series
from .engine import (
    NestedSequence,
    ReversionCheck,
    compute_g_sequence,
    crosscheck_reversion,
    f_series_at,
    h_series_at,
    inverse_derivatives,
    inverse_taylor_series,
    nested_derivative,
    nested_derivative_by_definition,
)
from .errors import (
    CatalogError,
    CausticError,
    DomainError,
    EngineError,
    NestDerivError,
    RayError,
    SeriesError,
)
from .logspace import SignedLog, relative_error
from .numerics import DEFAULT_PRECISION_BITS, FLOAT, RATIONAL, default_precision_bits
from .rays import (
    RayDiagnostics,
    RayRoot,
    asymptotic_g,
    eikonal_residual,
    kappa_for,
    large_x_leading,
    phi_eval,
    pochhammer,
    solve_ray_roots,
)
from .series import (
    TruncatedSeries,
    dump_series,
    load_series,
    series_from_json,
    series_to_json,
)

__version__ = "0.1.0"

__all__ = [
    "BernoulliTable",
    "CatalogError",
    "CausticError",
    "DEFAULT_PRECISION_BITS",
    "DomainError",
    "EngineError",
    "FLOAT",
    "NestDerivError",
    "NestedSequence",
    "ProblemInstance",
    "RATIONAL",
    "RayDiagnostics",
    "RayError",
    "RayRoot",
    "ReversionCheck",
    "SeriesError",
    "SignedLog",
    "TruncatedSeries",
    "asymptotic_g",
    "bernoulli_asymptotic",
    "bernoulli_exact",
    "catalog_get",
    "compute_g_sequence",
    "crosscheck_reversion",
    "custom_from_series",
    "default_precision_bits",
    "dump_series",
    "eikonal_residual",
    "f_series_at",
    "h_series_at",
    "inverse_derivatives",
    "inverse_taylor_series",
    "kappa_for",
    "large_x_leading",
    "load_series",
    "nested_bernoulli_identity",
    "nested_derivative",
    "nested_derivative_by_definition",
    "phi_eval",
    "pochhammer",
    "relative_error",
    "series_from_json",
    "series_to_json",
    "solve_ray_roots",
]
