"""Named problem instances.

Each :class:`ProblemInstance` bundles numeric evaluators for f, f', f'',
the antiderivative target h, and omega = f'/f, together with an optional
large-x tail model omega ~ a*x**p and a factory for the Taylor series of
omega about a point.  Evaluators accept exact ``Fraction`` inputs and
return exact values wherever the closed form allows; otherwise they
return mpmath floats at the ambient working precision.

Catalog members:

``log1p``        h = ln(x+1),  f = x+1,        omega = 1/(x+1),   x > -1
``arctan``       h = arctan x, f = x^2+1,      omega = 2x/(x^2+1)
``hermite_like`` omega = x,    f = exp(x^2/2), h by adaptive quadrature
``power_law(a)`` omega = a/x,  f = x^a,        x > 0
``steep_decay``  omega = 1/x^2, f = exp(-1/x), x > 0, no ray support

Instances are immutable; evaluators are pure except the quadrature cache
backing ``hermite_like``'s h, whose concurrent fills are idempotent.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache

from mpmath import mp

from .errors import CatalogError, DomainError, SeriesError
from .numerics import FLOAT, RATIONAL, default_precision_bits, to_mpf, workprec
from .series import TruncatedSeries


class ProblemInstance:
    """A function package (f, f', f'', h, omega, tail) usable by every engine."""

    def __init__(self, name, *, f, f1, f2, omega, omega_series, h=None,
                 tail=None, supports_rays=False, domain=(None, None),
                 rational_omega=True):
        self.name = name
        self._f = f
        self._f1 = f1
        self._f2 = f2
        self._h = h
        self._omega = omega
        self._omega_series = omega_series
        self.tail = tail
        self.supports_rays = supports_rays
        self.domain = domain
        # Bounds are small exact rationals; floats compare exactly against
        # both Fraction and mpf operands, keeping this hot check cheap.
        lo, hi = domain
        self._dom_lo = None if lo is None else float(lo)
        self._dom_hi = None if hi is None else float(hi)
        self.rational_omega = rational_omega

    def __repr__(self):
        return f"ProblemInstance({self.name!r})"

    # -- domain ----------------------------------------------------------------

    def check_domain(self, x) -> None:
        lo = self._dom_lo
        hi = self._dom_hi
        if (lo is not None and x <= lo) or (hi is not None and x >= hi):
            lo_s = "-inf" if lo is None else str(self.domain[0])
            hi_s = "inf" if hi is None else str(self.domain[1])
            raise DomainError(
                f"x={x} outside domain ({lo_s}, {hi_s}) of instance '{self.name}'"
            )

    # -- evaluators --------------------------------------------------------------

    @property
    def has_h(self) -> bool:
        return self._h is not None

    def f(self, x):
        self.check_domain(x)
        return self._f(x)

    def f1(self, x):
        self.check_domain(x)
        return self._f1(x)

    def f2(self, x):
        self.check_domain(x)
        return self._f2(x)

    def omega(self, x):
        self.check_domain(x)
        return self._omega(x)

    def h(self, x):
        if self._h is None:
            raise CatalogError(f"instance '{self.name}' has no closed-form h")
        self.check_domain(x)
        return self._h(x)

    def f_exact(self, x0):
        """f(x0) as an exact Fraction, or None when not exactly representable."""
        if not isinstance(x0, (int, Fraction)):
            return None
        try:
            value = self.f(Fraction(x0))
        except DomainError:
            raise
        except (ValueError, TypeError, OverflowError):
            return None
        if isinstance(value, (int, Fraction)):
            return Fraction(value)
        return None

    # -- series ------------------------------------------------------------------

    def series_at(self, x0, order, mode=None, precision_bits=None) -> TruncatedSeries:
        """Taylor series of omega about x0 through ``order``."""
        self.check_domain(x0)
        if precision_bits is None:
            precision_bits = default_precision_bits()
        if mode is None:
            mode = RATIONAL if (self.rational_omega and
                                isinstance(x0, (int, Fraction))) else FLOAT
        if mode == RATIONAL and not isinstance(x0, (int, Fraction)):
            raise SeriesError("rational mode requires a rational expansion point")
        if mode == RATIONAL:
            x0 = Fraction(x0)
        else:
            x0 = to_mpf(x0, precision_bits)
        return self._omega_series(x0, order, mode, precision_bits)

    def omega_tail_params(self):
        """Declared (a, p) with omega(x) ~ a*x**p as x -> infinity."""
        if self.tail is None:
            raise CatalogError(f"no tail model for instance '{self.name}'")
        return self.tail


# -- catalog members ----------------------------------------------------------------


def _log1p():
    def omega_series(x0, order, mode, bits):
        f = TruncatedSeries.from_coefficients(x0, [x0 + 1, 1], order, mode, bits)
        return f.reciprocal()

    return ProblemInstance(
        "log1p",
        f=lambda x: x + 1,
        f1=lambda x: _one_like(x),
        f2=lambda x: _zero_like(x),
        omega=lambda x: 1 / (x + Fraction(1)) if isinstance(x, (int, Fraction))
        else 1 / (x + 1),
        h=lambda x: mp.log(to_mpf(x) + 1),
        omega_series=omega_series,
        tail=(Fraction(1), Fraction(-1)),
        supports_rays=True,
        domain=(Fraction(-1), None),
    )


def _arctan():
    def omega_series(x0, order, mode, bits):
        fp = TruncatedSeries.from_coefficients(x0, [2 * x0, 2], order, mode, bits)
        f = TruncatedSeries.from_coefficients(x0, [x0 * x0 + 1, 2 * x0, 1],
                                              order, mode, bits)
        return fp.mul(f.reciprocal())

    return ProblemInstance(
        "arctan",
        f=lambda x: x * x + 1,
        f1=lambda x: 2 * x,
        f2=lambda x: _two_like(x),
        omega=lambda x: 2 * x / (x * x + 1) if not isinstance(x, (int, Fraction))
        else Fraction(2 * x, 1) / (Fraction(x) ** 2 + 1),
        h=lambda x: mp.atan(to_mpf(x)),
        omega_series=omega_series,
        tail=(Fraction(2), Fraction(-1)),
        supports_rays=True,
        domain=(None, None),
    )


def _hermite_like():
    def omega_series(x0, order, mode, bits):
        return TruncatedSeries.identity(x0, order, mode, bits)

    return ProblemInstance(
        "hermite_like",
        f=lambda x: mp.exp(to_mpf(x) ** 2 / 2),
        f1=lambda x: to_mpf(x) * mp.exp(to_mpf(x) ** 2 / 2),
        f2=lambda x: (1 + to_mpf(x) ** 2) * mp.exp(to_mpf(x) ** 2 / 2),
        omega=lambda x: x,
        h=_gaussian_antiderivative,
        omega_series=omega_series,
        tail=(Fraction(1), Fraction(1)),
        supports_rays=True,
        domain=(None, None),
    )


def _power_law(a: Fraction):
    a = Fraction(a)
    a_int = a.denominator == 1

    def f(x):
        if a_int and isinstance(x, (int, Fraction)):
            return Fraction(x) ** int(a)
        return to_mpf(x) ** to_mpf(a)

    def f1(x):
        if a_int and isinstance(x, (int, Fraction)):
            return a * Fraction(x) ** (int(a) - 1)
        return to_mpf(a) * to_mpf(x) ** (to_mpf(a) - 1)

    def f2(x):
        if a_int and isinstance(x, (int, Fraction)):
            return a * (a - 1) * Fraction(x) ** (int(a) - 2)
        return to_mpf(a) * (to_mpf(a) - 1) * to_mpf(x) ** (to_mpf(a) - 2)

    def h(x):
        xm = to_mpf(x)
        if a == 1:
            return mp.log(xm)
        e = 1 - to_mpf(a)
        return xm ** e / e

    def omega(x):
        if isinstance(x, (int, Fraction)):
            return a / Fraction(x)
        return to_mpf(a) / to_mpf(x)

    def omega_series(x0, order, mode, bits):
        ident = TruncatedSeries.from_coefficients(x0, [x0, 1], order, mode, bits)
        return ident.reciprocal().scale(a)

    return ProblemInstance(
        f"power_law({a})",
        f=f, f1=f1, f2=f2, omega=omega, h=h,
        omega_series=omega_series,
        tail=(a, Fraction(-1)),
        supports_rays=True,
        domain=(Fraction(0), None),
    )


def _steep_decay():
    def omega_series(x0, order, mode, bits):
        sq = TruncatedSeries.from_coefficients(x0, [x0 * x0, 2 * x0, 1],
                                               order, mode, bits)
        return sq.reciprocal()

    return ProblemInstance(
        "steep_decay",
        f=lambda x: mp.exp(-1 / to_mpf(x)),
        f1=lambda x: mp.exp(-1 / to_mpf(x)) / to_mpf(x) ** 2,
        f2=lambda x: mp.exp(-1 / to_mpf(x)) * (to_mpf(x) ** -4 - 2 * to_mpf(x) ** -3),
        omega=lambda x: 1 / Fraction(x) ** 2 if isinstance(x, (int, Fraction))
        else to_mpf(x) ** -2,
        h=None,
        omega_series=omega_series,
        tail=(Fraction(1), Fraction(-2)),
        supports_rays=False,
        domain=(Fraction(0), None),
    )


def _one_like(x):
    return Fraction(1) if isinstance(x, (int, Fraction)) else to_mpf(1)


def _zero_like(x):
    return Fraction(0) if isinstance(x, (int, Fraction)) else to_mpf(0)


def _two_like(x):
    return Fraction(2) if isinstance(x, (int, Fraction)) else to_mpf(2)


# Cache for the non-elementary antiderivative of exp(-t^2/2); keyed by value
# and working precision, so concurrent fills are idempotent.
_GAUSS_CACHE: dict = {}


def _gaussian_antiderivative(x):
    """h(x) = integral_0^x exp(-t^2/2) dt by adaptive quadrature."""
    xm = to_mpf(x)
    if xm < 0:
        return -_gaussian_antiderivative(-xm)
    key = (xm, mp.prec)
    cached = _GAUSS_CACHE.get(key)
    if cached is not None:
        return cached
    # Beyond |t| ~ sqrt(2 ln 2 * prec) the integrand is below 2^-prec; split
    # the path there so tanh-sinh quadrature keeps its rate on huge intervals.
    cut = mp.sqrt(2 * mp.log(2) * mp.prec) + 2
    if xm > cut:
        path = [mp.mpf(0), cut, xm]
    else:
        path = [mp.mpf(0), xm]
    value = mp.quad(lambda t: mp.exp(-t * t / 2), path, maxdegree=12)
    _GAUSS_CACHE[key] = value
    return value


_BUILDERS = {
    "log1p": _log1p,
    "arctan": _arctan,
    "hermite_like": _hermite_like,
    "steep_decay": _steep_decay,
}

_POWER_LAW_RE = re.compile(r"^power_law\((?P<a>[^)]+)\)$")

AVAILABLE = ("log1p", "arctan", "hermite_like", "power_law(a)", "steep_decay")


@lru_cache(maxsize=None)
def _get_named(name: str) -> ProblemInstance:
    return _BUILDERS[name]()


@lru_cache(maxsize=None)
def _get_power_law(a: Fraction) -> ProblemInstance:
    return _power_law(a)


def catalog_get(name: str) -> ProblemInstance:
    """Look up a catalog instance by name, e.g. ``arctan`` or ``power_law(2)``."""
    if name in _BUILDERS:
        return _get_named(name)
    match = _POWER_LAW_RE.match(name.strip())
    if match:
        try:
            a = Fraction(match.group("a").strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise CatalogError(f"bad power_law parameter {match.group('a')!r}") from exc
        return _get_power_law(a)
    raise CatalogError(
        f"unknown instance '{name}'; available: {', '.join(AVAILABLE)}"
    )


def custom_from_series(omega_series: TruncatedSeries) -> ProblemInstance:
    """Instance defined by a Taylor series of omega about a fixed center.

    Only local (exact-engine) operations are supported: no tail model, no
    rays.  f is normalized to f(center) = 1, i.e. f = exp(integral of
    omega from the center), so nested derivatives coincide with the
    normalized sequence g_n at the center.
    """
    center = omega_series.center
    stored = omega_series
    integral = stored.integrate()
    omega_prime = stored.differentiate()

    def _dx(x):
        if stored.mode == RATIONAL and isinstance(x, (int, Fraction)):
            return Fraction(x) - center
        return to_mpf(x) - to_mpf(center)

    def f(x):
        value = integral.evaluate(_dx(x))
        if value == 0:
            return Fraction(1) if isinstance(x, (int, Fraction)) else to_mpf(1)
        return mp.exp(to_mpf(value))

    def omega(x):
        return stored.evaluate(_dx(x))

    def f1(x):
        return omega(x) * f(x)

    def f2(x):
        w = omega(x)
        return (omega_prime.evaluate(_dx(x)) + w * w) * f(x)

    def series_factory(x0, order, mode, bits):
        if x0 != center:
            raise CatalogError(
                "custom instance is only defined at its expansion center"
            )
        if mode != stored.mode:
            raise CatalogError(
                f"custom instance series mode is fixed to '{stored.mode}'"
            )
        return stored.truncated(order)

    return ProblemInstance(
        "custom",
        f=f, f1=f1, f2=f2, omega=omega, h=None,
        omega_series=series_factory,
        tail=None,
        supports_rays=False,
        domain=(None, None),
        rational_omega=stored.mode == RATIONAL,
    )
