"""Truncated power-series arithmetic.

A :class:`TruncatedSeries` is a finite Taylor expansion about a center
point: ``c0 + c1*(x - center) + ... + c_order*(x - center)**order``.
Coefficients live either in exact rationals or in mpmath floats at a
configurable significand width; the two never mix within one series.

Truncation is explicit, not accidental: multiplying truncates the product
at the smaller operand order, differentiation lowers the order by one and
integration raises it by one.  Nothing above the retained order is ever
read or written, which is what lets the recurrence engine spend exactly
one order per step.

All values are immutable after construction and all operations are pure,
so series may be shared freely between threads.

Series literals can be stored as JSON::

    {"center": "1/2", "coeffs": ["1", "-2", "3"], "mode": "rational",
     "precision_bits": 256}
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .errors import SeriesError
from .numerics import (
    DEFAULT_PRECISION_BITS,
    FLOAT,
    MODES,
    RATIONAL,
    coerce_scalar,
    to_mpf,
    workprec,
)


@dataclass(frozen=True)
class TruncatedSeries:
    """Finite Taylor expansion about ``center`` with ``order + 1`` coefficients."""

    center: object
    coeffs: tuple
    mode: str = RATIONAL
    precision_bits: int = DEFAULT_PRECISION_BITS

    def __post_init__(self):
        if self.mode not in MODES:
            raise SeriesError(f"unknown series mode {self.mode!r}")
        if len(self.coeffs) == 0:
            raise SeriesError("a series needs at least its constant coefficient")
        bits = self.precision_bits
        coeffs = tuple(coerce_scalar(c, self.mode, bits) for c in self.coeffs)
        center = coerce_scalar(self.center, self.mode, bits)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "center", center)

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_coefficients(cls, center, coeffs, order=None, mode=RATIONAL,
                          precision_bits=DEFAULT_PRECISION_BITS):
        """Build a series, zero-padding up to ``order`` when requested."""
        coeffs = list(coeffs)
        if order is not None:
            if order + 1 < len(coeffs):
                coeffs = coeffs[: order + 1]
            else:
                coeffs += [0] * (order + 1 - len(coeffs))
        return cls(center, tuple(coeffs), mode, precision_bits)

    @classmethod
    def constant(cls, value, center, order=0, mode=RATIONAL,
                 precision_bits=DEFAULT_PRECISION_BITS):
        return cls.from_coefficients(center, [value], order, mode, precision_bits)

    @classmethod
    def one(cls, center, order=0, mode=RATIONAL, precision_bits=DEFAULT_PRECISION_BITS):
        return cls.constant(1, center, order, mode, precision_bits)

    @classmethod
    def identity(cls, center, order, mode=RATIONAL,
                 precision_bits=DEFAULT_PRECISION_BITS):
        """The series of x itself about ``center``."""
        return cls.from_coefficients(center, [center, 1], order, mode, precision_bits)

    # -- basic introspection ---------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def constant_term(self):
        return self.coeffs[0]

    def truncated(self, order: int) -> "TruncatedSeries":
        """Drop coefficients above ``order`` (which must not exceed self.order)."""
        if order > self.order:
            raise SeriesError("insufficient series order")
        return TruncatedSeries(self.center, self.coeffs[: order + 1],
                               self.mode, self.precision_bits)

    def _zero(self):
        return Fraction(0) if self.mode == RATIONAL else to_mpf(0, self.precision_bits)

    def _compatible(self, other: "TruncatedSeries"):
        if self.mode != other.mode:
            raise SeriesError("mode mismatch")
        if self.center != other.center:
            raise SeriesError("center mismatch")
        return max(self.precision_bits, other.precision_bits)

    def _coerce(self, value):
        return coerce_scalar(value, self.mode, self.precision_bits)

    # -- ring operations -------------------------------------------------------

    def add(self, other: "TruncatedSeries") -> "TruncatedSeries":
        bits = self._compatible(other)
        n = min(self.order, other.order)
        with workprec(bits):
            coeffs = tuple(self.coeffs[k] + other.coeffs[k] for k in range(n + 1))
        return TruncatedSeries(self.center, coeffs, self.mode, bits)

    def sub(self, other: "TruncatedSeries") -> "TruncatedSeries":
        bits = self._compatible(other)
        n = min(self.order, other.order)
        with workprec(bits):
            coeffs = tuple(self.coeffs[k] - other.coeffs[k] for k in range(n + 1))
        return TruncatedSeries(self.center, coeffs, self.mode, bits)

    def mul(self, other: "TruncatedSeries") -> "TruncatedSeries":
        """Product truncated to the smaller operand order."""
        bits = self._compatible(other)
        n = min(self.order, other.order)
        zero = self._zero()
        with workprec(bits):
            coeffs = []
            for k in range(n + 1):
                acc = zero
                for i in range(k + 1):
                    acc += self.coeffs[i] * other.coeffs[k - i]
                coeffs.append(acc)
        return TruncatedSeries(self.center, tuple(coeffs), self.mode, bits)

    def scale(self, factor) -> "TruncatedSeries":
        with workprec(self.precision_bits):
            f = self._coerce(factor)
            coeffs = tuple(c * f for c in self.coeffs)
        return TruncatedSeries(self.center, coeffs, self.mode, self.precision_bits)

    def neg(self) -> "TruncatedSeries":
        return self.scale(-1)

    __add__ = add
    __sub__ = sub
    __neg__ = neg

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return self.mul(other)
        return self.scale(other)

    __rmul__ = __mul__

    # -- calculus ---------------------------------------------------------------

    def differentiate(self) -> "TruncatedSeries":
        """Derivative; order drops by one (order-0 input gives the zero series)."""
        if self.order == 0:
            return TruncatedSeries(self.center, (self._zero(),),
                                   self.mode, self.precision_bits)
        with workprec(self.precision_bits):
            coeffs = tuple(self.coeffs[k] * k for k in range(1, self.order + 1))
        return TruncatedSeries(self.center, coeffs, self.mode, self.precision_bits)

    def integrate(self, constant=0) -> "TruncatedSeries":
        """Antiderivative with the supplied constant; order rises by one."""
        with workprec(self.precision_bits):
            c0 = self._coerce(constant)
            if self.mode == RATIONAL:
                coeffs = [c0] + [self.coeffs[k] / Fraction(k + 1)
                                 for k in range(self.order + 1)]
            else:
                coeffs = [c0] + [self.coeffs[k] / (k + 1)
                                 for k in range(self.order + 1)]
        return TruncatedSeries(self.center, tuple(coeffs), self.mode,
                               self.precision_bits)

    # -- inversion --------------------------------------------------------------

    def reciprocal(self) -> "TruncatedSeries":
        """Multiplicative inverse through the retained order; needs c0 != 0."""
        if self.coeffs[0] == 0:
            raise SeriesError("non-invertible series")
        with workprec(self.precision_bits):
            c = self.coeffs
            inv0 = (Fraction(1) / c[0]) if self.mode == RATIONAL else 1 / c[0]
            out = [inv0]
            for n in range(1, self.order + 1):
                acc = self._zero()
                for k in range(1, n + 1):
                    acc += c[k] * out[n - k]
                out.append(-acc * inv0)
        return TruncatedSeries(self.center, tuple(out), self.mode,
                               self.precision_bits)

    def revert(self) -> "TruncatedSeries":
        """Compositional inverse through the retained order.

        For s(x) = c0 + c1 (x-a) + ... with c1 != 0, returns the series r
        centered at c0 with r(s(x)) = x through the retained order; its
        constant term is the original center a.  Solved coefficient by
        coefficient, which keeps this path independent of any other route
        to inverse-function derivatives.
        """
        if self.order < 1 or self.coeffs[1] == 0:
            raise SeriesError("non-invertible at center")
        n_max = self.order
        c = self.coeffs
        zero = self._zero()
        with workprec(self.precision_bits):
            inv_c1 = (Fraction(1) / c[1]) if self.mode == RATIONAL else 1 / c[1]
            d = [zero] * (n_max + 1)
            d[1] = inv_c1
            for m in range(2, n_max + 1):
                # [w^m] of sum_{k>=1} c_k D(w)^k with d[m] still zero; the
                # unknown d[m] enters only through the linear c1 term.
                power = d[: m + 1]
                total = c[1] * power[m]
                for k in range(2, m + 1):
                    power = _convolve_reduced(power, d, m, zero)
                    total += c[k] * power[m]
                d[m] = -total * inv_c1
            coeffs = tuple([self.center] + d[1:])
        return TruncatedSeries(c[0], coeffs, self.mode, self.precision_bits)

    # -- evaluation ---------------------------------------------------------------

    def evaluate(self, dx):
        """Horner evaluation of the polynomial in dx = x - center."""
        with workprec(self.precision_bits):
            step = self._coerce(dx)
            acc = self._zero()
            for c in reversed(self.coeffs):
                acc = acc * step + c
        return acc

    def __call__(self, dx):
        return self.evaluate(dx)


def _convolve_reduced(power, d, upto, zero):
    """One more power of the reduced series d (no constant term), kept to ``upto``."""
    out = [zero] * (upto + 1)
    for i in range(1, upto):
        pi = power[i]
        if pi == 0:
            continue
        for j in range(1, upto - i + 1):
            out[i + j] += pi * d[j]
    return out


# -- JSON series literals ---------------------------------------------------------


def series_to_json(series: TruncatedSeries) -> dict:
    """Serialize to the series-literal dict format."""
    if series.mode == RATIONAL:
        center = str(series.center)
        coeffs = [str(c) for c in series.coeffs]
    else:
        digits = int(series.precision_bits * 0.30103) + 5
        with workprec(series.precision_bits):
            center = mp.nstr(series.center, digits)
            coeffs = [mp.nstr(c, digits) for c in series.coeffs]
    return {
        "center": center,
        "coeffs": coeffs,
        "mode": series.mode,
        "precision_bits": series.precision_bits,
    }


def series_from_json(data: dict) -> TruncatedSeries:
    """Parse the series-literal dict format."""
    try:
        mode = data.get("mode", RATIONAL)
        bits = int(data.get("precision_bits", DEFAULT_PRECISION_BITS))
        raw_center = data["center"]
        raw_coeffs = data["coeffs"]
    except (KeyError, TypeError) as exc:
        raise SeriesError(f"malformed series literal: {exc}") from exc
    if mode == RATIONAL:
        center = Fraction(str(raw_center))
        coeffs = [Fraction(str(c)) for c in raw_coeffs]
    elif mode == FLOAT:
        center = to_mpf(str(raw_center), bits)
        coeffs = [to_mpf(str(c), bits) for c in raw_coeffs]
    else:
        raise SeriesError(f"unknown series mode {mode!r}")
    return TruncatedSeries(center, tuple(coeffs), mode, bits)


def load_series(path) -> TruncatedSeries:
    with open(path, "r", encoding="utf-8") as fh:
        return series_from_json(json.load(fh))


def dump_series(series: TruncatedSeries, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(series_to_json(series), fh, indent=2)
        fh.write("\n")
