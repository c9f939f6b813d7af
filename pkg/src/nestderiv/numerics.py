"""Scalar conventions shared across the package.

Two coefficient domains are used everywhere and never mixed inside one
object: exact ``fractions.Fraction`` values (mode ``"rational"``) and
mpmath arbitrary-precision floats (mode ``"float"``, default 256
significand bits).  Helpers here coerce between the two, parse user input
exactly, and format decimals deterministically for table output.
"""

from __future__ import annotations

import os
from fractions import Fraction

from mpmath import mp

RATIONAL = "rational"
FLOAT = "float"
MODES = (RATIONAL, FLOAT)

DEFAULT_PRECISION_BITS = 256
MIN_PRECISION_BITS = 64
PRECISION_ENV_VAR = "NESTDERIV_PRECISION_BITS"


def default_precision_bits() -> int:
    """Default significand width, overridable via NESTDERIV_PRECISION_BITS."""
    raw = os.environ.get(PRECISION_ENV_VAR)
    if raw is None:
        return DEFAULT_PRECISION_BITS
    bits = int(raw)
    if bits < MIN_PRECISION_BITS:
        raise ValueError(
            f"{PRECISION_ENV_VAR}={bits}: precision must be >= {MIN_PRECISION_BITS} bits"
        )
    return bits


def workprec(bits: int):
    """Context manager running mpmath at the given significand width."""
    return mp.workprec(bits)


def is_rational(value) -> bool:
    return isinstance(value, (int, Fraction))


def to_mpf(value, bits: int | None = None):
    """Convert int/Fraction/float/str/mpf to an mpf, rounded at ``bits``.

    With ``bits`` omitted the ambient precision applies (no context switch;
    this sits on hot evaluation paths).
    """
    if bits is None:
        if isinstance(value, Fraction):
            return mp.mpf(value.numerator) / mp.mpf(value.denominator)
        return mp.mpf(value)
    with mp.workprec(bits):
        if isinstance(value, Fraction):
            return mp.mpf(value.numerator) / mp.mpf(value.denominator)
        return mp.mpf(value)


def parse_exact(text: str) -> Fraction:
    """Parse a decimal or p/q literal exactly."""
    return Fraction(text.strip())


def coerce_scalar(value, mode: str, bits: int):
    """Coerce a scalar into the given mode; rejects silent float->rational mixing."""
    from .errors import SeriesError

    if mode == RATIONAL:
        if isinstance(value, (int, Fraction)):
            return Fraction(value)
        raise SeriesError(
            f"rational mode cannot hold {type(value).__name__} values (mode mix)"
        )
    return to_mpf(value, bits)


def decimal_str(value, digits: int = 20) -> str:
    """Deterministic decimal rendering with ``digits`` significant digits."""
    working = max(mp.prec, int(digits * 3.4) + 16)
    with mp.workprec(working):
        x = to_mpf(value)
        return mp.nstr(x, digits, strip_zeros=True)
