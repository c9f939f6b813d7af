"""Sign/log-magnitude scalars.

The ray approximation multiplies factors like e^{-n} [f'(s)/f(x)]^n that
overflow ordinary floats long before the interesting n range; a
:class:`SignedLog` keeps the sign and the natural log of the magnitude
separately so products, quotients and stable sums stay finite.  Addition
uses the usual max + log1p(+-exp(-|delta|)) rule; exactly cancelling
magnitudes of opposite sign collapse to the signed zero (sign 0).

Values are immutable; arithmetic runs at the ambient mpmath precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .numerics import to_mpf

def _ln10():
    return mp.log(10)


@dataclass(frozen=True)
class SignedLog:
    """A real number stored as (sign, ln|value|)."""

    sign: int
    logmag: object  # mpf; ignored when sign == 0

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or +1")
        if self.sign == 0:
            object.__setattr__(self, "logmag", mp.mpf("-inf"))
        else:
            object.__setattr__(self, "logmag", to_mpf(self.logmag))

    # -- construction ------------------------------------------------------------

    @classmethod
    def from_value(cls, value) -> "SignedLog":
        if isinstance(value, SignedLog):
            return value
        if isinstance(value, Fraction):
            if value == 0:
                return cls.zero()
            sign = 1 if value > 0 else -1
            logmag = mp.log(mp.mpf(abs(value.numerator))) - mp.log(
                mp.mpf(value.denominator))
            return cls(sign, logmag)
        x = to_mpf(value)
        if x == 0:
            return cls.zero()
        return cls(1 if x > 0 else -1, mp.log(abs(x)))

    @classmethod
    def from_log(cls, sign: int, logmag) -> "SignedLog":
        if sign == 0:
            return cls.zero()
        return cls(sign, logmag)

    @classmethod
    def zero(cls) -> "SignedLog":
        return cls(0, mp.mpf("-inf"))

    @classmethod
    def one(cls) -> "SignedLog":
        return cls(1, mp.mpf(0))

    # -- conversion ----------------------------------------------------------------

    @property
    def value(self):
        """The represented number as an mpf (exponent range is effectively unbounded)."""
        if self.sign == 0:
            return mp.mpf(0)
        return self.sign * mp.exp(self.logmag)

    def to_float(self) -> float:
        """Round-trips plain floats exactly whenever the value fits their range."""
        return float(self.value)

    @property
    def log10_mag(self):
        if self.sign == 0:
            return mp.mpf("-inf")
        return self.logmag / _ln10()

    def is_double_representable(self) -> bool:
        if self.sign == 0:
            return True
        return abs(self.log10_mag) < 307

    # -- arithmetic ------------------------------------------------------------------

    def __mul__(self, other: "SignedLog") -> "SignedLog":
        other = SignedLog.from_value(other)
        if self.sign == 0 or other.sign == 0:
            return SignedLog.zero()
        return SignedLog(self.sign * other.sign, self.logmag + other.logmag)

    def __truediv__(self, other: "SignedLog") -> "SignedLog":
        other = SignedLog.from_value(other)
        if other.sign == 0:
            raise ZeroDivisionError("division by signed-log zero")
        if self.sign == 0:
            return SignedLog.zero()
        return SignedLog(self.sign * other.sign, self.logmag - other.logmag)

    def __neg__(self) -> "SignedLog":
        if self.sign == 0:
            return self
        return SignedLog(-self.sign, self.logmag)

    def __add__(self, other: "SignedLog") -> "SignedLog":
        other = SignedLog.from_value(other)
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        big, small = (self, other) if self.logmag >= other.logmag else (other, self)
        delta = small.logmag - big.logmag  # <= 0
        if big.sign == small.sign:
            return SignedLog(big.sign, big.logmag + mp.log1p(mp.exp(delta)))
        ratio = mp.exp(delta)
        if ratio == 1:
            return SignedLog.zero()
        return SignedLog(big.sign, big.logmag + mp.log1p(-ratio))

    def __sub__(self, other: "SignedLog") -> "SignedLog":
        return self + (-SignedLog.from_value(other))

    def pow_int(self, k: int) -> "SignedLog":
        if self.sign == 0:
            if k <= 0:
                raise ZeroDivisionError("zero to a non-positive power")
            return SignedLog.zero()
        sign = self.sign if k % 2 else 1
        return SignedLog(sign, self.logmag * k)

    def abs(self) -> "SignedLog":
        if self.sign == 0:
            return self
        return SignedLog(1, self.logmag)

    def __repr__(self):
        if self.sign == 0:
            return "SignedLog(0)"
        return f"SignedLog({'+' if self.sign > 0 else '-'}exp({mp.nstr(self.logmag, 12)}))"


def relative_error(approx: SignedLog, exact: SignedLog):
    """|approx/exact - 1| computed sign-aware in log space.

    When exact is zero the absolute difference |approx| is returned
    instead (the ratio is undefined).
    """
    approx = SignedLog.from_value(approx)
    exact = SignedLog.from_value(exact)
    if exact.sign == 0:
        return mp.exp(approx.logmag) if approx.sign != 0 else mp.mpf(0)
    if approx.sign == 0:
        return mp.mpf(1)
    delta = approx.logmag - exact.logmag
    if approx.sign == exact.sign:
        return abs(mp.expm1(delta))
    return mp.exp(delta) + 1
