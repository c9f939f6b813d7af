"""Exact evaluation of the nested-derivative recurrence.

Everything here is independent of the ray asymptotics: the normalized
sequence g_n is produced by iterating

    g_{n+1} = g_n' + (n+1) * omega * g_n,        g_0 = 1,

in truncated-series arithmetic, where omega = f'/f.  Computing g_{n_max}
at a point needs omega through order n_max; each recurrence step consumes
exactly one order, which the series truncation rules enforce
structurally.

Nested derivatives follow from g_n via D^n[f](x0) = f(x0)^n g_n(x0), and
the derivatives of the inverse function H = h^{-1} (with f = 1/h') are
d^n H / dz^n (z0) = f(x0)^n g_{n-1}(x0) at z0 = h(x0).

Mode policy: exact rationals whenever the instance's omega series and (if
f values are needed) f(x0) are exactly representable at a rational x0;
otherwise mpmath floats at the requested significand width.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .catalog import ProblemInstance
from .errors import EngineError
from .numerics import (
    FLOAT,
    RATIONAL,
    default_precision_bits,
    to_mpf,
    workprec,
)
from .series import TruncatedSeries


@dataclass(frozen=True)
class NestedSequence:
    """g_0 .. g_{n_max} at a point, plus the bookkeeping that produced them."""

    instance: ProblemInstance
    x0: object
    n_max: int
    g: tuple
    mode: str
    precision_bits: int
    series: tuple | None = None  # per-step series when requested

    def __post_init__(self):
        if self.g[0] != 1:
            raise EngineError("normalized sequence must start at g_0 = 1")


@dataclass(frozen=True)
class ReversionCheck:
    """One inverse-series coefficient compared along both derivation routes."""

    n: int
    nested: object
    reverted: object
    rel_diff: object


def _resolve(inst: ProblemInstance, x0, mode, precision_bits, need_f=False):
    bits = precision_bits if precision_bits is not None else default_precision_bits()
    if mode is None:
        rational_ok = (isinstance(x0, (int, Fraction)) and inst.rational_omega
                       and (not need_f or inst.f_exact(x0) is not None))
        mode = RATIONAL if rational_ok else FLOAT
    if mode == RATIONAL:
        if not isinstance(x0, (int, Fraction)):
            raise EngineError("rational mode requires a rational x0")
        x0 = Fraction(x0)
    else:
        x0 = to_mpf(x0, bits)
    return mode, bits, x0


def compute_g_sequence(inst: ProblemInstance, x0, n_max: int, mode=None,
                       precision_bits=None, keep_series=False) -> NestedSequence:
    """Run the recurrence and return g_0 .. g_{n_max} at x0."""
    if n_max < 0:
        raise EngineError("n_max must be non-negative")
    mode, bits, x0 = _resolve(inst, x0, mode, precision_bits)
    omega = inst.series_at(x0, n_max, mode, bits)
    g = TruncatedSeries.one(x0, n_max, mode, bits)
    values = [g.constant_term()]
    history = [g] if keep_series else None
    for k in range(n_max):
        g = g.differentiate() + omega.mul(g).scale(k + 1)
        values.append(g.constant_term())
        if keep_series:
            history.append(g)
    return NestedSequence(inst, x0, n_max, tuple(values), mode, bits,
                          tuple(history) if keep_series else None)


def _f_value(inst, x0, mode, bits):
    if mode == RATIONAL:
        value = inst.f_exact(x0)
        if value is None:
            raise EngineError(
                f"f(x0) is not exactly representable for '{inst.name}' at x0={x0}"
            )
        return value
    with workprec(bits):
        return inst.f(to_mpf(x0, bits))


def nested_derivative(inst: ProblemInstance, x0, n: int, mode=None,
                      precision_bits=None):
    """D^n[f](x0) = f(x0)^n * g_n(x0)."""
    if n < 0:
        raise EngineError("n must be non-negative")
    mode, bits, x0 = _resolve(inst, x0, mode, precision_bits, need_f=True)
    if n == 0:
        return Fraction(1) if mode == RATIONAL else to_mpf(1, bits)
    fx = _f_value(inst, x0, mode, bits)
    if fx == 0:
        raise EngineError("f vanishes at center")
    gn = compute_g_sequence(inst, x0, n, mode, bits).g[n]
    with workprec(bits):
        return fx ** n * gn


def f_series_at(inst: ProblemInstance, x0, order: int, mode=None,
                precision_bits=None) -> TruncatedSeries:
    """Taylor series of f about x0, solved from f' = omega*f with f(x0) given."""
    mode, bits, x0 = _resolve(inst, x0, mode, precision_bits, need_f=True)
    f0 = _f_value(inst, x0, mode, bits)
    if order == 0:
        return TruncatedSeries(x0, (f0,), mode, bits)
    omega = inst.series_at(x0, order - 1, mode, bits)
    w = omega.coeffs
    with workprec(bits):
        c = [f0]
        for k in range(order):
            acc = w[0] * c[k]
            for j in range(1, k + 1):
                acc += w[j] * c[k - j]
            if mode == RATIONAL:
                c.append(acc / Fraction(k + 1))
            else:
                c.append(acc / (k + 1))
    return TruncatedSeries(x0, tuple(c), mode, bits)


def nested_derivative_by_definition(inst: ProblemInstance, x0, n: int, mode=None,
                                    precision_bits=None):
    """D^n[f](x0) by direct iteration of D^{k+1} = (f * D^k)' in series form.

    Independent of the g_n normalization; used to cross-check it.
    """
    if n < 0:
        raise EngineError("n must be non-negative")
    mode, bits, x0 = _resolve(inst, x0, mode, precision_bits, need_f=True)
    if n == 0:
        return Fraction(1) if mode == RATIONAL else to_mpf(1, bits)
    f = f_series_at(inst, x0, n, mode, bits)
    d = TruncatedSeries.one(x0, n, mode, bits)
    for _ in range(n):
        d = f.mul(d).differentiate()
    return d.constant_term()


def inverse_derivatives(inst: ProblemInstance, x0, n_max: int, mode=None,
                        precision_bits=None) -> list:
    """d^n H/dz^n (z0) for n = 1..n_max, where H = h^{-1} and z0 = h(x0)."""
    if n_max < 1:
        raise EngineError("n_max must be at least 1")
    mode, bits, x0 = _resolve(inst, x0, mode, precision_bits, need_f=True)
    fx = _f_value(inst, x0, mode, bits)
    if fx == 0:
        raise EngineError("f vanishes at center")
    seq = compute_g_sequence(inst, x0, n_max - 1, mode, bits)
    with workprec(bits):
        return [fx ** n * seq.g[n - 1] for n in range(1, n_max + 1)]


def inverse_taylor_series(inst: ProblemInstance, x0, order: int, z0=None,
                          mode=None, precision_bits=None) -> TruncatedSeries:
    """Taylor series of H = h^{-1} about z0 = h(x0) through ``order``.

    In rational mode the center defaults to 0 (a pure shift; h(x0) is
    generally irrational), matching the shifted convention used by the
    Lagrange-reversion cross-check.  Coefficients are unaffected.
    """
    if order < 0:
        raise EngineError("order must be non-negative")
    mode, bits, x0 = _resolve(inst, x0, mode, precision_bits, need_f=True)
    derivs = inverse_derivatives(inst, x0, order, mode, bits) if order >= 1 else []
    if z0 is None:
        if mode == FLOAT and inst.has_h:
            z0 = inst.h(x0)
        else:
            z0 = 0
    with workprec(bits):
        coeffs = [x0]
        fact = Fraction(1) if mode == RATIONAL else to_mpf(1, bits)
        for n in range(1, order + 1):
            fact = fact * n
            coeffs.append(derivs[n - 1] / fact)
    return TruncatedSeries(z0, tuple(coeffs), mode, bits)


def h_series_at(inst: ProblemInstance, x0, order: int, mode=None,
                precision_bits=None) -> TruncatedSeries:
    """Taylor series of h about x0: integrate 1/f, constant h(x0) (0 if exact)."""
    if order < 1:
        raise EngineError("order must be at least 1")
    mode, bits, x0 = _resolve(inst, x0, mode, precision_bits, need_f=True)
    f = f_series_at(inst, x0, order - 1, mode, bits)
    constant = 0
    if mode == FLOAT and inst.has_h:
        with workprec(bits):
            constant = inst.h(x0)
    return f.reciprocal().integrate(constant)


def crosscheck_reversion(inst: ProblemInstance, x0, order: int, mode=None,
                         precision_bits=None) -> list[ReversionCheck]:
    """Inverse-series coefficients: nested-derivative route vs Lagrange reversion.

    Both routes are computed through ``order`` and compared coefficient by
    coefficient; the reversion route never touches the recurrence, so it
    serves as an independent oracle.
    """
    mode, bits, x0 = _resolve(inst, x0, mode, precision_bits, need_f=True)
    nested = inverse_taylor_series(inst, x0, order, z0=0, mode=mode,
                                   precision_bits=bits)
    reverted = h_series_at(inst, x0, order, mode, bits).revert()
    checks = []
    with workprec(bits):
        for n in range(1, order + 1):
            a = nested.coeffs[n]
            b = reverted.coeffs[n]
            if a == b:
                rel = Fraction(0) if mode == RATIONAL else to_mpf(0, bits)
            else:
                scale = max(abs(to_mpf(a, bits)), abs(to_mpf(b, bits)))
                rel = abs(to_mpf(a, bits) - to_mpf(b, bits)) / scale
            checks.append(ReversionCheck(n, a, b, rel))
    return checks
