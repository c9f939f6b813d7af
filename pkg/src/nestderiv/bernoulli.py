"""Exact Bernoulli numbers and the tangent-number identity they certify.

B_n is computed from the defining recurrence sum_{k=0}^{n} C(n+1,k) B_k = 0
with the convention B_1 = -1/2 (only even indices matter downstream, and
those are convention-independent).  The identity

    D^{2n}[x^2+1](0) = 2/(n+1) * 4^n * (4^{n+1}-1) * |B_{2(n+1)}|

ties the exact engine on the arctan instance to this table, and two
asymptotic formulas for |B_{2n}| are provided for convergence checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from mpmath import mp

from .catalog import catalog_get
from .engine import nested_derivative
from .numerics import default_precision_bits, to_mpf, workprec


@dataclass(frozen=True)
class BernoulliTable:
    """Exact values B_0 .. B_top (convention B_1 = -1/2)."""

    values: tuple

    @property
    def top_index(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, index: int) -> Fraction:
        return self.values[index]


def bernoulli_exact(m: int) -> BernoulliTable:
    """Exact rationals B_0 .. B_{2m} via the defining recurrence."""
    if m < 0:
        raise ValueError("m must be non-negative")
    top = 2 * m
    values = [Fraction(1)]
    for n in range(1, top + 1):
        acc = Fraction(0)
        for k in range(n):
            acc += comb(n + 1, k) * values[k]
        values.append(-acc / (n + 1))
    return BernoulliTable(tuple(values))


def nested_bernoulli_identity(n: int, table: BernoulliTable | None = None):
    """Both sides of the D^{2n}[x^2+1](0) identity; equality is exact."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if table is None or table.top_index < 2 * (n + 1):
        table = bernoulli_exact(n + 1)
    lhs = nested_derivative(catalog_get("arctan"), 0, 2 * n, mode="rational")
    rhs = Fraction(2, n + 1) * 4 ** n * (4 ** (n + 1) - 1) * abs(table[2 * (n + 1)])
    return lhs, rhs, lhs == rhs


def bernoulli_asymptotic(n: int, form: str = "refined", precision_bits=None):
    """Asymptotic |B_{2n}| (mpf; its exponent range keeps huge n finite).

    ``refined`` carries the full correction factor; ``leading`` is the
    classical 4 sqrt(n pi) (n/(e pi))^{2n}.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    bits = precision_bits if precision_bits is not None else default_precision_bits()
    with workprec(bits):
        nm = to_mpf(n)
        if form == "leading":
            return 4 * mp.sqrt(nm * mp.pi) * (nm / (mp.e * mp.pi)) ** (2 * n)
        if form == "refined":
            four_n = mp.mpf(4) ** n
            head = 2 * four_n / (mp.pi ** (2 * nm - mp.mpf(1) / 2) * (four_n - 1))
            body = (nm / mp.e) ** (2 * n)
            tail = (4 * nm ** 2 + mp.pi ** 2) / mp.sqrt(4 * nm ** 3 + mp.pi ** 2 * (nm - 1))
            return head * body * tail
    raise ValueError(f"unknown form {form!r} (use 'refined' or 'leading')")
