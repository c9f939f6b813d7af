"""Ray-method asymptotics for the normalized sequence g_n.

For large n, g_n(x) is approximated by kappa * sum_j Phi(x, n; s_j) where
each launch point s_j solves the ray equation

    n - f'(s) [h(s) - h(x)] = 0

and

    Phi(x, n; s) = f(s)/f(x) * e^{-n} * [f'(s)/f(x)]^n
                   * sqrt(f'(s)^2 / (f'(s)^2 + n f(s) f''(s))).

Phi is evaluated entirely in signed log space (the middle factor overflows
floats at moderate n).  The phase F, amplitude correction G, Jacobian J
and the phase gradients p = dF/dx, q = dF/dn are reported per root; F, G
and q are log-magnitudes (the overall sign lives in Phi), which is the
real-valued convention on branches where f'(s)/f(x) < 0.

Root finding scans a window mapped through u = asinh(s) (the launch
points of interest spread over many orders of magnitude), widening the
window until f'(s)[h(s)-h(x)] has swept past 2n on both sides, then
refines every sign change by bisection and a short Newton polish.  n is
treated as a continuous positive real throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from mpmath import mp

from .catalog import ProblemInstance
from .errors import CatalogError, CausticError, DomainError, RayError
from .logspace import SignedLog
from .numerics import default_precision_bits, to_mpf, workprec

_SCAN_BITS = 64
_GRID_POINTS = 2048
_MAX_WIDENINGS = 24
_BISECT_REL = mp.mpf("1e-13")
_NEWTON_STEPS = 4


@dataclass(frozen=True)
class RayRoot:
    """One solution of the ray equation with its bracket and residual."""

    s: object
    bracket: tuple
    residual: object
    branch_label: str


@dataclass(frozen=True)
class RayDiagnostics:
    """Per-root phase/amplitude data: F, G (logs), Jacobian J, gradients p, q."""

    F: object
    G: object
    J: object
    p: object
    q: object


def _sign(v) -> int:
    if v > 0:
        return 1
    if v < 0:
        return -1
    return 0


def _domain_clipped(inst, x, half_width_u):
    """u-interval [ux - W, ux + W] clipped to the instance domain."""
    ux = mp.asinh(x)
    u_lo = ux - half_width_u
    u_hi = ux + half_width_u
    lo, hi = inst.domain
    lo_clamped = hi_clamped = False
    if lo is not None:
        s_min = to_mpf(lo) + (x - to_mpf(lo)) * mp.mpf("1e-12")
        u_min = mp.asinh(s_min)
        if u_lo <= u_min:
            u_lo = u_min
            lo_clamped = True
    if hi is not None:
        s_max = to_mpf(hi) - (to_mpf(hi) - x) * mp.mpf("1e-12")
        u_max = mp.asinh(s_max)
        if u_hi >= u_max:
            u_hi = u_max
            hi_clamped = True
    return ux, u_lo, u_hi, lo_clamped, hi_clamped


def _scan(residual, u_lo, u_hi, grid_points):
    """Sign-change brackets of the residual on a uniform u-grid."""
    brackets = []
    du = (u_hi - u_lo) / (grid_points - 1)
    prev_u = prev_r = None
    for i in range(grid_points):
        u = u_lo + du * i
        r = residual(mp.sinh(u))
        if r == 0:
            brackets.append((u, u, r, r))
        elif prev_r is not None and prev_r != 0 and _sign(r) != _sign(prev_r):
            brackets.append((prev_u, u, prev_r, r))
        prev_u, prev_r = u, r
    return brackets


_PROBES_PER_SIDE = 9


def _side_energy(residual, nm, u_from, u_to):
    """Largest swept energy E = n - residual over a few probe points."""
    best = mp.mpf("-inf")
    if u_to <= u_from:
        return best
    for i in range(1, _PROBES_PER_SIDE + 1):
        u = u_from + (u_to - u_from) * i / _PROBES_PER_SIDE
        best = max(best, nm - residual(mp.sinh(u)))
    return best


def solve_ray_roots(inst: ProblemInstance, x, n, window=None,
                    grid_points=_GRID_POINTS, precision_bits=None) -> list[RayRoot]:
    """All launch points s with n = f'(s) [h(s) - h(x)], sorted ascending."""
    if not inst.supports_rays:
        raise RayError(f"instance '{inst.name}' does not support ray evaluation")
    bits = precision_bits if precision_bits is not None else default_precision_bits()
    with workprec(bits):
        xm = to_mpf(x)
        nm = to_mpf(n)
    inst.check_domain(xm)
    if not nm > 0:
        raise RayError("n must be positive for ray solving")

    # Bracket search at scan precision; the energy criterion widens the
    # window until f'(s)[h(s)-h(x)] has reached 2n on each unclamped side.
    with workprec(_SCAN_BITS):
        hx = inst.h(xm)

        def residual(s):
            return nm - inst.f1(s) * (inst.h(s) - hx)

        if window is not None:
            w_lo = to_mpf(window[0])
            w_hi = to_mpf(window[1])
            if not w_lo < w_hi:
                raise RayError("window must satisfy lo < hi")
            inst.check_domain(w_lo)
            inst.check_domain(w_hi)
            ux = mp.asinh(xm)
            brackets, _, _ = _scan(residual, ux, mp.asinh(w_lo), mp.asinh(w_hi),
                                   grid_points)
        else:
            width = mp.mpf(2)
            brackets = []
            for _ in range(_MAX_WIDENINGS):
                ux, u_lo, u_hi, lo_cl, hi_cl = _domain_clipped(inst, xm, width)
                brackets, e_left, e_right = _scan(residual, ux, u_lo, u_hi,
                                                  grid_points)
                target = 2 * nm
                if (lo_cl or e_left >= target) and (hi_cl or e_right >= target):
                    break
                width *= 2
        if not brackets:
            raise RayError("no rays found (widen window)")

        # Bisection in u-space down to the requested relative width.
        refined = []
        for ua, ub, ra, rb in brackets:
            if ra == 0:
                refined.append((ua, ub))
                continue
            for _ in range(256):
                um = (ua + ub) / 2
                if ub - ua <= _BISECT_REL * (1 + abs(um)):
                    break
                rm = residual(mp.sinh(um))
                if rm == 0:
                    ua = ub = um
                    break
                if _sign(rm) == _sign(ra):
                    ua, ra = um, rm
                else:
                    ub, rb = um, rm
            refined.append((ua, ub))

    # Newton polish at full working precision.
    roots = []
    with workprec(bits):
        hx = inst.h(xm)

        def residual_full(s):
            return nm - inst.f1(s) * (inst.h(s) - hx)

        def residual_slope(s):
            return -inst.f2(s) * (inst.h(s) - hx) - inst.f1(s) / inst.f(s)

        lo, hi = inst.domain
        for ua, ub in refined:
            s = mp.sinh((ua + ub) / 2)
            for _ in range(_NEWTON_STEPS):
                slope = residual_slope(s)
                if slope == 0:
                    break
                step = residual_full(s) / slope
                candidate = s - step
                if lo is not None and candidate <= to_mpf(lo):
                    break
                if hi is not None and candidate >= to_mpf(hi):
                    break
                s = candidate
                if abs(step) <= abs(s) * mp.eps:
                    break
            roots.append(RayRoot(s, (mp.sinh(ua), mp.sinh(ub)),
                                 residual_full(s), ""))

    roots.sort(key=lambda r: r.s)
    deduped = []
    for root in roots:
        if deduped and abs(root.s - deduped[-1].s) <= mp.mpf("1e-10") * (1 + abs(root.s)):
            continue
        deduped.append(root)
    return _label(deduped)


def _label(roots):
    if len(roots) == 2:
        labels = ["s-", "s+"]
    elif len(roots) == 1:
        labels = ["s+"]
    else:
        labels = [f"s{i}" for i in range(len(roots))]
    return [RayRoot(r.s, r.bracket, r.residual, lab)
            for r, lab in zip(roots, labels)]


def phi_eval(inst: ProblemInstance, x, n, s, precision_bits=None):
    """One ray's contribution Phi(x, n; s) as a SignedLog, with diagnostics."""
    bits = precision_bits if precision_bits is not None else default_precision_bits()
    with workprec(bits):
        xm = to_mpf(x)
        nm = to_mpf(n)
        sm = to_mpf(s)
        fx = inst.f(xm)
        fs = inst.f(sm)
        f1s = inst.f1(sm)
        f2s = inst.f2(sm)
        if fx == 0:
            raise DomainError("f(x) = 0: Phi is undefined at this x")
        if f1s == 0:
            raise RayError("stationary ray")
        transport = f1s ** 2 + nm * fs * f2s
        if transport <= 0:
            raise CausticError("caustic: transport amplitude undefined")

        log_fx = mp.log(abs(fx))
        log_f1s = mp.log(abs(f1s))
        amp = (2 * log_f1s - mp.log(transport)) / 2

        ratio_sign = _sign(f1s) * _sign(fx)
        if ratio_sign < 0:
            if nm != mp.floor(nm):
                raise RayError(
                    "sign undefined for non-integer power of negative base")
            power_sign = -1 if int(nm) % 2 else 1
        else:
            power_sign = 1

        phase = -nm + nm * (log_f1s - log_fx)
        q = log_f1s - log_fx
        p = f1s / fx - (nm + 1) * inst.omega(xm)
        jac = nm * f2s / f1s + inst.omega(sm)

        if fs == 0:
            diag = RayDiagnostics(mp.mpf("-inf"), amp, jac, p, q)
            return SignedLog.zero(), diag
        log_fs = mp.log(abs(fs))
        logmag = log_fs - log_fx + phase + amp
        sign = _sign(fs) * _sign(fx) * power_sign
        diag = RayDiagnostics(log_fs - log_fx + phase, amp, jac, p, q)
        return SignedLog(sign, logmag), diag


def _phi_sum(inst, x, n, precision_bits):
    total = SignedLog.zero()
    per_root = []
    for root in solve_ray_roots(inst, x, n, precision_bits=precision_bits):
        value, diag = phi_eval(inst, x, n, root.s, precision_bits)
        total = total + value
        per_root.append((root, value, diag))
    return total, per_root


_KAPPA_METHODS = ("closed_form", "limit", "numeric_match", "auto")
_CLOSED_FORM = ("log1p", "arctan")


def kappa_for(inst: ProblemInstance, n, method="auto",
              precision_bits=None) -> SignedLog:
    """The matching constant in g_n ~ kappa * sum Phi.

    ``closed_form`` is exact for log1p (kappa = 1) and arctan
    (kappa(n) = 2^{3/2} (n+2)^{-n-3/2} e^n (n+1)!); ``limit`` is its
    n -> infinity value; ``numeric_match`` matches sum Phi against the
    known large-x behaviour of g_n on a geometric ladder of x values and
    Richardson-extrapolates the last two ratios.
    """
    if method not in _KAPPA_METHODS:
        raise CatalogError(f"unknown kappa method {method!r}; use one of "
                           f"{', '.join(_KAPPA_METHODS)}")
    bits = precision_bits if precision_bits is not None else default_precision_bits()
    if method == "auto":
        method = "closed_form" if inst.name in _CLOSED_FORM else "numeric_match"

    with workprec(bits):
        if method == "closed_form":
            if inst.name == "log1p":
                return SignedLog.one()
            if inst.name == "arctan":
                nm = to_mpf(n)
                logk = (mp.mpf(3) / 2 * mp.log(2) - (nm + mp.mpf(3) / 2)
                        * mp.log(nm + 2) + nm + mp.loggamma(nm + 2))
                return SignedLog(1, logk)
            raise CatalogError(
                f"kappa method 'closed_form' unavailable for '{inst.name}'")
        if method == "limit":
            if inst.name == "log1p":
                return SignedLog.one()
            if inst.name == "arctan":
                return SignedLog.from_value(4 * mp.sqrt(mp.pi) * mp.exp(-2))
            raise CatalogError(
                f"kappa method 'limit' unavailable for '{inst.name}'")

    # numeric_match
    if not inst.supports_rays:
        raise CatalogError(
            f"kappa method 'numeric_match' needs ray support ('{inst.name}')")
    inst.omega_tail_params()  # raises when no tail model
    ladder = (100, 1000, 10000)
    ratios = []
    with workprec(bits):
        for xv in ladder:
            predicted = SignedLog.from_value(large_x_leading(inst, n, xv, bits))
            total, _ = _phi_sum(inst, xv, n, bits)
            if total.sign == 0:
                raise RayError("numeric match failed: sum of Phi vanished")
            ratios.append((predicted / total).value)
        x2, x3 = (to_mpf(v) for v in ladder[-2:])
        r2, r3 = ratios[-2:]
        extrapolated = r3 + (r3 - r2) * x2 / (x3 - x2)
        return SignedLog.from_value(extrapolated)


def asymptotic_g(inst: ProblemInstance, x, n, kappa_method="auto",
                 precision_bits=None):
    """kappa * sum of Phi over all found rays, with the per-root breakdown."""
    bits = precision_bits if precision_bits is not None else default_precision_bits()
    kappa = kappa_for(inst, n, kappa_method, bits)
    total, per_root = _phi_sum(inst, x, n, bits)
    with workprec(bits):
        return kappa * total, per_root


def pochhammer(p, n: int):
    """Rising product p (p+1) ... (p+n-1), exact on rational input."""
    if n < 0:
        raise ValueError("n must be non-negative")
    acc = Fraction(1) if isinstance(p, (int, Fraction)) else to_mpf(1)
    for j in range(n):
        acc *= p + j
    return acc


def large_x_leading(inst: ProblemInstance, n: int, x, precision_bits=None):
    """Leading behaviour of g_n(x) for fixed n as x -> infinity.

    Driven by the tail model omega ~ a x^p; the three regimes p < -1,
    p = -1 and p > -1 carry different powers and coefficients.  The
    p = -1 coefficient is computed as the product prod_j [a + (a-1) j],
    which is the (a -> 1)-safe form of (a-1)^n (a/(a-1))_n.
    """
    if n < 0 or int(n) != n:
        raise ValueError("n must be a non-negative integer")
    n = int(n)
    a, p = inst.omega_tail_params()
    bits = precision_bits if precision_bits is not None else default_precision_bits()
    with workprec(bits):
        xm = to_mpf(x)
        if xm <= 0:
            raise ValueError("the large-x model needs x > 0")
        if p < -1:
            coeff = Fraction(a, 1) / (p + 1) * pochhammer(-p - 1, n)
            if n % 2:
                coeff = -coeff
            return to_mpf(coeff) * xm ** to_mpf(p - n + 1)
        if p == -1:
            coeff = Fraction(1)
            for j in range(n):
                coeff *= a + (a - 1) * j
            return to_mpf(coeff) * xm ** (-n)
        return to_mpf(factorial(n) * Fraction(a, 1) ** n) * xm ** to_mpf(p * n)


def _tracked_phase(inst, x, n, ref_s, bits):
    """F on the branch through ref_s, re-solving the rays at (x, n)."""
    roots = solve_ray_roots(inst, x, n, precision_bits=bits)
    best = min(roots, key=lambda r: abs(r.s - ref_s))
    if abs(best.s - ref_s) > (1 + abs(ref_s)) / 2:
        raise RayError("branch lost")
    _, diag = phi_eval(inst, x, n, best.s, bits)
    return diag.F, best.s


def eikonal_residual(inst: ProblemInstance, x, n, branch_label: str,
                     step, precision_bits=None):
    """Finite-difference check of the phase gradients along one branch.

    Differentiates F(x, n) on a 5-point stencil in x and in n (n treated
    as continuous) and compares with the analytic p and q; because
    p - e^q + (n+1) omega(x) = 0 holds identically, small residuals here
    certify the underlying eikonal equation.
    """
    bits = precision_bits if precision_bits is not None else default_precision_bits()
    with workprec(bits):
        xm = to_mpf(x)
        nm = to_mpf(n)
        dm = to_mpf(step)
        if not dm > 0:
            raise RayError("step must be positive")

        roots = solve_ray_roots(inst, xm, nm, precision_bits=bits)
        matches = [r for r in roots if r.branch_label == branch_label]
        if not matches:
            labels = ", ".join(r.branch_label for r in roots)
            raise RayError(f"no branch labeled {branch_label!r} (found: {labels})")
        base = matches[0]
        _, diag = phi_eval(inst, xm, nm, base.s, bits)

        def stencil_derivative(values, h):
            m2, m1, p1, p2 = values
            return (m2 - 8 * m1 + 8 * p1 - p2) / (12 * h)

        fx_vals = []
        ref = base.s
        for k in (-2, -1, 1, 2):
            value, ref_k = _tracked_phase(inst, xm + k * dm, nm, base.s, bits)
            fx_vals.append(value)
        fn_vals = []
        for k in (-2, -1, 1, 2):
            value, _ = _tracked_phase(inst, xm, nm + k * dm, base.s, bits)
            fn_vals.append(value)

        res_p = abs(stencil_derivative(fx_vals, dm) - diag.p)
        res_q = abs(stencil_derivative(fn_vals, dm) - diag.q)
        return res_p, res_q
