"""Solvers for the extremal-parameter equations of the r = 2 cases.

Each case pins its free parameters by zeroing moment integrals of the signed
power tau_(s') = |tau|**(s'-1) sign(tau) over the kernel support:

* half line, k in (1, 2-1/s): two unknowns (a, b);
    F1 = int_a^1 tau_(s') dt = 0   (profile slope vanishes beyond the support)
    F2 = int_0^1 t tau_(s') dt = 0 (profile heights align with the tail)
* full line, k in (0, 1): one unknown p;
    Z  = int_{-p}^1 tau_(s') dt = 0
  For s = 1 the equation degenerates to equioscillation of tau itself:
  max tau = -min tau, i.e. k**k (1-k)**(1-k) (1+p) = (2p)**k.
* full line, k in (1, 2-1/s): three unknowns (a, b, p);
    Z1 = int_{-p}^a tau_(s'), Z2 = int_a^1 tau_(s'), Z3 = int_{-p}^1 t tau_(s').

All roots are found by guarded bisection: the monotonicity used for nesting
is asserted on the sampled values and any violation aborts loudly (that kind
of failure always means a transcription error in tau, not a numerics issue).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .funcmodel import conjugate_exponent
from .kernels import (CaseKernel, r2_fullline_high_kernel, r2_fullline_low_kernel,
                      r2_halfline_high_kernel, r2_halfline_low_kernel)
from .quad import tanh_sinh

__all__ = [
    "ExtremalParams", "signed_power", "solve_system_halfline_high",
    "solve_equation_fullline_low", "solve_system_fullline_high",
    "BracketError", "MonotonicityError",
]


class BracketError(RuntimeError):
    """No sign change found: the requested (k, s) violates a case hypothesis."""


class MonotonicityError(RuntimeError):
    """Sampled values contradict the monotonicity the solver relies on."""


@dataclass
class ExtremalParams:
    case_id: str
    k: float
    s: float
    a: float | None = None
    b: float | None = None
    p: float | None = None
    residuals: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    def max_residual(self) -> float:
        return max((abs(v) for v in self.residuals.values()), default=0.0)

    def to_dict(self) -> dict:
        return {
            "case": self.case_id, "k": self.k,
            "s": None if self.s == math.inf else self.s,
            "a": self.a, "b": self.b, "p": self.p,
            "residuals": self.residuals, "notes": self.notes,
        }


def signed_power(x: float, q: float) -> float:
    """|x|**q * sign(x); q = 0 gives sign(x) (the s = inf degeneration)."""
    if q < 0:
        raise ValueError("q must be >= 0")
    if x == 0.0:
        return 0.0
    if q == 0.0:
        return math.copysign(1.0, x)
    return math.copysign(abs(x) ** q, x)


# ---------------------------------------------------------------------------
# moment integrals of tau_(s') over the sign-split support
# ---------------------------------------------------------------------------

def _moment(ck: CaseKernel, sprime: float, moment: int,
            lo: float, hi: float, level: int = 5) -> float:
    """int_lo^hi t**moment |tau|**(s'-1) sign(tau) dt.

    Split at the sign layout of tau; within a constant-sign stretch the
    integrand only misbehaves algebraically at the endpoints (a fractional
    zero of tau, or the x**(1-k) blow-up at 0+ of the high cases), which
    tanh-sinh quadrature absorbs.  s = inf (s' = 1) degenerates to signed
    lengths and is evaluated in closed form.
    """
    if lo >= hi:
        return 0.0
    q = sprime - 1.0
    if q < 0:
        raise ValueError("conjugate exponent below 1")
    e0 = ck.singular_exponent_at0
    if e0 < 0 and -e0 * q >= 1.0 and lo <= 0.0 < hi:
        raise BracketError("|tau|**(s'-1) not integrable at 0 for these (k, s)")
    total = 0.0
    for (rlo, rhi, sgn) in ck.sign_regions:
        a, b = max(lo, rlo), min(hi, rhi)
        if a >= b:
            continue
        if q == 0.0:
            total += sgn * ((b - a) if moment == 0 else 0.5 * (b * b - a * a))
            continue
        tau = ck.tau
        # split at tau's own breakpoints: kinks interior to a DE panel would
        # degrade its exponential convergence to algebraic
        cuts = [a] + [c for c in tau.breakpoints if a < c < b] + [b]

        def fvec(t, _sgn=sgn, _m=moment):
            v = np.abs(tau.values(t)) ** q * _sgn
            return v * t ** _m if _m else v

        for a0, b0 in zip(cuts, cuts[1:]):
            total += tanh_sinh(fvec, a0, b0, level)
    return total


def _bisect(fun, lo: float, hi: float, increasing: bool | None = None,
            tol: float = 5e-15, max_iter: int = 220, label: str = "") -> float:
    flo, fhi = fun(lo), fun(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise BracketError(f"{label}: no sign change on [{lo}, {hi}] "
                           f"(f={flo:.3g}, {fhi:.3g})")
    if increasing is not None:
        want = 1.0 if increasing else -1.0
        if math.copysign(1.0, fhi - flo) != want:
            raise MonotonicityError(
                f"{label}: endpoint values f({lo})={flo:.3g}, f({hi})={fhi:.3g} "
                f"contradict the claimed monotonicity")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = fun(mid)
        if fm == 0.0 or hi - lo < tol * max(1.0, abs(mid)):
            return mid
        if (fm < 0.0) == (flo < 0.0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    return 0.5 * (lo + hi)


def _check_k_range_high(k: float, s: float, label: str):
    if not 1.0 < s:
        raise ValueError(f"{label}: need s in (1, inf], got {s}")
    hi = 2.0 - (0.0 if s == math.inf else 1.0 / s)
    if not 1.0 < k < hi:
        raise ValueError(f"{label}: k must lie in (1, 2 - 1/s) = (1, {hi}), got k={k}")


# ---------------------------------------------------------------------------
# half line, k in (1, 2 - 1/s)
# ---------------------------------------------------------------------------

def solve_system_halfline_high(k: float, s: float,
                               verify_level: int = 7) -> ExtremalParams:
    """Unique (a, b) with F1(a, b) = F2(a, b) = 0 on {0 < a <= b < 1}.

    Nested bisection: F2(a, .) = 0 is solved for b (strictly increasing in
    b), then F1 along that curve is driven to zero in a (decreasing).
    """
    _check_k_range_high(k, s, "halfline-high")
    sp = conjugate_exponent(s)

    def F(a: float, b: float, moment: int) -> float:
        ck = r2_halfline_high_kernel(k, a, b)
        lo = a if moment == 0 else 0.0
        return _moment(ck, sp, moment, lo, 1.0)

    def b_of_a(a: float) -> float:
        f = lambda b: F(a, b, 1)
        lo, hi = max(a, 1e-9), 1.0 - 1e-12
        if f(lo) >= 0.0:
            return lo  # rho(a) < a: outside the nested branch, clamp
        return _bisect(f, lo, hi, increasing=True, label="F2 in b")

    def outer(a: float) -> float:
        return F(a, b_of_a(a), 0)

    grid = np.linspace(1e-6, 1.0 - 1e-6, 41)
    vals = [outer(a) for a in grid]
    a_root = None
    for (a0, v0), (a1, v1) in zip(zip(grid, vals), zip(grid[1:], vals[1:])):
        if v0 == 0.0:
            a_root = a0
            break
        if v0 * v1 < 0.0:
            if not v0 > v1:
                raise MonotonicityError("F1 along the F2-curve should decrease in a")
            a_root = _bisect(outer, a0, a1, increasing=False, label="F1 outer")
            break
    if a_root is None:
        raise BracketError("halfline-high: no root of F1 along the F2 zero-curve")
    b_root = b_of_a(a_root)
    res = {
        "F1": _moment(r2_halfline_high_kernel(k, a_root, b_root), sp, 0,
                      a_root, 1.0, level=verify_level),
        "F2": _moment(r2_halfline_high_kernel(k, a_root, b_root), sp, 1,
                      0.0, 1.0, level=verify_level),
    }
    return ExtremalParams("r2-halfline-high", k, s, a=a_root, b=b_root,
                          residuals=res)


# ---------------------------------------------------------------------------
# full line, k in (0, 1)
# ---------------------------------------------------------------------------

def solve_equation_fullline_low(k: float, s: float,
                                verify_level: int = 7) -> ExtremalParams:
    """Root of Z_s(p) on [0, k/(1-k)] (s > 1), or tau equioscillation (s = 1).

    Z_s is strictly decreasing on the interval.  At s = 1 the dual norm is
    the sup norm and the profile is a two-slope ramp; sharpness then requires
    the positive maximum of tau to match |tau(0)|, i.e.
    k**k (1-k)**(1-k) (1+p) - (2p)**k = 0.  The superficially similar closed
    form with (2k)**(1-k) in place of (2p)**k fails the extremality
    conditions and is recorded in the notes, not used.
    """
    if not 0.0 < k < 1.0:
        raise ValueError(f"fullline-low: k must lie in (0,1), got {k}")
    if not 1.0 <= s:
        raise ValueError(f"fullline-low: need s in [1, inf], got {s}")
    p_hi = k / (1.0 - k)

    if s == 1.0:
        cst = k ** k * (1.0 - k) ** (1.0 - k)
        fun = lambda p: cst * (1.0 + p) - (2.0 * p) ** k
        p_root = _bisect(fun, 1e-14, p_hi, increasing=False, label="equioscillation")
        xstar = 2.0 * p_root * (1.0 - k) / k
        c = 1.0 / (1.0 + p_root)
        res = {
            "equioscillation": (xstar ** (1.0 - k) - c * (xstar + p_root)) - c * p_root,
        }
        notes = {
            "ramp_right_edge": xstar,
            "alternate_closed_form_root": (2.0 * k) ** (1.0 - k) / cst - 1.0,
            "alternate_closed_form": "k^k (1-k)^(1-k) (1+p) = (2k)^(1-k)",
            "flag": "alternate closed form fails extremality conditions; "
                    "equioscillation root used",
        }
        return ExtremalParams("r2-fullline-low", k, s, p=p_root,
                              residuals=res, notes=notes)

    sp = conjugate_exponent(s)

    def Z(p: float) -> float:
        ck = r2_fullline_low_kernel(k, p)
        return _moment(ck, sp, 0, -p, 1.0)

    p_root = _bisect(Z, 1e-12, p_hi - 1e-14, increasing=False, label="Z_s")
    res = {"Z": _moment(r2_fullline_low_kernel(k, p_root), sp, 0, -p_root, 1.0,
                        level=verify_level)}
    return ExtremalParams("r2-fullline-low", k, s, p=p_root, residuals=res)


# ---------------------------------------------------------------------------
# full line, k in (1, 2 - 1/s)
# ---------------------------------------------------------------------------

def solve_system_fullline_high(k: float, s: float,
                               verify_level: int = 7) -> ExtremalParams:
    """A solution (a, b, p) of Z1 = Z2 = Z3 = 0 with 0 < a <= b < 1, p >= 0.

    Nested solves per the existence argument: b = gamma(a) from Z2 (Z2 is
    p-free, increasing in b), then p = delta(a) from Z1 (decreasing in p),
    then the first root of Z3(a, gamma(a), delta(a)) scanning a upward.
    """
    _check_k_range_high(k, s, "fullline-high")
    sp = conjugate_exponent(s)

    def Z(a: float, b: float, p: float, which: int) -> float:
        ck = r2_fullline_high_kernel(k, a, b, p)
        if which == 1:
            return _moment(ck, sp, 0, -p, a)
        if which == 2:
            return _moment(ck, sp, 0, a, 1.0)
        return _moment(ck, sp, 1, -p, 1.0)

    def b_of_a(a: float) -> float:
        f = lambda b: Z(a, b, 0.0, 2)
        lo, hi = max(a, 1e-9), 1.0 - 1e-12
        if f(lo) >= 0.0:
            return lo
        return _bisect(f, lo, hi, increasing=True, label="Z2 in b")

    def p_of_ab(a: float, b: float) -> float:
        f = lambda p: Z(a, b, p, 1)
        p_hi = 0.5
        if f(1e-15) <= 0.0:
            return 0.0
        while f(p_hi) > 0.0:
            p_hi *= 2.0
            if p_hi > 64.0:
                raise BracketError("Z1: no sign change while widening the p bracket")
        return _bisect(f, 1e-15, p_hi, increasing=False, label="Z1 in p")

    def outer(a: float) -> float:
        b = b_of_a(a)
        p = p_of_ab(a, b)
        return Z(a, b, p, 3)

    grid = np.linspace(1e-4, 1.0 - 1e-4, 37)
    a_root = None
    prev = None
    for a in grid:
        v = outer(a)
        if prev is not None and prev[1] * v < 0.0:
            a_root = _bisect(outer, prev[0], a, label="Z3 outer")
            break
        if v == 0.0:
            a_root = a
            break
        prev = (a, v)
    if a_root is None:
        raise BracketError("fullline-high: no root of Z3 along the nested curve")
    b_root = b_of_a(a_root)
    p_root = p_of_ab(a_root, b_root)
    ckr = r2_fullline_high_kernel(k, a_root, b_root, p_root)
    res = {
        "Z1": _moment(ckr, sp, 0, -p_root, a_root, level=verify_level),
        "Z2": _moment(ckr, sp, 0, a_root, 1.0, level=verify_level),
        "Z3": _moment(ckr, sp, 1, -p_root, 1.0, level=verify_level),
    }
    return ExtremalParams("r2-fullline-high", k, s, a=a_root, b=b_root, p=p_root,
                          residuals=res)
