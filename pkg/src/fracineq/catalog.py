"""Catalog of extremal measure/profile pairs for the sharp inequalities.

Eight cases are constructible; each yields an :class:`ExtremalPair` holding

* ``omega``   -- the Stieltjes measure of the dual point identity,
* ``kernel``  -- R_{r-k} - Omega^{[r-1]} (exact piecewise power sum),
* ``phi``     -- the extremal profile, normalised so its r-th derivative has
  unit L_s norm; for s = 1 the profile is a limiting ramp and an epsilon
  family of admissible Steklov smoothings is attached instead.

Profiles are exact piecewise power sums whenever s'-1 is a small integer
(s = inf, 2, 3/2, ...); otherwise a quadrature-backed profile evaluates
phi, its derivatives and the fractional derivative through tanh-sinh panels
split at the kernel's sign changes and kinks.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .funcmodel import (DomainKind, PiecewiseFunction, StieltjesMeasure,
                        conjugate_exponent, INF)
from .kernels import (CaseKernel, r1_kernel, r2_fullline_high_kernel,
                      r2_fullline_low_kernel, r2_halfline_high_kernel,
                      r2_halfline_low_kernel)
from .marchaud import dk_of_jump_measure, sup_norm_scan
from .quad import tanh_sinh
from .solvers import (ExtremalParams, solve_equation_fullline_low,
                      solve_system_fullline_high, solve_system_halfline_high)
from .special import gamma

__all__ = ["CaseId", "EpsilonFamily", "ExtremalPair", "build_case",
           "build_r1", "build_r2_halfline_low", "build_r2_halfline_high",
           "build_r2_fullline_low", "build_r2_fullline_high",
           "OutOfRangeError", "case_metadata", "plot_panels"]


class OutOfRangeError(ValueError):
    """(k, s) outside the admissible range of the requested case."""


class CaseId(str, enum.Enum):
    GEISBERG_FULLLINE = "geisberg-fullline"
    ARESTOV_HALFLINE_LOW = "arestov-halfline-low"
    ARESTOV_HALFLINE_HIGH = "arestov-halfline-high"
    R1 = "r1"
    R2_HALFLINE_LOW = "r2-halfline-low"
    R2_HALFLINE_HIGH = "r2-halfline-high"
    R2_FULLLINE_LOW = "r2-fullline-low"
    R2_FULLLINE_HIGH = "r2-fullline-high"

    @classmethod
    def parse(cls, text: str) -> "CaseId":
        key = text.strip().lower()
        for c in cls:
            if c.value == key:
                return c
        # r1 convenience spellings used by the CLI
        aliases = {"r1-fullline": cls.R1, "r1-halfline": cls.R1, "r1-stein": cls.R1}
        if key in aliases:
            return aliases[key]
        raise OutOfRangeError(f"unknown case {text!r}; known: "
                              + ", ".join(c.value for c in cls)
                              + ", r1-fullline, r1-halfline, r1-stein")


def case_metadata(case: CaseId) -> dict:
    """Admissibility and attribution for each case."""
    meta = {
        CaseId.GEISBERG_FULLLINE: dict(domain=DomainKind.FULL_LINE, r=2,
                                       k_range="(0,1)", s_fixed=INF,
                                       source="Geisberg / Arestov (uniform norms)"),
        CaseId.ARESTOV_HALFLINE_LOW: dict(domain=DomainKind.HALF_LINE, r=2,
                                          k_range="(0,1)", s_fixed=INF,
                                          source="Arestov (uniform norms)"),
        CaseId.ARESTOV_HALFLINE_HIGH: dict(domain=DomainKind.HALF_LINE, r=2,
                                           k_range="(1,2)", s_fixed=INF,
                                           source="Arestov (uniform norms)"),
        CaseId.R1: dict(domain=None, r=1, k_range="(0,1)", s_fixed=None,
                        source="first-order lattice case (Stein-type at s=1)"),
        CaseId.R2_HALFLINE_LOW: dict(domain=DomainKind.HALF_LINE, r=2,
                                     k_range="(0,1)", s_fixed=None,
                                     source="half-line, low smoothness"),
        CaseId.R2_HALFLINE_HIGH: dict(domain=DomainKind.HALF_LINE, r=2,
                                      k_range="(1,2-1/s)", s_fixed=None,
                                      source="half-line, high smoothness"),
        CaseId.R2_FULLLINE_LOW: dict(domain=DomainKind.FULL_LINE, r=2,
                                     k_range="(0,1)", s_fixed=None,
                                     source="full line, low smoothness"),
        CaseId.R2_FULLLINE_HIGH: dict(domain=DomainKind.FULL_LINE, r=2,
                                      k_range="(1,2-1/s)", s_fixed=None,
                                      source="full line, high smoothness"),
    }
    return meta[case]


@dataclass
class EpsilonFamily:
    """Recipe eps -> admissible profile approaching the limiting extremal."""

    recipe: Callable[[float], PiecewiseFunction]
    ladder: tuple[float, ...] = (1e-1, 1e-2, 1e-3, 1e-4)
    description: str = ""

    def member(self, eps: float) -> PiecewiseFunction:
        if eps <= 0:
            raise ValueError("eps must be positive")
        return self.recipe(eps)


def _refined_chunks(ck: CaseKernel) -> list[tuple[float, float, int]]:
    """Sign regions split further at tau's own breakpoints."""
    out = []
    for (rlo, rhi, sgn) in ck.sign_regions:
        cuts = [rlo] + [c for c in ck.tau.breakpoints if rlo < c < rhi] + [rhi]
        for a, b in zip(cuts, cuts[1:]):
            if b > a:
                out.append((a, b, sgn))
    return out


class DualProfile:
    """phi built from w = |tau|**(s'-1) sign(tau); quadrature-backed.

    r = 1:  phi(x) = W_tot / 2 - W(x)
    r = 2:  phi(x) = A + B x + x W(x) - V(x)
    with W(x) = int_L^x w, V(x) = int_L^x t w, and case constants (A, B).
    All evaluations split tanh-sinh panels at the kernel's sign changes and
    kinks, so endpoint behaviour (fractional zeros, the x**(1-k) blow-up at
    the origin of the high cases) never meets a panel interior.
    """

    def __init__(self, ck: CaseKernel, s: float, r: int, anchor: float):
        self.ck = ck
        self.s = s
        self.r = r
        self.q = conjugate_exponent(s) - 1.0
        self.L, self.U = ck.support
        self.anchor = anchor
        self.chunks = _refined_chunks(ck)
        self._level = 6
        # cumulative moments at chunk boundaries
        W = [0.0]
        V = [0.0]
        for (a, b, sgn) in self.chunks:
            W.append(W[-1] + self._chunk_int(a, b, sgn, 0))
            V.append(V[-1] + self._chunk_int(a, b, sgn, 1))
        self._Wc, self._Vc = W, V
        self.W_tot, self.V_tot = W[-1], V[-1]
        ia = self._anchor_index(anchor)
        self.W_anchor, self.V_anchor = self.W(anchor), self.V(anchor)
        if r == 2:
            self.A = 0.5 * self.V_anchor
            self.B = -self.W_anchor if ck.domain == DomainKind.HALF_LINE else 0.0
        else:
            self.A = 0.5 * self.W_tot
            self.B = 0.0
        self._wnorm = None

    def _anchor_index(self, x: float) -> int:
        for i, (a, b, _) in enumerate(self.chunks):
            if x <= b:
                return i
        return len(self.chunks) - 1

    def w_values(self, t):
        v = self.ck.tau.values(np.asarray(t, dtype=float))
        if self.q == 0.0:
            return np.sign(v)
        return np.sign(v) * np.abs(v) ** self.q

    def _chunk_int(self, a: float, b: float, sgn: int, moment: int,
                   weight=None) -> float:
        if b <= a:
            return 0.0

        def fvec(t):
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                v = np.abs(self.ck.tau.values(t)) ** self.q if self.q else np.ones_like(t)
                v = v * sgn
                if moment:
                    v = v * t ** moment
                if weight is not None:
                    v = v * weight(t)
            return v

        return tanh_sinh(fvec, a, b, self._level)

    def _cumulative(self, x: float, moment: int) -> float:
        cum = self._Wc if moment == 0 else self._Vc
        if x <= self.L:
            return 0.0
        if x >= self.U:
            return cum[-1]
        total = 0.0
        for i, (a, b, sgn) in enumerate(self.chunks):
            if x >= b:
                total = cum[i + 1]
                continue
            if x > a:
                total += self._chunk_int(a, x, sgn, moment)
            break
        return total

    def W(self, x: float) -> float:
        return self._cumulative(x, 0)

    def V(self, x: float) -> float:
        return self._cumulative(x, 1)

    def phi_raw(self, x: float) -> float:
        if self.r == 1:
            return self.A - self.W(x)
        return self.A + self.B * x + x * self.W(x) - self.V(x)

    def dphi_raw(self, x: float) -> float:
        return -self.w_at(x) if self.r == 1 else self.B + self.W(x)

    def w_at(self, x: float) -> float:
        return float(self.w_values(np.array([x]))[0])

    def w_norm_s(self) -> float:
        """L_s norm of w, i.e. (int |tau|**s')**(1/s)."""
        if self._wnorm is None:
            sp = self.q + 1.0
            total = 0.0
            for (a, b, sgn) in self.chunks:
                def fvec(t):
                    return np.abs(self.ck.tau.values(t)) ** sp
                total += tanh_sinh(fvec, a, b, self._level)
            self._wnorm = total ** (1.0 / self.s) if self.s != INF else 1.0
            self._tau_sprime_integral = total
        return self._wnorm

    def tau_norm_sprime(self) -> float:
        self.w_norm_s()
        sp = self.q + 1.0
        return self._tau_sprime_integral ** (1.0 / sp)

    def dk_raw(self, x: float, k: float) -> float:
        """(1/Gamma(r-k)) int_max(x,L)^U (u-x)**(r-1-k) w(u) du."""
        e = self.r - 1.0 - k
        total = 0.0
        for (a, b, sgn) in self.chunks:
            a = max(a, x)
            if a >= b:
                continue
            total += self._chunk_int(a, b, sgn, 0,
                                     weight=lambda u: (u - x) ** e)
        return total / gamma(self.r - k)


@dataclass
class ExtremalPair:
    """One catalog entry: measure, kernel, normalised profile, parameters."""

    case: CaseId
    domain: DomainKind
    r: int
    k: float
    s: float
    h: float
    omega: StieltjesMeasure
    kernel: PiecewiseFunction            # R_{r-k} - Omega^{[r-1]}
    ck: CaseKernel
    phi: PiecewiseFunction | None        # normalised profile (None: numeric only)
    scale: float                         # 1 / ||w||_{L_s}
    profile: DualProfile | None = None
    family: EpsilonFamily | None = None
    params: ExtremalParams | None = None
    ramp_jumps: tuple | None = None      # (x_j, J_j) of phi^{(r)} for s = 1 ramps
    notes: dict = field(default_factory=dict)

    # -- basic quantities ------------------------------------------------

    def vee_omega(self) -> float:
        return self.omega.total_variation()

    def sprime(self) -> float:
        return conjugate_exponent(self.s)

    def kernel_dual_norm(self) -> float:
        """||R_{r-k} - Omega^{[r-1]}||_{L_{s'}}; sup norm when s = 1."""
        if self.s == 1.0:
            return self.kernel.sup_norm()
        if self.profile is not None:
            return self.profile.tau_norm_sprime() / gamma(self.r - self.k)
        return self.kernel.lp_norm(self.sprime())

    def phi_value(self, x: float) -> float:
        if self.phi is not None:
            return self.phi.evaluate(x)
        return self.scale * self.profile.phi_raw(x)

    def phi_sup(self) -> float:
        if self.phi is not None:
            return self.phi.sup_norm()
        lo, hi = self.ck.support
        v, _ = sup_norm_scan(self.phi_value, lo, hi, coarse=120,
                             extra_points=(0.0, lo, hi))
        return v

    def phi_deriv_r_norm(self) -> float:
        """||phi^{(r)}||_{L_s}; 1 by construction, recomputed for checking."""
        if self.ramp_jumps is not None:
            return sum(abs(j) for _, j in self.ramp_jumps)
        if self.profile is not None:
            return self.scale * self.profile.w_norm_s()
        d = self.phi
        for _ in range(self.r):
            d = d.derivative()
        return d.lp_norm(self.s)

    def dk_phi(self, x: float) -> float:
        """Fractional derivative of the profile at x."""
        if self.ramp_jumps is not None:
            return dk_of_jump_measure(self.ramp_jumps, self.k, self.r, x)
        return self.scale * self.profile.dk_raw(x, self.k)

    def dk_phi_at0(self) -> float:
        return self.dk_phi(0.0)

    def dk_phi_sup(self) -> tuple[float, float]:
        lo, hi = self.ck.support
        span = hi - lo
        lo_scan = (0.0 if self.domain == DomainKind.HALF_LINE
                   else lo - 3.0 * span - 2.0)
        extras = (0.0,) + tuple(self.kernel.breakpoints)
        return sup_norm_scan(self.dk_phi, lo_scan, hi, coarse=160,
                             extra_points=extras)

    # -- extremality conditions -------------------------------------------

    def condition10_residual(self) -> float:
        """int phi dOmega - (var Omega) * ||phi||_inf (should vanish)."""
        lo, hi = self.ck.support
        jump_part = sum(h * self.phi_value(x) for x, h in self.omega.jumps)
        tail_value = self.phi_value(hi + 1.0)
        dens_mass = (self.omega.density.integrate_full()
                     if self.omega.density is not None else 0.0)
        lhs = jump_part + tail_value * dens_mass
        return lhs - self.vee_omega() * self.phi_sup()

    def condition11_residual(self, level: int = 7) -> float:
        """(-1)^r int kernel phi^{(r)} - ||kernel||_{E'} ||phi^{(r)}||_E."""
        g = gamma(self.r - self.k)
        if self.ramp_jumps is not None:
            lhs = (-1.0) ** self.r * sum(j * self.kernel.evaluate(x)
                                          for x, j in self.ramp_jumps)
            return lhs - self.kernel_dual_norm() * self.phi_deriv_r_norm()
        pr = self.profile
        total = 0.0
        sp = pr.q + 1.0
        for (a, b, sgn) in pr.chunks:
            def fvec(t):
                return np.abs(self.ck.tau.values(t)) ** sp
            total += tanh_sinh(fvec, a, b, level)
        lhs = self.scale * total / g       # (-1)^r phi^{(r)} = scale * w
        return lhs - self.kernel_dual_norm() * self.phi_deriv_r_norm()

    def relation_residual(self, f: PiecewiseFunction, dk_f0: float) -> float:
        """Defect of the defining identity at 0 for a test function f."""
        rhs = (-1.0) ** self.r
        deriv = f
        for _ in range(self.r):
            deriv = deriv.derivative()
        kern_part = (self.kernel * deriv).integrate_full()
        return dk_f0 - self.omega.integrate(f) - rhs * kern_part

    def admissible_phi(self, eps: float | None = None) -> PiecewiseFunction:
        """A profile usable as a test function (family member if s = 1)."""
        if self.family is not None:
            return self.family.member(eps if eps is not None else 1e-4)
        if self.phi is None:
            raise ValueError("numeric profile: no piecewise representation")
        return self.phi

    def to_dict(self) -> dict:
        return {
            "case": self.case.value, "domain": self.domain.value,
            "r": self.r, "k": self.k,
            "s": None if self.s == INF else self.s, "h": self.h,
            "vee_omega": self.vee_omega(),
            "kernel_dual_norm": self.kernel_dual_norm(),
            "phi_sup": self.phi_sup(),
            "params": self.params.to_dict() if self.params else None,
            "phi": self.phi.to_dict() if self.phi is not None else None,
            "omega": self.omega.to_dict(),
            "notes": self.notes,
        }


# ---------------------------------------------------------------------------
# profile materialisation
# ---------------------------------------------------------------------------

_EXACT_Q_MAX = 6


def _exact_w(ck: CaseKernel, q: int) -> PiecewiseFunction:
    """w = |tau|**q sign(tau) as an exact piecewise power sum (integer q)."""
    from .funcmodel import _ps_pow_int, _ps_scale  # internal power-sum helpers

    chunks = _refined_chunks(ck)
    dom = ck.domain
    bks: list[float] = []
    pieces: list[tuple] = []
    if dom == DomainKind.FULL_LINE:
        pieces.append(())
        bks.append(chunks[0][0])
    else:
        bks.append(0.0)
        if chunks[0][0] > 0.0:
            pieces.append(())
            bks.append(chunks[0][0])
    for (a, b, sgn) in chunks:
        if bks[-1] != a:
            bks.append(a)
            pieces.append(())
        tau_piece = ck.tau.pieces[ck.tau._index(0.5 * (a + b))]
        w_piece = _ps_pow_int(tau_piece, q) if q else ((1.0, 0.0),)
        if sgn < 0 and q % 2 == 0:
            w_piece = _ps_scale(w_piece, -1.0)
        if q == 0:
            w_piece = ((float(sgn), 0.0),)
        pieces.append(w_piece)
        bks.append(b)
    pieces.append(())
    if dom == DomainKind.HALF_LINE:
        bks = bks[:-1] + [bks[-1]]
        return PiecewiseFunction(dom, bks, pieces)
    return PiecewiseFunction(dom, bks, pieces)


def _exact_phi(ck: CaseKernel, w: PiecewiseFunction, r: int,
               anchor: float) -> tuple[PiecewiseFunction, float, float]:
    """Materialise phi from exact w; returns (phi_raw, A, B)."""
    W = w.antiderivative()
    if r == 1:
        A = 0.5 * W.evaluate(ck.support[1] + 1.0)
        phi = PiecewiseFunction.constant(A, ck.domain) - W
        return phi, A, 0.0
    x_fn = PiecewiseFunction(ck.domain, w.breakpoints,
                             tuple(((1.0, 1.0),) for _ in w.pieces))
    V = (x_fn * w).antiderivative()
    WA, VA = W.evaluate(anchor), V.evaluate(anchor)
    A = 0.5 * VA
    B = -WA if ck.domain == DomainKind.HALF_LINE else 0.0
    phi = (PiecewiseFunction.constant(A, ck.domain)
           + x_fn.__class__(ck.domain, w.breakpoints,
                            tuple(((B, 1.0),) for _ in w.pieces))
           + x_fn * W - V)
    return phi, A, B


def _clamp_tail_constant(phi: PiecewiseFunction, support_hi: float) -> PiecewiseFunction:
    """Replace the right tail by its exact constant limit (kills ~1e-16 x terms)."""
    val = phi.evaluate(support_hi)
    pieces = list(phi.pieces)
    pieces[-1] = ((val, 0.0),) if val != 0.0 else ()
    return PiecewiseFunction(phi.domain, phi.breakpoints, pieces)


def _w_norm_exact(ck: CaseKernel, w: PiecewiseFunction, s: float) -> float:
    """||w||_{L_s} = (int |tau|**(q+1))**(1/s) via exact integration."""
    if s == INF:
        return 1.0
    from .funcmodel import _ps_pow_int, _ps_primitive_eval
    q = conjugate_exponent(s) - 1.0
    qq = int(round(q))
    total = 0.0
    for (a, b, sgn) in _refined_chunks(ck):
        tau_piece = ck.tau.pieces[ck.tau._index(0.5 * (a + b))]
        p = _ps_pow_int(tau_piece, qq + 1)
        total += abs(_ps_primitive_eval(p, a, b))
    return total ** (1.0 / s)


def _make_profile_pair(case: CaseId, ck: CaseKernel, s: float, r: int,
                       anchor: float, h: float,
                       params: ExtremalParams | None = None,
                       notes: dict | None = None) -> ExtremalPair:
    g = gamma(r - k_of(ck))
    kernel = ck.tau * (1.0 / g)
    sp = conjugate_exponent(s)
    q = sp - 1.0
    profile = DualProfile(ck, s, r, anchor)
    exact = (s == INF) or (abs(q - round(q)) < 1e-12 and 0 <= round(q) <= _EXACT_Q_MAX)
    phi = None
    if exact:
        w = _exact_w(ck, int(round(q)))
        phi_raw, _, _ = _exact_phi(ck, w, r, anchor)
        scale = 1.0 / _w_norm_exact(ck, w, s)
        phi = _clamp_tail_constant(phi_raw * scale, ck.support[1])
    else:
        scale = 1.0 / profile.w_norm_s()
    return ExtremalPair(case, ck.domain, r, k_of(ck), s, h, ck.omega, kernel,
                        ck, phi, scale, profile=profile, params=params,
                        notes=notes or {})


def k_of(ck: CaseKernel) -> float:
    return ck.k


# ---------------------------------------------------------------------------
# case builders
# ---------------------------------------------------------------------------

def _check(cond: bool, msg: str):
    if not cond:
        raise OutOfRangeError(msg)


def build_r1(domain: DomainKind, k: float, s: float, h: float = 1.0) -> ExtremalPair:
    """First-order case: mixed uniform/L_s for s > 1, Stein L_1 form at s = 1.

    Mixed case needs k < 1 - 1/s; the s = 1 pair is the L_1-norm inequality
    on the full line with the Steklov family of indicator smoothings.
    """
    _check(0.0 < k < 1.0, f"k must lie in (0,1), got {k}")
    _check(h > 0, "h must be positive")
    if s == 1.0:
        _check(domain == DomainKind.FULL_LINE,
               "the s=1 first-order (Stein-type) case lives on the full line")
        ck = r1_kernel(domain, k, h)
        g1 = gamma(1.0 - k)
        kernel = ck.tau * (1.0 / g1)
        chi = PiecewiseFunction.indicator(0.0, h)
        fam = EpsilonFamily(lambda eps: chi.steklov(eps),
                            description="Steklov smoothing of the unit plateau")
        return ExtremalPair(CaseId.R1, domain, 1, k, s, h, ck.omega, kernel,
                            ck, chi, 1.0, family=fam,
                            ramp_jumps=((0.0, 1.0), (h, -1.0)),
                            notes={"mode": "stein-L1"})
    _check(s > 1.0, f"s must lie in [1, inf], got {s}")
    _check(k < 1.0 - 1.0 / s if s != INF else True,
           f"mixed first-order case needs k < 1 - 1/s, got k={k}, s={s}")
    ck = r1_kernel(domain, k, h)
    return _make_profile_pair(CaseId.R1, ck, s, 1, anchor=h, h=h)


def build_r2_halfline_low(k: float, s: float, h: float = 1.0) -> ExtremalPair:
    """Half line, r = 2, k in (0,1), s in [1, inf]."""
    _check(0.0 < k < 1.0, f"k must lie in (0,1), got {k}")
    _check(h > 0, "h must be positive")
    ck = r2_halfline_low_kernel(k, h)
    if s == 1.0:
        # ramp of slope -1 ending where tau attains its maximum
        xe = (1.0 - k) ** (1.0 / k) * h
        M = 0.5 * xe
        ramp = PiecewiseFunction(DomainKind.HALF_LINE, (0.0, xe),
                                 (((M, 0.0), (-1.0, 1.0)), ((-M, 0.0),)))
        fam = EpsilonFamily(lambda eps: ramp.steklov(eps * xe),
                            description="Steklov smoothing of the limiting ramp")
        kernel = ck.tau * (1.0 / gamma(2.0 - k))
        return ExtremalPair(CaseId.R2_HALFLINE_LOW, ck.domain, 2, k, s, h,
                            ck.omega, kernel, ck, ramp, 1.0, family=fam,
                            ramp_jumps=((xe, 1.0),),
                            notes={"mode": "ramp-limit", "ramp_edge": xe})
    _check(s > 1.0, f"s must lie in [1, inf], got {s}")
    return _make_profile_pair(CaseId.R2_HALFLINE_LOW, ck, s, 2, anchor=h, h=h)


def build_r2_halfline_high(k: float, s: float) -> ExtremalPair:
    """Half line, r = 2, 1 < s <= inf, k in (1, 2 - 1/s)."""
    _check(s > 1.0, f"s must lie in (1, inf], got {s}")
    hi = 2.0 - (0.0 if s == INF else 1.0 / s)
    _check(1.0 < k < hi, f"k must lie in (1, 2-1/s) = (1, {hi}), got {k}")
    params = solve_system_halfline_high(k, s)
    ck = r2_halfline_high_kernel(k, params.a, params.b)
    return _make_profile_pair(CaseId.R2_HALFLINE_HIGH, ck, s, 2,
                              anchor=params.a, h=1.0, params=params)


def build_r2_fullline_low(k: float, s: float) -> ExtremalPair:
    """Full line, r = 2, k in (0,1), s in [1, inf]."""
    _check(0.0 < k < 1.0, f"k must lie in (0,1), got {k}")
    _check(s >= 1.0, f"s must lie in [1, inf], got {s}")
    params = solve_equation_fullline_low(k, s)
    if s == 1.0:
        p = params.p
        xe = params.notes["ramp_right_edge"]
        ck = r2_fullline_low_kernel(k, p)
        M = 0.25 * xe
        ramp = PiecewiseFunction(DomainKind.FULL_LINE, (0.0, xe),
                                 (((M, 0.0),), ((M, 0.0), (-0.5, 1.0)), ((-M, 0.0),)))
        fam = EpsilonFamily(lambda eps: ramp.steklov(eps * max(xe, 1e-6)),
                            description="Steklov smoothing of the limiting ramp")
        kernel = ck.tau * (1.0 / gamma(2.0 - k))
        return ExtremalPair(CaseId.R2_FULLLINE_LOW, ck.domain, 2, k, s, 1.0,
                            ck.omega, kernel, ck, ramp, 1.0, family=fam,
                            params=params,
                            ramp_jumps=((0.0, -0.5), (xe, 0.5)),
                            notes={"mode": "ramp-limit", "ramp_edge": xe})
    ck = r2_fullline_low_kernel(k, params.p)
    return _make_profile_pair(CaseId.R2_FULLLINE_LOW, ck, s, 2,
                              anchor=1.0, h=1.0, params=params)


def build_r2_fullline_high(k: float, s: float) -> ExtremalPair:
    """Full line, r = 2, 1 < s <= inf, k in (1, 2 - 1/s)."""
    _check(s > 1.0, f"s must lie in (1, inf], got {s}")
    hi = 2.0 - (0.0 if s == INF else 1.0 / s)
    _check(1.0 < k < hi, f"k must lie in (1, 2-1/s) = (1, {hi}), got {k}")
    params = solve_system_fullline_high(k, s)
    ck = r2_fullline_high_kernel(k, params.a, params.b, params.p)
    return _make_profile_pair(CaseId.R2_FULLLINE_HIGH, ck, s, 2,
                              anchor=params.a, h=1.0, params=params)


def build_case(case: CaseId | str, k: float, s: float | None = None,
               h: float = 1.0, domain: DomainKind | str | None = None) -> ExtremalPair:
    """Dispatch to the case builders; each checks its own (k, s) range."""
    if isinstance(case, str):
        text = case.strip().lower()
        if text in ("r1-fullline", "r1-stein"):
            domain = DomainKind.FULL_LINE
            if text == "r1-stein":
                s = 1.0
        elif text == "r1-halfline":
            domain = DomainKind.HALF_LINE
        case = CaseId.parse(case)
    if isinstance(domain, str):
        domain = DomainKind.parse(domain)
    if case == CaseId.GEISBERG_FULLLINE:
        _check(s in (None, INF), "this case is the uniform-norm (s=inf) instance")
        pair = build_r2_fullline_low(k, INF)
        pair.case = case
        return pair
    if case == CaseId.ARESTOV_HALFLINE_LOW:
        _check(s in (None, INF), "this case is the uniform-norm (s=inf) instance")
        pair = build_r2_halfline_low(k, INF, h)
        pair.case = case
        return pair
    if case == CaseId.ARESTOV_HALFLINE_HIGH:
        _check(s in (None, INF), "this case is the uniform-norm (s=inf) instance")
        pair = build_r2_halfline_high(k, INF)
        pair.case = case
        return pair
    if s is None:
        raise OutOfRangeError("this case needs an explicit s")
    if case == CaseId.R1:
        dom = domain or (DomainKind.FULL_LINE if s == 1.0 else DomainKind.HALF_LINE)
        return build_r1(dom, k, s, h)
    if case == CaseId.R2_HALFLINE_LOW:
        return build_r2_halfline_low(k, s, h)
    if case == CaseId.R2_HALFLINE_HIGH:
        return build_r2_halfline_high(k, s)
    if case == CaseId.R2_FULLLINE_LOW:
        return build_r2_fullline_low(k, s)
    if case == CaseId.R2_FULLLINE_HIGH:
        return build_r2_fullline_high(k, s)
    raise OutOfRangeError(f"unhandled case {case}")


def plot_panels(pair: ExtremalPair, num: int = 400) -> dict:
    """Three-panel figure data: scaled kernel vs cumulative, tau, phi.

    Columns: x; R = Gamma(r-k) R_{r-k}(x); omega1 = R - tau (the (r-1)-fold
    integral of the generating function, in the same scaling); tau; phi.
    """
    lo, hi = pair.ck.support
    span = hi - lo
    x_lo = 0.0 if pair.domain == DomainKind.HALF_LINE else lo - 0.35 * span
    xs = np.linspace(x_lo, hi + 0.6 * span, num)
    # Gamma(r-k) * R_{r-k}(x) = x**(r-k-1) on x > 0
    R = np.where(xs > 0, np.maximum(xs, 1e-300) ** (pair.r - pair.k - 1.0), 0.0)
    tau = pair.ck.tau.values(xs)
    omega1 = R - tau
    phi = np.array([pair.phi_value(x) for x in xs])
    return {"x": xs, "R": R, "omega1": omega1, "tau": tau, "phi": phi}
