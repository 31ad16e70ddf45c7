"""Sharp constants and the approximation-theoretic quantities they induce.

For a supported problem (domain, r, k, p, q, s) this module builds the
catalog pair, evaluates the sharp constant

    K = ||D(k) phi||_q / ||phi||_p**(1-lambda),   ||phi^(r)||_s = 1,

cross-checks it against the minimised additive bound, and derives the
Stechkin best-approximation value, the optimal-recovery error and the
three-numbers feasibility verdict.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .catalog import CaseId, ExtremalPair, OutOfRangeError, build_case
from .funcmodel import INF, DomainKind, PiecewiseFunction, conjugate_exponent
from .marchaud import dk_of_piecewise_deriv, sup_norm_scan
from .special import gamma

__all__ = [
    "ProblemSpec", "SharpResult", "InfeasibleError", "UnsupportedCaseError",
    "exponents", "resolve_case", "sharp_constant", "additive_coefficients",
    "stechkin_value", "recovery_error", "three_numbers_feasible",
    "ThreeNumbersVerdict", "lower_bound_oracle",
]


class InfeasibleError(ValueError):
    """The exponent constraints admit no finite constant."""


class UnsupportedCaseError(ValueError):
    def __init__(self, msg: str, nearest: str | None = None):
        super().__init__(msg + (f" (nearest supported case: {nearest})" if nearest else ""))
        self.nearest = nearest


@dataclass(frozen=True)
class ProblemSpec:
    """(domain, r, k, p, q, s) with the admissibility constraints built in."""

    domain: DomainKind
    r: int
    k: float
    p: float
    q: float
    s: float

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("r must be >= 1")
        if not 0.0 < self.k < self.r:
            raise ValueError(f"need 0 < k < r, got k={self.k}, r={self.r}")
        if abs(self.k - round(self.k)) < 1e-12:
            raise ValueError("integer k is out of scope")
        for name, v in (("p", self.p), ("q", self.q), ("s", self.s)):
            if v != INF and not v >= 1.0:
                raise ValueError(f"{name} must lie in [1, inf]")
        exponents(self)  # validates the finiteness condition

    def describe(self) -> str:
        fmt = lambda v: "inf" if v == INF else f"{v:g}"
        return (f"domain={self.domain.value} r={self.r} k={self.k:g} "
                f"p={fmt(self.p)} q={fmt(self.q)} s={fmt(self.s)}")


def _inv(v: float) -> float:
    return 0.0 if v == INF else 1.0 / v


def exponents(spec: ProblemSpec) -> tuple[float, float]:
    """(lambda, mu): the unique exponents making the inequality scale-invariant.

    lambda = (k - 1/q + 1/p) / (r - 1/s + 1/p), mu = 1 - lambda; the constant
    is finite only when additionally r/q <= (r-k)/p + k/s.
    """
    num = spec.k - _inv(spec.q) + _inv(spec.p)
    den = spec.r - _inv(spec.s) + _inv(spec.p)
    lam = num / den
    mu = 1.0 - lam
    if not (0.0 <= lam <= 1.0 + 1e-14):
        raise InfeasibleError(f"lambda={lam} outside [0, 1]: no finite constant")
    lhs = spec.r * _inv(spec.q)
    rhs = (spec.r - spec.k) * _inv(spec.p) + spec.k * _inv(spec.s)
    if lhs > rhs + 1e-12:
        raise InfeasibleError(
            f"finiteness condition fails: r/q = {lhs:g} > (r-k)/p + k/s = {rhs:g}")
    return lam, mu


@dataclass
class SharpResult:
    """Sharp constant plus the additive coefficients that generate it."""

    K: float
    lam: float
    mu: float
    A1: float                      # h**-k coefficient at h = 1
    B1: float                      # h**beta coefficient at h = 1
    beta: float                    # exponent of h in the B term
    spec: ProblemSpec
    pair: ExtremalPair
    provenance: str

    def A_of_h(self, h: float) -> float:
        return self.A1 * h ** (-self.spec.k)

    def B_of_h(self, h: float) -> float:
        return self.B1 * h ** self.beta

    def additive_min(self, M0: float, Mr: float) -> float:
        """min over h of A(h) M0 + B(h) Mr (equals K M0**mu Mr**lam)."""
        k, beta = self.spec.k, self.beta
        hstar = (k * self.A1 * M0 / (beta * self.B1 * Mr)) ** (1.0 / (k + beta))
        return self.A_of_h(hstar) * M0 + self.B_of_h(hstar) * Mr

    def to_dict(self) -> dict:
        num = lambda v: None if v == INF else v
        return {
            "case": self.pair.case.value,
            "domain": self.spec.domain.value,
            "r": self.spec.r, "k": self.spec.k,
            "p": num(self.spec.p), "q": num(self.spec.q), "s": num(self.spec.s),
            "lambda": self.lam, "mu": self.mu, "K": self.K,
            "A1": self.A1, "B1": self.B1, "beta": self.beta,
            "params": self.pair.params.to_dict() if self.pair.params else None,
            "provenance": self.provenance,
        }


def resolve_case(spec: ProblemSpec) -> CaseId:
    """Map a problem spec onto the catalog case that realises it."""
    d, r, k, p, q, s = spec.domain, spec.r, spec.k, spec.p, spec.q, spec.s
    if r == 1:
        if p == q == s == 1.0 and d == DomainKind.FULL_LINE:
            return CaseId.R1
        if p == q == INF and 0 < k < 1:
            if s == 1.0:
                raise UnsupportedCaseError(
                    "first-order mixed case with s=1 has an infinite dual "
                    "coefficient", nearest="r1 with p=q=s=1 (Stein form)")
            if s != INF and k >= 1.0 - 1.0 / s:
                raise UnsupportedCaseError(
                    f"first-order mixed case needs k < 1 - 1/s = {1-1/s:g}",
                    nearest="smaller k or larger s")
            return CaseId.R1
        raise UnsupportedCaseError(
            f"no first-order case matches ({spec.describe()})",
            nearest="r1 with p=q=inf, or p=q=s=1 on the full line")
    if r == 2 and p == q == INF:
        if 0 < k < 1:
            return (CaseId.R2_HALFLINE_LOW if d == DomainKind.HALF_LINE
                    else CaseId.R2_FULLLINE_LOW)
        hi = 2.0 - _inv(s)
        if 1 < k < hi and s > 1.0:
            return (CaseId.R2_HALFLINE_HIGH if d == DomainKind.HALF_LINE
                    else CaseId.R2_FULLLINE_HIGH)
        raise UnsupportedCaseError(
            f"k={k} outside (0,1) and (1, 2-1/s)=(1, {hi:g}) for s={s:g}",
            nearest="adjust k into an admissible band")
    raise UnsupportedCaseError(
        f"no catalog case matches ({spec.describe()})",
        nearest="r in {1, 2} with p=q=inf, or the r=1 L1 (Stein) form")


def sharp_constant(spec: ProblemSpec, scan_check: bool = True) -> SharpResult:
    """Sharp constant for a supported spec, with provenance.

    The value comes from |D(k) phi(0)| with the normalisation
    ||phi^(r)||_s = 1; a grid scan confirms the maximiser sits at 0, and the
    minimised additive bound must reproduce the same number (internal
    consistency of the measure and the profile).
    """
    case = resolve_case(spec)
    lam, mu = exponents(spec)
    k, r, s = spec.k, spec.r, spec.s

    if spec.r == 1 and spec.p == spec.q == spec.s == 1.0:
        # Stein-type L1 case: ramp family limit
        pair = build_case(CaseId.R1, k, 1.0, domain=spec.domain)
        K = 2.0 ** (1.0 - k) / gamma(2.0 - k)
        A1 = pair.vee_omega()
        B1 = k / gamma(2.0 - k)        # L1 norm of the kernel
        beta = 1.0 - k
        res = SharpResult(K, lam, mu, A1, B1, beta, spec, pair,
                          provenance="epsilon-limit (closed form)")
        _consistency(res)
        return res

    pair = build_case(case, k, s, domain=spec.domain)
    dk0 = abs(pair.dk_phi(0.0))
    phi_sup = pair.phi_sup()
    K = dk0 / phi_sup ** (1.0 - lam)
    if scan_check:
        sup, arg = pair.dk_phi_sup()
        if sup > dk0 * (1.0 + 1e-9):
            raise ArithmeticError(
                f"|D(k) phi| maximiser at x={arg}, not 0: sup={sup}, at0={dk0}")
    A1 = pair.vee_omega()
    B1 = pair.kernel_dual_norm()
    beta = r - k - _inv(s) if s != 1.0 else r - k - 1.0
    provenance = ("extremal profile" if pair.family is None
                  else "epsilon-limit ramp")
    res = SharpResult(K, lam, mu, A1, B1, beta, spec, pair, provenance)
    _consistency(res)
    return res


def _consistency(res: SharpResult, tol: float = 1e-8):
    """K must equal the h-minimised additive bound at (M0, Mr) = (1, 1)."""
    add = res.additive_min(1.0, 1.0)
    if abs(add - res.K) > tol * max(1.0, res.K):
        raise ArithmeticError(
            f"additive/multiplicative mismatch: min_h = {add!r}, K = {res.K!r}")


def additive_coefficients(spec: ProblemSpec, h: float) -> tuple[float, float]:
    """(A, B) of the sharp additive bound A(h) ||f||_p + B(h) ||f^(r)||_s."""
    if h <= 0:
        raise ValueError("h must be positive")
    res = sharp_constant(spec, scan_check=False)
    return res.A_of_h(h), res.B_of_h(h)


def stechkin_value(spec: ProblemSpec, N: float) -> float:
    """Best approximation of the derivative by operators of norm <= N.

    Closed form lambda (1-lambda)**(1/lambda - 1) K**(1/lambda) N**(1 - 1/lambda);
    only the q = inf scope is supported (where the lower bound is attained).
    """
    if spec.q != INF:
        raise UnsupportedCaseError("best-approximation values need q = inf")
    if N <= 0:
        raise ValueError("N must be positive")
    res = sharp_constant(spec, scan_check=False)
    lam, K = res.lam, res.K
    return lam * (1.0 - lam) ** (1.0 / lam - 1.0) * K ** (1.0 / lam) * N ** (1.0 - 1.0 / lam)


def recovery_error(spec: ProblemSpec, delta: float) -> float:
    """Optimal recovery error from delta-perturbed data: K delta**(1-lambda)."""
    if spec.q != INF:
        raise UnsupportedCaseError("recovery values need q = inf")
    if delta < 0:
        raise ValueError("delta must be >= 0")
    if delta == 0.0:
        return 0.0
    res = sharp_constant(spec, scan_check=False)
    return res.K * delta ** (1.0 - res.lam)


class ThreeNumbersVerdict(str, enum.Enum):
    FEASIBLE = "Feasible"
    INFEASIBLE = "Infeasible"
    BOUNDARY = "Boundary"


def three_numbers_feasible(spec: ProblemSpec, M0: float, Mk: float, Mr: float,
                           band: float = 1e-12) -> tuple[ThreeNumbersVerdict, bool]:
    """Can (||f||, ||D(k) f||, ||f^(r)||) = (M0, Mk, Mr) be realised?

    r = 2, p = q = inf only.  For s > 1 the feasible region is closed
    (Mk <= bound); for s = 1 it is open (strict inequality), so a boundary
    triple is *not* attainable there.  Returns (verdict, attainable) where
    ``attainable`` resolves the boundary case per s.
    """
    if spec.r != 2 or spec.p != INF or spec.q != INF:
        raise UnsupportedCaseError("three-numbers scope is r=2, p=q=inf")
    if min(M0, Mk, Mr) <= 0:
        raise ValueError("all three numbers must be positive")
    res = sharp_constant(spec, scan_check=False)
    bound = res.K * M0 ** (1.0 - res.lam) * Mr ** res.lam
    if abs(Mk - bound) <= band * bound:
        return ThreeNumbersVerdict.BOUNDARY, spec.s > 1.0
    if Mk < bound:
        return ThreeNumbersVerdict.FEASIBLE, True
    return ThreeNumbersVerdict.INFEASIBLE, False


# ---------------------------------------------------------------------------
# brute-force lower-bound oracle
# ---------------------------------------------------------------------------

def lower_bound_oracle(spec: ProblemSpec, restarts: int = 20, iters: int = 40,
                       knots: int = 12, seed: int = 0) -> float:
    """Lower bound on K by coordinate ascent over random spline shapes.

    The objective ratio ||D(k) f||_inf / (||f||_inf**mu ||f^(r)||_s**lam) is
    invariant under scaling and dilation, so the search is unconstrained over
    the shape coefficients of f^(r) on a fixed knot grid.
    """
    from .verify import TestFunctionSpec, generate

    lam, mu = exponents(spec)
    rng = np.random.default_rng(seed)
    best = 0.0
    for _ in range(restarts):
        coeffs = rng.standard_normal(knots)

        def ratio(cv: np.ndarray) -> float:
            f = _spline_from_coeffs(spec, cv)
            if f is None:
                return 0.0
            return _inequality_ratio(spec, f, 1.0, lam, mu)

        cur = ratio(coeffs)
        step = 0.5
        for _ in range(iters):
            improved = False
            for j in range(knots):
                for sgn in (+1.0, -1.0):
                    trial = coeffs.copy()
                    trial[j] += sgn * step
                    v = ratio(trial)
                    if v > cur:
                        coeffs, cur = trial, v
                        improved = True
                        break
            if not improved:
                step *= 0.5
                if step < 1e-3:
                    break
        best = max(best, cur)
    return best


def _spline_from_coeffs(spec: ProblemSpec, coeffs: np.ndarray):
    """Bounded f on the spec's domain whose f^(r) is the hat-coefficient spline."""
    from .funcmodel import repeated_integral

    n = len(coeffs)
    dom = spec.domain
    knots = np.linspace(0.0, 1.0, n + 1)
    pieces = []
    bks = list(knots)
    if dom == DomainKind.FULL_LINE:
        all_pieces = [()] + [((float(c), 0.0),) for c in coeffs] + [()]
    else:
        all_pieces = [((float(c), 0.0),) for c in coeffs] + [()]
    w = PiecewiseFunction(dom, bks, all_pieces)
    if dom == DomainKind.FULL_LINE and spec.r >= 1:
        # bounded f needs total mass zero for the top derivative
        mass = w.integrate_full()
        corr = PiecewiseFunction(dom, (0.0, 1.0), ((), ((mass, 0.0),), ()))
        w = w - corr
    f = repeated_integral(w, spec.r)
    return f


def _inequality_ratio(spec: ProblemSpec, f: PiecewiseFunction, scale: float,
                      lam: float, mu: float) -> float:
    deriv = f
    for _ in range(spec.r):
        deriv = deriv.derivative()
    try:
        nf = f.sup_norm() if spec.p == INF else f.lp_norm(spec.p)
        nd = deriv.sup_norm() if spec.s == INF else deriv.lp_norm(spec.s)
    except Exception:
        return 0.0
    if nf <= 0 or nd <= 0:
        return 0.0
    lo, hi = f.support_bounds()
    span = max(hi - lo, 1.0)
    lo_scan = 0.0 if spec.domain == DomainKind.HALF_LINE else lo - 3 * span
    dk = lambda x: dk_of_piecewise_deriv(deriv, spec.k, spec.r, x)
    sup, _ = sup_norm_scan(dk, lo_scan, hi, coarse=100, refine_iters=40,
                           extra_points=(0.0,))
    return sup / (nf ** mu * nd ** lam)
