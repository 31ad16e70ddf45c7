"""Property-test harness: seeded admissible test functions, batch checks.

Test functions are random piecewise-cubic splines at the level of f^(r):
closed under exact differentiation and integration, so every norm and both
fractional-derivative routes are computable without sampling error.  Batch
items draw their seeds from a spawned seed sequence, so reports are
bit-for-bit reproducible regardless of batch size or scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .analysis import ProblemSpec, SharpResult, exponents, sharp_constant
from .catalog import ExtremalPair
from .funcmodel import (DomainKind, INF, PiecewiseFunction, repeated_integral)
from .marchaud import dk_of_piecewise_deriv, sup_norm_scan
from .quad import integrate_finite, integrate_semi_infinite, default_spec

__all__ = ["TestFunctionSpec", "Report", "generate", "check_inequality",
           "check_relation8", "check_monotone_maximizer", "dk_sup_of_spline",
           "dk_l1_of_spline"]


@dataclass(frozen=True)
class TestFunctionSpec:
    r: int
    domain: DomainKind
    knot_count: int = 8
    support: tuple[float, float] = (0.0, 3.0)
    seed: int = 0
    compact: bool = False          # force f itself compactly supported

    def __post_init__(self):
        if self.r < 1 or self.knot_count < self.r + 3:
            raise ValueError("need r >= 1 and at least r + 3 knots")
        lo, hi = self.support
        if not lo < hi:
            raise ValueError("empty support")
        if self.domain == DomainKind.HALF_LINE and lo < 0:
            raise ValueError("half-line support must start at x >= 0")


def generate(spec: TestFunctionSpec) -> PiecewiseFunction:
    """Deterministic random f with piecewise-cubic f^(r) of compact support.

    On the full line, moment constraints on f^(r) make f constant (hence
    bounded) outside the support; the ``compact`` flag adds the constraints
    and boundary values that make f itself vanish outside.
    """
    rng = np.random.default_rng(spec.seed)
    lo, hi = spec.support
    knots = np.sort(rng.uniform(lo, hi, spec.knot_count - 1))
    knots = np.concatenate(([lo], knots, [hi]))
    # enforce distinct knots
    for i in range(1, len(knots)):
        if knots[i] - knots[i - 1] < 1e-6 * (hi - lo):
            knots[i] = knots[i - 1] + 1e-6 * (hi - lo)
    coeff = rng.uniform(-1.0, 1.0, (len(knots) - 1, 4))

    dom = spec.domain
    pieces = [tuple((float(c), float(j)) for j, c in enumerate(row))
              for row in coeff]
    if dom == DomainKind.FULL_LINE:
        all_pieces = [()] + pieces + [()]
        bks = list(knots)
    else:
        if knots[0] > 0.0:
            all_pieces = [()] + pieces + [()]
            bks = [0.0] + list(knots)
        else:
            all_pieces = pieces + [()]
            bks = list(knots)
    w = PiecewiseFunction(dom, bks, all_pieces)

    # moment constraints so that f stays bounded (full line) or vanishes
    # outside its support (compact): kill int t**j w(t) dt, j = 0..m-1
    m = 0
    if dom == DomainKind.FULL_LINE:
        m = spec.r - 1
    if spec.compact:
        m = spec.r
    if m > 0:
        mids = np.linspace(lo + 0.1 * (hi - lo), hi - 0.1 * (hi - lo), m)
        width = 0.05 * (hi - lo)
        bumps = [PiecewiseFunction.indicator(c - width, c + width, dom)
                 for c in mids]
        A = np.zeros((m, m))
        rhs = np.zeros(m)
        xs_fn = [None] * m
        for j in range(m):
            tj = PiecewiseFunction(dom, w.breakpoints,
                                   tuple(((1.0, float(j)),) for _ in w.pieces))
            rhs[j] = (w * tj).integrate_full()
            for i, bump in enumerate(bumps):
                A[j, i] = (bump * tj).integrate_full()
        try:
            sol = np.linalg.solve(A, rhs)
        except np.linalg.LinAlgError:
            sol = np.linalg.lstsq(A, rhs, rcond=None)[0]
        for i, bump in enumerate(bumps):
            w = w - bump * float(sol[i])

    f = repeated_integral(w, spec.r)
    if dom == DomainKind.HALF_LINE and spec.r == 2:
        # only the right end needs a vanishing slope; absorb it in f'(0)
        slope = w.integrate_full()
        lin = PiecewiseFunction(dom, (0.0,), (((-slope, 1.0),),))
        f = f + lin
    if not spec.compact:
        f = f + float(rng.uniform(-0.5, 0.5))
    return f


def derived_seeds(seed: int, n: int) -> list[int]:
    """Per-item seeds via a spawned seed sequence (scheduling-independent)."""
    ss = np.random.SeedSequence(seed)
    return [int(child.generate_state(1)[0]) for child in ss.spawn(n)]


@dataclass
class Report:
    case: str
    k: float
    s: float | None
    batch: int
    seed: int
    max_ratio: float
    attained_fraction: float
    residuals: list[float] = field(default_factory=list)
    violations: list[int] = field(default_factory=list)
    passed: bool = True

    def to_dict(self) -> dict:
        return {
            "case": self.case, "k": self.k, "s": self.s,
            "batch": self.batch, "seed": self.seed,
            "max_ratio": self.max_ratio,
            "attained_fraction": self.attained_fraction,
            "residuals": self.residuals, "violations": self.violations,
            "pass": self.passed,
        }


def dk_sup_of_spline(f: PiecewiseFunction, k: float, r: int) -> float:
    """sup |D(k) f| for a spline test function (exact pointwise values)."""
    deriv = f
    for _ in range(r):
        deriv = deriv.derivative()
    lo, hi = deriv.support_bounds()
    span = max(hi - lo, 1.0)
    lo_scan = 0.0 if f.domain == DomainKind.HALF_LINE else lo - 4.0 * span
    dk = lambda x: dk_of_piecewise_deriv(deriv, k, r, x)
    sup, _ = sup_norm_scan(dk, lo_scan, hi, coarse=160, refine_iters=50,
                           extra_points=(0.0, lo))
    return sup


def dk_l1_of_spline(f: PiecewiseFunction, k: float, r: int,
                    rel_tol: float = 1e-9) -> float:
    """||D(k) f||_{L1} for a compactly supported spline (r = 1 scope).

    The derivative vanishes right of the support and decays like |x|**(-1-k)
    to the left (the total mass of f^(r) is zero), so the left tail is
    integrated through the 1/x substitution.
    """
    deriv = f
    for _ in range(r):
        deriv = deriv.derivative()
    lo, hi = deriv.support_bounds()
    dk = lambda x: dk_of_piecewise_deriv(deriv, k, r, x)
    spec = default_spec()
    cuts = sorted(set([lo] + [b for b in deriv.breakpoints if lo < b < hi] + [hi]))
    total = 0.0
    for a, b in zip(cuts, cuts[1:]):
        v, _ = integrate_finite(lambda x: abs(dk(x)), a, b,
                                spec.with_exponents(None, k if k > 0 else None))
        total += v
    # left tail: reflect u = lo - x
    v, _ = integrate_semi_infinite(lambda u: abs(dk(lo - u)), 1e-12, 1.0 + k, spec)
    total += v
    return total


def _norms_for(spec: ProblemSpec, f: PiecewiseFunction):
    deriv = f
    for _ in range(spec.r):
        deriv = deriv.derivative()
    nf = f.sup_norm() if spec.p == INF else f.lp_norm(spec.p)
    nd = deriv.sup_norm() if spec.s == INF else deriv.lp_norm(spec.s)
    return nf, nd


def inequality_ratio(spec: ProblemSpec, res: SharpResult,
                     f: PiecewiseFunction) -> float:
    """||D(k) f||_q / (K ||f||_p**mu ||f^(r)||_s**lam)."""
    nf, nd = _norms_for(spec, f)
    if nf <= 0.0 or nd <= 0.0:
        return 0.0
    if spec.q == INF:
        num = dk_sup_of_spline(f, spec.k, spec.r)
    elif spec.q == 1.0:
        num = dk_l1_of_spline(f, spec.k, spec.r)
    else:
        raise ValueError("only q in {1, inf} appear in the catalog")
    return num / (res.K * nf ** res.mu * nd ** res.lam)


def check_inequality(spec: ProblemSpec, batch: int, seed: int,
                     tol: float = 1e-6,
                     support: tuple[float, float] | None = None) -> Report:
    """Random-batch check of the sharp inequality plus extremal attainment.

    ``max_ratio`` is the worst LHS/(K * RHS) over the batch; passing means
    max_ratio <= 1 + tol.  ``attained_fraction`` is the ratio achieved by the
    catalog profile itself (or the best epsilon-family member).
    """
    res = sharp_constant(spec, scan_check=False)
    dom = spec.domain
    compact = spec.p != INF
    if support is None:
        support = (0.0, 3.0) if dom == DomainKind.HALF_LINE else (-1.5, 1.5)
    ratios = []
    for item_seed in derived_seeds(seed, batch):
        f = generate(TestFunctionSpec(spec.r, dom, 8, support, item_seed,
                                      compact=compact))
        ratios.append(inequality_ratio(spec, res, f))
    pair = res.pair
    if pair.family is None and pair.phi is not None:
        attained = inequality_ratio(spec, res, pair.phi)
    elif pair.family is None and pair.phi is None:
        attained = abs(pair.dk_phi(0.0)) / (res.K * pair.phi_sup() ** res.mu)
    else:
        attained = max(inequality_ratio(spec, res, pair.family.member(eps))
                       for eps in pair.family.ladder)
    max_ratio = max(ratios) if ratios else 0.0
    violations = [i for i, r in enumerate(ratios) if r > 1.0 + tol]
    return Report(pair.case.value, spec.k,
                  None if spec.s == INF else spec.s, batch, seed,
                  max_ratio, attained, residuals=ratios,
                  violations=violations, passed=not violations)


def check_relation8(pair: ExtremalPair, batch: int, seed: int,
                    tol: float = 1e-8) -> Report:
    """Defining identity at 0: derivative value vs measure plus kernel term."""
    dom = pair.domain
    support = (0.0, 3.0) if dom == DomainKind.HALF_LINE else (-1.5, 1.5)
    residuals = []
    for item_seed in derived_seeds(seed, batch):
        f = generate(TestFunctionSpec(pair.r, dom, 8, support, item_seed))
        deriv = f
        for _ in range(pair.r):
            deriv = deriv.derivative()
        dk0 = dk_of_piecewise_deriv(deriv, pair.k, pair.r, 0.0)
        resid = pair.relation_residual(f, dk0)
        scale = 1.0 + deriv.sup_norm()
        residuals.append(abs(resid) / scale)
    worst = max(residuals) if residuals else 0.0
    violations = [i for i, rr in enumerate(residuals) if rr > tol]
    return Report(pair.case.value, pair.k,
                  None if pair.s == INF else pair.s, batch, seed,
                  worst, 0.0, residuals=residuals, violations=violations,
                  passed=not violations)


def check_monotone_maximizer(pair: ExtremalPair, tol: float = 1e-8) -> Report:
    """|D(k) phi| must attain its supremum at 0 (the identity's base point)."""
    sup, arg = pair.dk_phi_sup()
    at0 = abs(pair.dk_phi(0.0))
    gap = (sup - at0) / max(at0, 1e-300)
    passed = gap <= tol
    return Report(pair.case.value, pair.k,
                  None if pair.s == INF else pair.s, 1, 0,
                  sup / at0 if at0 else math.inf, at0,
                  residuals=[gap, arg], violations=[] if passed else [0],
                  passed=passed)
