"""Measure/kernel constructions shared by the solvers and the catalog.

Each extremal case is driven by a pair (omega, tau):

* ``omega`` generates the bounded-variation measure; scaled by 1/Gamma(r-k)
  it becomes the dual measure of the defining point identity.
* ``tau = Gamma(r-k) * (R_{r-k} - omega^{[r-1]})`` is the compactly supported
  dual kernel; the extremal profile has r-th derivative |tau|**(s'-1) sign tau
  up to normalisation.

All tau functions are exact piecewise power sums; the sign layout on the
support is returned alongside because every downstream quadrature splits
there.  Total masses are arranged so tau vanishes identically beyond the
support: int_{support} omega = value matching the kernel tail, which is what
keeps the dual norms finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .funcmodel import DomainKind, PiecewiseFunction, StieltjesMeasure
from .special import gamma

__all__ = [
    "CaseKernel",
    "r1_kernel", "r2_halfline_low_kernel", "r2_halfline_high_kernel",
    "r2_fullline_low_kernel", "r2_fullline_high_kernel",
]


@dataclass(frozen=True)
class CaseKernel:
    """tau, its sign layout, and the generating measure of one case."""

    domain: DomainKind
    r: int
    k: float
    tau: PiecewiseFunction              # Gamma(r-k) * (R_{r-k} - Omega^{[r-1]})
    sign_regions: tuple[tuple[float, float, int], ...]
    omega: StieltjesMeasure             # d(Omega), already divided by Gamma
    support: tuple[float, float]
    singular_exponent_at0: float        # tau ~ x**e at 0+, e<0 means singular

    def tau_signed_power(self, q: float):
        """Pointwise |tau|**q sign(tau) as a callable (vectorised)."""
        tau = self.tau

        def w(x):
            import numpy as np
            v = tau.values(np.atleast_1d(np.asarray(x, dtype=float)))
            out = np.sign(v) * np.abs(v) ** q
            return out if hasattr(x, "__len__") else float(out[0])

        return w


def _tail_density(domain: DomainKind, start: float, coef: float, k: float,
                  scale: float) -> PiecewiseFunction:
    """Density of d/dx [coef * x**-k] / scale on (start, inf)."""
    term = ((-coef * k / scale, -k - 1.0),)
    if domain == DomainKind.HALF_LINE:
        return PiecewiseFunction(domain, (0.0, start), ((), term))
    return PiecewiseFunction(domain, (start,), ((), term))


def r1_kernel(domain: DomainKind, k: float, h: float = 1.0) -> CaseKernel:
    """First-order case, k in (0,1): plateau measure on (0,h) plus x**-k tail.

    tau_h(x) = x**-k - h**-k on (0, h), single-signed (positive).
    """
    if not 0.0 < k < 1.0:
        raise ValueError(f"k must lie in (0, 1), got {k}")
    g1 = gamma(1.0 - k)
    hk = h ** (-k)
    tau_pieces_half = (((1.0, -k), (-hk, 0.0)), ())
    if domain == DomainKind.HALF_LINE:
        tau = PiecewiseFunction(domain, (0.0, h), tau_pieces_half)
    else:
        tau = PiecewiseFunction(domain, (0.0, h), ((),) + tau_pieces_half)
    jumps = ((0.0, hk / g1),)
    density = _tail_density(domain, h, 1.0, k, g1)
    omega = StieltjesMeasure(domain, jumps, density)
    return CaseKernel(domain, 1, k, tau, ((0.0, h, +1),), omega, (0.0, h), -k)


def r2_halfline_low_kernel(k: float, h: float = 1.0) -> CaseKernel:
    """Half-line, r = 2, k in (0,1): tau_h(x) = x**(1-k) - h**-k x on [0, h)."""
    if not 0.0 < k < 1.0:
        raise ValueError(f"k must lie in (0, 1), got {k}")
    dom = DomainKind.HALF_LINE
    g1, g2 = gamma(1.0 - k), gamma(2.0 - k)
    hk = h ** (-k)
    tau = PiecewiseFunction(dom, (0.0, h), (((1.0, 1.0 - k), (-hk, 1.0)), ()))
    jumps = ((0.0, hk / g2), (h, hk * (1.0 / g1 - 1.0 / g2)))
    density = _tail_density(dom, h, 1.0, k, g1)
    omega = StieltjesMeasure(dom, jumps, density)
    return CaseKernel(dom, 2, k, tau, ((0.0, h, +1),), omega, (0.0, h), 1.0 - k)


def r2_halfline_high_kernel(k: float, a: float, b: float) -> CaseKernel:
    """Half-line, r = 2, k in (1, 2): two plateaus on (0,a], (a,1) plus tail.

    The plateau heights are pinned so that int_0^1 omega = 1, which forces
    tau(x) = 0 for x >= 1 and tau(b) = 0; tau is positive on (0, b) and
    negative on (b, 1) for admissible (a, b).
    """
    if not 1.0 < k < 2.0:
        raise ValueError(f"k must lie in (1, 2), got {k}")
    if not (0.0 < a <= b < 1.0):
        raise ValueError("need 0 < a <= b < 1")
    dom = DomainKind.HALF_LINE
    g2 = gamma(2.0 - k)
    p2 = (1.0 - b ** (1.0 - k)) / (1.0 - b)          # negative for k > 1
    p1 = (1.0 - p2 * (1.0 - a)) / a                  # makes int_0^1 omega = 1
    tau = PiecewiseFunction(dom, (0.0, a, 1.0), (
        ((1.0, 1.0 - k), (-p1, 1.0)),
        ((1.0, 1.0 - k), (-1.0 + p2, 0.0), (-p2, 1.0)),
        (),
    ))
    jumps = ((0.0, p1 / g2), (a, (p2 - p1) / g2), (1.0, ((1.0 - k) - p2) / g2))
    density = _tail_density(dom, 1.0, (1.0 - k), k, g2)
    omega = StieltjesMeasure(dom, jumps, density)
    regions = ((0.0, b, +1), (b, 1.0, -1))
    return CaseKernel(dom, 2, k, tau, regions, omega, (0.0, 1.0), 1.0 - k)


def r2_fullline_low_kernel(k: float, p: float, z: float | None = None) -> CaseKernel:
    """Full line, r = 2, k in (0,1): plateau 1/(1+p) on (-p, 1] plus tail.

    tau = -(x+p)/(1+p) on (-p, 0], x**(1-k) - (x+p)/(1+p) on (0, 1];
    negative on (-p, z), positive on (z, 1) where z is tau's interior root.
    """
    if not 0.0 < k < 1.0:
        raise ValueError(f"k must lie in (0, 1), got {k}")
    if p < 0.0:
        raise ValueError("p must be >= 0")
    dom = DomainKind.FULL_LINE
    g2 = gamma(2.0 - k)
    c = 1.0 / (1.0 + p)
    if p == 0.0:
        tau = PiecewiseFunction(dom, (0.0, 1.0), (
            (), ((1.0, 1.0 - k), (-c, 1.0)), ()))
    else:
        tau = PiecewiseFunction(dom, (-p, 0.0, 1.0), (
            (),
            ((-c, 1.0), (-c * p, 0.0)),
            ((1.0, 1.0 - k), (-c, 1.0), (-c * p, 0.0)),
            (),
        ))
    jumps = ((-p, c / g2), (1.0, ((1.0 - k) - c) / g2))
    density = _tail_density(dom, 1.0, (1.0 - k), k, g2)
    omega = StieltjesMeasure(dom, jumps, density)
    if z is None:
        z = _fullline_low_sign_change(k, p)
    regions = ((-p, z, -1), (z, 1.0, +1)) if p > 0 else ((0.0, z, -1), (z, 1.0, +1))
    return CaseKernel(dom, 2, k, tau, regions, omega, (-p, 1.0), 1.0)


def _fullline_low_sign_change(k: float, p: float) -> float:
    """Interior root z of x**(1-k) = (x+p)/(1+p) on (0, 1)."""
    if p == 0.0:
        return 0.0
    c = 1.0 / (1.0 + p)

    def tau_pos(x: float) -> float:
        return x ** (1.0 - k) - c * (x + p)

    # bracket: tau < 0 at 0+, and > 0 at the critical point x* (interior max)
    xstar = ((1.0 - k) * (1.0 + p)) ** (1.0 / k)
    xstar = min(xstar, 1.0 - 1e-15)
    lo, hi = 1e-300, xstar
    if tau_pos(xstar) <= 0.0:
        # degenerate: no positive hump (p at the top of its range)
        return 1.0
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if tau_pos(mid) < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-16:
            break
    return 0.5 * (lo + hi)


def r2_fullline_high_kernel(k: float, a: float, b: float, p: float) -> CaseKernel:
    """Full line, r = 2, k in (1, 2): plateaus on [-p, a], [a, 1] plus tail.

    Plateau heights are pinned by int_{-p}^1 omega = 1 (tau vanishes beyond 1
    and at b); tau is negative on (-p, 0), positive on (0, b), negative on
    (b, 1).
    """
    if not 1.0 < k < 2.0:
        raise ValueError(f"k must lie in (1, 2), got {k}")
    if not (0.0 < a <= b < 1.0) or p < 0.0:
        raise ValueError("need (a, b) in the admissible triangle and p >= 0")
    dom = DomainKind.FULL_LINE
    g2 = gamma(2.0 - k)
    p2 = (1.0 - b ** (1.0 - k)) / (1.0 - b)
    p1 = (1.0 - p2 * (1.0 - a)) / (a + p)
    tau = PiecewiseFunction(dom, (-p, 0.0, a, 1.0), (
        (),
        ((-p1, 1.0), (-p1 * p, 0.0)),
        ((1.0, 1.0 - k), (-p1, 1.0), (-p1 * p, 0.0)),
        ((1.0, 1.0 - k), (-1.0 + p2, 0.0), (-p2, 1.0)),
        (),
    )) if p > 0 else PiecewiseFunction(dom, (0.0, a, 1.0), (
        (),
        ((1.0, 1.0 - k), (-p1, 1.0)),
        ((1.0, 1.0 - k), (-1.0 + p2, 0.0), (-p2, 1.0)),
        (),
    ))
    jumps = ((-p, p1 / g2), (a, (p2 - p1) / g2), (1.0, ((1.0 - k) - p2) / g2))
    density = _tail_density(dom, 1.0, (1.0 - k), k, g2)
    omega = StieltjesMeasure(dom, jumps, density)
    regions = ((-p, 0.0, -1), (0.0, b, +1), (b, 1.0, -1)) if p > 0 else \
        ((0.0, b, +1), (b, 1.0, -1))
    return CaseKernel(dom, 2, k, tau, regions, omega, (-p, 1.0), 1.0 - k)
