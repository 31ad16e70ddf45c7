"""Exact models of the functions this package manipulates.

A :class:`PiecewiseFunction` stores finitely many pieces, each a sum of real
power terms ``c * x**e``.  Polynomials are the special case of integer
exponents; fractional powers such as ``x**(1-k)`` are kept symbolically so
that differentiation, integration, dilation and norms stay exact wherever the
calculus is closed-form.  Non-integer exponents are only admitted on pieces
living in ``x >= 0``.

A :class:`StieltjesMeasure` is a finite signed measure given by point jumps
plus an absolutely continuous part with piecewise-power density; it supports
total variation, integration of bounded piecewise functions (with algebraic
tails handled in closed form), and the cumulative function needed to build
repeated integrals.
"""

from __future__ import annotations

import bisect
import enum
import json
import math
from dataclasses import dataclass

import numpy as np

from .quad import DivergenceError, QuadratureSpec, default_spec, integrate_finite

__all__ = [
    "DomainKind", "NormSpec", "PiecewiseFunction", "StieltjesMeasure",
    "repeated_integral", "conjugate_exponent", "INF",
]

INF = math.inf

_EXP_TOL = 1e-12


class DomainKind(enum.Enum):
    FULL_LINE = "R"
    HALF_LINE = "R+"

    @classmethod
    def parse(cls, text: str) -> "DomainKind":
        key = text.strip().lower()
        if key in ("r", "fullline", "full-line", "real", "full"):
            return cls.FULL_LINE
        if key in ("r+", "halfline", "half-line", "half"):
            return cls.HALF_LINE
        raise ValueError(f"unknown domain {text!r} (use 'r' or 'r+')")


def conjugate_exponent(s: float) -> float:
    """Conjugate exponent with exact 1 <-> inf duality."""
    if s == INF:
        return 1.0
    if s == 1.0:
        return INF
    if s <= 1.0:
        raise ValueError(f"exponent must be in [1, inf], got {s}")
    return s / (s - 1.0)


@dataclass(frozen=True)
class NormSpec:
    """An L_s exponent; infinity is the exact value math.inf, never a float stand-in."""

    exponent: float

    def __post_init__(self):
        if self.exponent != INF and not 1.0 <= self.exponent:
            raise ValueError(f"exponent must lie in [1, inf], got {self.exponent}")

    @property
    def is_inf(self) -> bool:
        return self.exponent == INF

    @property
    def conjugate(self) -> "NormSpec":
        return NormSpec(conjugate_exponent(self.exponent))

    @classmethod
    def parse(cls, text) -> "NormSpec":
        if isinstance(text, (int, float)):
            return cls(float(text))
        key = str(text).strip().lower()
        if key in ("inf", "infinity", "oo"):
            return cls(INF)
        return cls(float(key))


# ---------------------------------------------------------------------------
# power-sum helpers: a "ps" is a tuple of (coefficient, exponent) pairs
# ---------------------------------------------------------------------------

def _ps_normalize(terms) -> tuple:
    merged: list[list[float]] = []
    for c, e in terms:
        c = float(c)
        e = float(e)
        if c == 0.0:
            continue
        for t in merged:
            if abs(t[1] - e) <= _EXP_TOL:
                t[0] += c
                break
        else:
            merged.append([c, e])
    merged = [(c, e) for c, e in merged if c != 0.0]
    merged.sort(key=lambda t: t[1])
    return tuple(merged)


def _is_int(e: float) -> bool:
    return abs(e - round(e)) <= _EXP_TOL


def _ps_is_poly(ps) -> bool:
    return all(_is_int(e) and e >= -_EXP_TOL for _, e in ps)


def _ps_eval(ps, x: float) -> float:
    total = 0.0
    for c, e in ps:
        if _is_int(e):
            total += c * x ** int(round(e))
        elif x > 0.0:
            total += c * x ** e
        elif x == 0.0:
            total += 0.0 if e > 0 else math.copysign(math.inf, c)
        else:
            raise ValueError(f"fractional power x**{e} undefined at x={x} < 0")
    return total


def _ps_eval_vec(ps, x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x, dtype=float)
    for c, e in ps:
        if _is_int(e) and round(e) >= 0:
            out += c * x ** int(round(e))
        else:
            with np.errstate(divide="ignore", invalid="ignore"):
                term = np.where(x > 0, c * np.power(np.maximum(x, 1e-300), e), 0.0)
                term = np.where(x == 0, np.where(e > 0, 0.0, np.copysign(np.inf, c)), term)
            out += term
    return out


def _ps_derivative(ps) -> tuple:
    return _ps_normalize((c * e, e - 1.0) for c, e in ps if e != 0.0)


def _ps_antiderivative(ps) -> tuple:
    for _, e in ps:
        if abs(e + 1.0) <= _EXP_TOL:
            raise ArithmeticError("antiderivative of x**-1 not representable here")
    return _ps_normalize((c / (e + 1.0), e + 1.0) for c, e in ps)


def _ps_primitive_eval(ps, a: float, b: float) -> float:
    """Exact integral of the power sum over [a, b] (0 <= a allowed with e > -1)."""
    total = 0.0
    for c, e in ps:
        if abs(e + 1.0) <= _EXP_TOL:
            raise ArithmeticError("integral of x**-1 not representable here")
        ee = e + 1.0

        def pw(x: float) -> float:
            if x == 0.0:
                if ee > 0:
                    return 0.0
                raise DivergenceError(f"x**{e} not integrable down to 0")
            if _is_int(ee):
                return x ** int(round(ee))
            return x ** ee

        total += c / ee * (pw(b) - pw(a))
    return total


def _ps_scale(ps, a: float) -> tuple:
    return _ps_normalize((c * a, e) for c, e in ps)


def _ps_add(p1, p2) -> tuple:
    return _ps_normalize(list(p1) + list(p2))


def _ps_mul(p1, p2) -> tuple:
    return _ps_normalize((c1 * c2, e1 + e2) for c1, e1 in p1 for c2, e2 in p2)


def _ps_pow_int(ps, m: int) -> tuple:
    out = ((1.0, 0.0),)
    for _ in range(m):
        out = _ps_mul(out, ps)
    return out


def _ps_dilate(ps, h: float, amplitude: float) -> tuple:
    # amplitude * f(x / h):  c x**e -> amplitude c h**-e x**e
    return _ps_normalize((amplitude * c * h ** (-e), e) for c, e in ps)


def _ps_shift(ps, dx: float) -> tuple:
    """Return the power sum of x -> f(x + dx); polynomial pieces only."""
    if dx == 0.0:
        return _ps_normalize(ps)
    out = []
    for c, e in ps:
        if not (_is_int(e) and e >= -_EXP_TOL):
            raise ArithmeticError("shift needs polynomial pieces")
        n = int(round(e))
        for j in range(n + 1):
            out.append((c * math.comb(n, j) * dx ** (n - j), float(j)))
    return _ps_normalize(out)


def _ps_min_exponent(ps) -> float:
    return min((e for _, e in ps), default=0.0)


def _ps_max_exponent(ps) -> float:
    return max((e for _, e in ps), default=0.0)


def _poly_roots(ps, lo: float, hi: float) -> list[float]:
    deg = int(round(_ps_max_exponent(ps)))
    coeffs = np.zeros(deg + 1)
    for c, e in ps:
        coeffs[deg - int(round(e))] = c
    if deg == 0:
        return []
    rr = np.roots(coeffs)
    out = [float(r.real) for r in rr if abs(r.imag) < 1e-9 and lo - 1e-12 < r.real < hi + 1e-12]
    return sorted(set(min(max(r, lo), hi) for r in out))


def _numeric_roots(ps, lo: float, hi: float, samples: int = 96) -> list[float]:
    if not ps:
        return []
    xs = np.linspace(lo, hi, samples)
    if xs[0] == 0.0 and _ps_min_exponent(ps) < 0:
        xs[0] = lo + (hi - lo) * 1e-12
    ys = _ps_eval_vec(ps, xs)
    roots = []
    for i in range(len(xs) - 1):
        y0, y1 = ys[i], ys[i + 1]
        if not (np.isfinite(y0) and np.isfinite(y1)):
            continue
        if y0 == 0.0:
            roots.append(float(xs[i]))
        if y0 * y1 < 0:
            a, b = float(xs[i]), float(xs[i + 1])
            fa = y0
            for _ in range(200):
                m = 0.5 * (a + b)
                fm = _ps_eval(ps, m)
                if fm == 0.0 or (b - a) < 1e-15 * max(1.0, abs(m)):
                    break
                if fa * fm < 0:
                    b = m
                else:
                    a, fa = m, fm
            roots.append(0.5 * (a + b))
    return sorted(set(roots))


def _ps_roots(ps, lo: float, hi: float) -> list[float]:
    if not ps:
        return []
    if _ps_is_poly(ps):
        return _poly_roots(ps, lo, hi)
    return _numeric_roots(ps, lo, hi)


# ---------------------------------------------------------------------------
# PiecewiseFunction
# ---------------------------------------------------------------------------

class PiecewiseFunction:
    """Piecewise power-sum function on the line or half-line.

    Full line with breakpoints ``b_0 < ... < b_{n-1}`` has ``n + 1`` pieces
    covering ``(-inf, b_0), [b_0, b_1), ..., [b_{n-1}, +inf)``; the first piece
    must be a constant (the left tail).  Half line requires ``b_0 == 0`` and
    has ``n`` pieces covering ``[0, b_1), ..., [b_{n-1}, +inf)``.  Values at a
    breakpoint follow the right-limit convention.
    """

    __slots__ = ("domain", "breakpoints", "pieces")

    def __init__(self, domain: DomainKind, breakpoints, pieces):
        bks = tuple(float(b) for b in breakpoints)
        if any(b1 <= b0 for b0, b1 in zip(bks, bks[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        ps = tuple(_ps_normalize(p) for p in pieces)
        if domain == DomainKind.FULL_LINE:
            if len(ps) != len(bks) + 1:
                raise ValueError("full line needs len(pieces) == len(breakpoints) + 1")
        else:
            if not bks or bks[0] != 0.0:
                raise ValueError("half line representation starts at breakpoint 0.0")
            if len(ps) != len(bks):
                raise ValueError("half line needs len(pieces) == len(breakpoints)")
        self.domain = domain
        self.breakpoints = bks
        self.pieces = ps
        for i, p in enumerate(ps):
            lo, _ = self._region(i)
            if lo < 0 and not all(_is_int(e) for _, e in p):
                raise ValueError("fractional powers are only allowed on x >= 0 pieces")

    # -- structure ----------------------------------------------------------

    def _region(self, i: int) -> tuple[float, float]:
        bks = self.breakpoints
        if self.domain == DomainKind.FULL_LINE:
            lo = -math.inf if i == 0 else bks[i - 1]
            hi = math.inf if i == len(bks) else bks[i]
        else:
            lo = bks[i]
            hi = bks[i + 1] if i + 1 < len(bks) else math.inf
        return lo, hi

    @property
    def num_pieces(self) -> int:
        return len(self.pieces)

    @property
    def left_tail(self) -> tuple:
        if self.domain != DomainKind.FULL_LINE:
            raise ValueError("left tail only defined on the full line")
        return self.pieces[0]

    @property
    def right_tail(self) -> tuple:
        return self.pieces[-1]

    def support_bounds(self) -> tuple[float, float]:
        """Smallest closed interval outside which the function is exactly zero."""
        lo, hi = None, None
        for i, p in enumerate(self.pieces):
            if p:
                a, b = self._region(i)
                lo = a if lo is None else lo
                hi = b
        if lo is None:
            return 0.0, 0.0
        return lo, hi

    # -- construction helpers ------------------------------------------------

    @classmethod
    def constant(cls, value: float, domain: DomainKind = DomainKind.FULL_LINE):
        if domain == DomainKind.FULL_LINE:
            return cls(domain, (0.0,), (((value, 0.0),), ((value, 0.0),)))
        return cls(domain, (0.0,), (((value, 0.0),),))

    @classmethod
    def zero(cls, domain: DomainKind = DomainKind.FULL_LINE):
        return cls.constant(0.0, domain)

    @classmethod
    def indicator(cls, a: float, b: float, domain: DomainKind = DomainKind.FULL_LINE):
        if not a < b:
            raise ValueError("need a < b")
        one, nul = ((1.0, 0.0),), ()
        if domain == DomainKind.FULL_LINE:
            return cls(domain, (a, b), (nul, one, nul))
        if a < 0:
            raise ValueError("half-line indicator needs a >= 0")
        if a == 0.0:
            return cls(domain, (0.0, b), (one, nul))
        return cls(domain, (0.0, a, b), (nul, one, nul))

    @classmethod
    def from_polynomial(cls, knots, coeff_lists, domain: DomainKind = DomainKind.FULL_LINE,
                        left=0.0, right=0.0):
        """Pieces given as coefficient lists [c0, c1, ...] meaning c0 + c1 x + ..."""
        pieces = [[(left, 0.0)]] if domain == DomainKind.FULL_LINE else []
        if domain == DomainKind.HALF_LINE and knots[0] != 0.0:
            knots = [0.0] + list(knots)
            pieces.append([(0.0, 0.0)])
        for coeffs in coeff_lists:
            pieces.append([(c, float(j)) for j, c in enumerate(coeffs)])
        pieces.append([(right, 0.0)])
        return cls(domain, knots, pieces)

    # -- evaluation ----------------------------------------------------------

    def _index(self, x: float) -> int:
        bks = self.breakpoints
        if self.domain == DomainKind.FULL_LINE:
            return bisect.bisect_right(bks, x)
        if x < 0.0:
            raise ValueError(f"half-line function evaluated at x={x} < 0")
        return min(bisect.bisect_right(bks, x) - 1, len(self.pieces) - 1)

    def evaluate(self, x: float) -> float:
        """Pointwise value; at a breakpoint this is the right limit."""
        return _ps_eval(self.pieces[self._index(float(x))], float(x))

    __call__ = evaluate

    def left_limit(self, x: float) -> float:
        x = float(x)
        bks = self.breakpoints
        if self.domain == DomainKind.FULL_LINE:
            i = bisect.bisect_left(bks, x)
        else:
            if x <= 0.0:
                raise ValueError("no left limit at the half-line origin")
            i = bisect.bisect_left(bks, x) - 1
        return _ps_eval(self.pieces[i], x)

    def values(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        out = np.empty_like(xs)
        bks = np.asarray(self.breakpoints)
        if self.domain == DomainKind.FULL_LINE:
            idx = np.searchsorted(bks, xs, side="right")
        else:
            if np.any(xs < 0):
                raise ValueError("half-line function evaluated at negative x")
            idx = np.clip(np.searchsorted(bks, xs, side="right") - 1, 0, len(self.pieces) - 1)
        for i in range(len(self.pieces)):
            mask = idx == i
            if np.any(mask):
                out[mask] = _ps_eval_vec(self.pieces[i], xs[mask])
        return out

    # -- calculus -------------------------------------------------------------

    def derivative(self) -> "PiecewiseFunction":
        """Piecewise derivative; jump discontinuities carry no delta terms."""
        return PiecewiseFunction(self.domain, self.breakpoints,
                                 tuple(_ps_derivative(p) for p in self.pieces))

    def antiderivative(self) -> "PiecewiseFunction":
        """F(x) = integral of f from the left end of the domain up to x."""
        if self.domain == DomainKind.FULL_LINE and self.pieces[0]:
            raise DivergenceError("antiderivative from -inf needs a vanishing left tail")
        acc = 0.0
        new_pieces = []
        for i, p in enumerate(self.pieces):
            lo, hi = self._region(i)
            if not p:
                new_pieces.append(((acc, 0.0),) if acc != 0.0 else ())
                continue
            if lo == 0.0 and _ps_min_exponent(p) <= -1.0:
                raise DivergenceError("piece is not integrable down to 0")
            prim = _ps_antiderivative(p)
            base = acc - _ps_eval(prim, lo)
            new_pieces.append(_ps_add(prim, ((base, 0.0),)))
            if math.isfinite(hi):
                acc += _ps_primitive_eval(p, lo, hi)
        return PiecewiseFunction(self.domain, self.breakpoints, new_pieces)

    def integral(self, a: float, b: float) -> float:
        """Exact integral over [a, b] (within the domain)."""
        if a > b:
            return -self.integral(b, a)
        if a == b:
            return 0.0
        total = 0.0
        for i, p in enumerate(self.pieces):
            if not p:
                continue
            lo, hi = self._region(i)
            lo2, hi2 = max(lo, a), min(hi, b)
            if lo2 < hi2:
                if not math.isfinite(lo2) or not math.isfinite(hi2):
                    raise DivergenceError("use integrate_full for unbounded ranges")
                total += _ps_primitive_eval(p, lo2, hi2)
        return total

    def integrate_full(self) -> float:
        """Integral over the whole domain; algebraic tails in closed form."""
        total = 0.0
        for i, p in enumerate(self.pieces):
            if not p:
                continue
            lo, hi = self._region(i)
            if not math.isfinite(lo):
                raise DivergenceError("non-zero left tail is not integrable")
            if math.isfinite(hi):
                total += _ps_primitive_eval(p, lo, hi)
            else:
                if _ps_max_exponent(p) >= -1.0:
                    raise DivergenceError("right tail decays too slowly to integrate")
                if lo <= 0.0:
                    raise DivergenceError("algebraic tail must start at positive x")
                # closed form: int_lo^inf c x**e dx = -c lo**(e+1) / (e+1), e < -1
                total += sum(-c * lo ** (e + 1.0) / (e + 1.0) for c, e in p)
        return total

    # -- algebra --------------------------------------------------------------

    def _merged_breakpoints(self, other: "PiecewiseFunction") -> tuple:
        pts = sorted(set(self.breakpoints) | set(other.breakpoints))
        merged = []
        for b in pts:
            if not merged or b - merged[-1] > 1e-14 * max(1.0, abs(b)):
                merged.append(b)
        return tuple(merged)

    def _binary(self, other: "PiecewiseFunction", op) -> "PiecewiseFunction":
        if self.domain != other.domain:
            raise ValueError("domain mismatch")
        bks = self._merged_breakpoints(other)
        pieces = []
        n_regions = len(bks) + 1 if self.domain == DomainKind.FULL_LINE else len(bks)
        for i in range(n_regions):
            if self.domain == DomainKind.FULL_LINE:
                lo = -math.inf if i == 0 else bks[i - 1]
                hi = math.inf if i == len(bks) else bks[i]
            else:
                lo = bks[i]
                hi = bks[i + 1] if i + 1 < len(bks) else math.inf
            probe = lo + 1.0 if not math.isfinite(hi) else (
                hi - 1.0 if not math.isfinite(lo) else 0.5 * (lo + hi))
            pieces.append(op(self.pieces[self._index(probe)],
                             other.pieces[other._index(probe)]))
        return PiecewiseFunction(self.domain, bks, pieces)

    def __add__(self, other):
        if isinstance(other, PiecewiseFunction):
            return self._binary(other, _ps_add)
        return self + PiecewiseFunction.constant(float(other), self.domain)

    def __sub__(self, other):
        return self + (other * -1.0 if isinstance(other, PiecewiseFunction)
                       else -float(other))

    def __mul__(self, other):
        if isinstance(other, PiecewiseFunction):
            return self._binary(other, _ps_mul)
        a = float(other)
        return PiecewiseFunction(self.domain, self.breakpoints,
                                 tuple(_ps_scale(p, a) for p in self.pieces))

    __rmul__ = __mul__
    __radd__ = __add__

    def __neg__(self):
        return self * -1.0

    def dilate(self, h: float, amplitude: float = 1.0) -> "PiecewiseFunction":
        """Exact rescaling x -> amplitude * f(x / h), h > 0."""
        if h <= 0:
            raise ValueError("dilation scale must be positive")
        return PiecewiseFunction(self.domain,
                                 tuple(b * h for b in self.breakpoints),
                                 tuple(_ps_dilate(p, h, amplitude) for p in self.pieces))

    def shifted(self, dx: float) -> "PiecewiseFunction":
        """g(x) = f(x + dx); polynomial pieces only."""
        if dx == 0.0:
            return self
        if self.domain == DomainKind.FULL_LINE:
            return PiecewiseFunction(self.domain,
                                     tuple(b - dx for b in self.breakpoints),
                                     tuple(_ps_shift(p, dx) for p in self.pieces))
        if dx < 0:
            raise ValueError("half-line shift must move left (dx >= 0)")
        new_bks, new_pieces = [0.0], [None]
        for i, b in enumerate(self.breakpoints):
            if b - dx > 0.0:
                new_bks.append(b - dx)
                new_pieces.append(_ps_shift(self.pieces[i], dx))
        new_pieces[0] = _ps_shift(self.pieces[self._index(dx)], dx)
        return PiecewiseFunction(self.domain, new_bks, new_pieces)

    def steklov(self, eps: float) -> "PiecewiseFunction":
        """Moving average (1/eps) * integral of f over (x, x + eps), exact."""
        if eps <= 0:
            raise ValueError("eps must be positive")
        F = self.antiderivative()
        return (F.shifted(eps) - F) * (1.0 / eps)

    # -- norms ---------------------------------------------------------------

    def _region_candidates(self, i: int) -> list[float]:
        lo, hi = self._region(i)
        p = self.pieces[i]
        if not p:
            return []
        if math.isfinite(lo):
            lo_f = lo
        elif math.isfinite(hi):
            lo_f = hi - 3.0 * max(1.0, abs(hi))
        else:
            lo_f = -1e4
        hi_f = hi if math.isfinite(hi) else lo_f + 100.0 * max(1.0, abs(lo_f))
        cands = [lo_f, hi_f]
        if lo_f == 0.0 and _ps_min_exponent(p) < 0:
            cands[0] = 1e-12 * max(1.0, min(hi_f, 1.0))
        cands += _ps_roots(_ps_derivative(p), cands[0], hi_f)
        return cands

    def abs_max(self) -> tuple[float, float]:
        """(sup |f|, argmax); sup over unbounded pieces handled via exponents."""
        best, arg = 0.0, 0.0
        for i, p in enumerate(self.pieces):
            if not p:
                continue
            lo, hi = self._region(i)
            if not math.isfinite(hi) and _ps_max_exponent(p) > _EXP_TOL:
                return math.inf, math.inf
            if math.isfinite(lo) and lo == 0.0 and _ps_min_exponent(p) < -_EXP_TOL:
                return math.inf, 0.0
            if not math.isfinite(lo) and _ps_max_exponent(p) > _EXP_TOL:
                return math.inf, -math.inf
            for x in self._region_candidates(i):
                v = abs(_ps_eval(p, x))
                if v > best:
                    best, arg = v, x
            if not math.isfinite(hi):
                const = next((c for c, e in p if abs(e) <= _EXP_TOL), 0.0)
                if abs(const) > best:
                    best, arg = abs(const), math.inf
        return best, arg

    def sup_norm(self) -> float:
        return self.abs_max()[0]

    def _piece_lp(self, p, lo: float, hi: float, s: float,
                  spec: QuadratureSpec) -> float:
        """integral of |piece|**s over finite [lo, hi], split at sign changes."""
        cuts = [lo] + [r for r in _ps_roots(p, lo, hi) if lo < r < hi] + [hi]
        total = 0.0
        s_int = _is_int(s) and s > 0
        for a, b in zip(cuts, cuts[1:]):
            if b - a < 1e-15 * max(1.0, abs(b)):
                continue
            if s_int and _ps_is_poly(p):
                total += abs(_ps_primitive_eval(_ps_pow_int(p, int(round(s))), a, b))
                continue
            beta_l = None
            if a == 0.0 and _ps_min_exponent(p) < 0:
                beta_l = -_ps_min_exponent(p) * s
                if beta_l >= 1.0:
                    raise DivergenceError("singularity at 0 is not L_s integrable")
            val, _ = integrate_finite(lambda x: abs(_ps_eval(p, x)) ** s, a, b,
                                      spec.with_exponents(beta_l, None))
            total += abs(val)
        return total

    def lp_norm(self, s, spec: QuadratureSpec | None = None) -> float:
        """L_s norm over the whole domain; raises DivergenceError if infinite."""
        if isinstance(s, NormSpec):
            s = s.exponent
        spec = spec or default_spec()
        if s == INF:
            return self.sup_norm()
        if s < 1:
            raise ValueError("exponent must be >= 1")
        total = 0.0
        for i, p in enumerate(self.pieces):
            if not p:
                continue
            lo, hi = self._region(i)
            if not math.isfinite(lo):
                raise DivergenceError("non-zero left tail has infinite L_s norm")
            if math.isfinite(hi):
                total += self._piece_lp(p, lo, hi, s, spec)
            else:
                emax = _ps_max_exponent(p)
                if emax * s >= -1.0:
                    raise DivergenceError("right tail is not L_s integrable")
                lo_pos = max(lo, 1e-300)
                tail = _ps_normalize((c, -e) for c, e in p)  # f(1/u)

                def g(u, _tail=tail, _s=s):
                    return abs(_ps_eval(_tail, u)) ** _s / (u * u)

                beta = 2.0 + emax * s
                val, _ = integrate_finite(g, 0.0, 1.0 / lo_pos,
                                          spec.with_exponents(beta if beta > -30 else None, None))
                total += abs(val)
        return total ** (1.0 / s)

    # -- serialization ---------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "domain": self.domain.value,
            "breakpoints": list(self.breakpoints),
            "pieces": [[[c, e] for c, e in p] for p in self.pieces],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data: dict) -> "PiecewiseFunction":
        return cls(DomainKind(data["domain"]), data["breakpoints"],
                   [[(c, e) for c, e in p] for p in data["pieces"]])

    @classmethod
    def from_json(cls, text: str) -> "PiecewiseFunction":
        return cls.from_dict(json.loads(text))

    def __repr__(self):
        return (f"PiecewiseFunction({self.domain.value}, bks={self.breakpoints}, "
                f"{len(self.pieces)} pieces)")


def repeated_integral(f: PiecewiseFunction, m: int) -> PiecewiseFunction:
    """m-fold iterated integral from the left end of the domain.

    Matches the kernel form 1/(m-1)! * integral of (x-t)_+**(m-1) f(t) dt by
    the Cauchy formula for repeated integration.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    out = f
    for _ in range(m):
        out = out.antiderivative()
    return out


# ---------------------------------------------------------------------------
# StieltjesMeasure
# ---------------------------------------------------------------------------

class StieltjesMeasure:
    """Finite signed measure: point jumps plus a piecewise-power density.

    This is d(Omega) for a function Omega of bounded variation normalised to
    vanish at the left end of the domain; ``cumulative()`` recovers Omega.
    """

    __slots__ = ("domain", "jumps", "density")

    def __init__(self, domain: DomainKind, jumps=(), density: PiecewiseFunction | None = None):
        self.domain = domain
        self.jumps = tuple(sorted((float(x), float(h)) for x, h in jumps if h != 0.0))
        if density is not None and density.domain != domain:
            raise ValueError("density domain mismatch")
        self.density = density

    def total_variation(self, spec: QuadratureSpec | None = None) -> float:
        tv = sum(abs(h) for _, h in self.jumps)
        if self.density is not None:
            tv += self.density.lp_norm(1.0, spec)
        return tv

    def total_mass(self) -> float:
        m = sum(h for _, h in self.jumps)
        if self.density is not None:
            m += self.density.integrate_full()
        return m

    def _jump_value(self, f: PiecewiseFunction, x: float) -> float:
        right = f.evaluate(x)
        try:
            left = f.left_limit(x)
        except ValueError:
            return right
        if abs(left - right) <= 1e-12 * (1.0 + abs(left) + abs(right)):
            return right
        # midpoint convention for a jump of f colliding with a jump of Omega
        return 0.5 * (left + right)

    def integrate(self, f, spec: QuadratureSpec | None = None) -> float:
        """Signed integral of f against the measure.

        Piecewise f is handled in closed form (including algebraic tails);
        a bare callable falls back to quadrature over the density pieces.
        """
        spec = spec or default_spec()
        if isinstance(f, PiecewiseFunction):
            total = sum(h * self._jump_value(f, x) for x, h in self.jumps)
            if self.density is not None:
                total += (f * self.density).integrate_full()
            return total
        total = sum(h * f(x) for x, h in self.jumps)
        if self.density is not None:
            d = self.density
            for i, p in enumerate(d.pieces):
                if not p:
                    continue
                lo, hi = d._region(i)
                if math.isfinite(hi):
                    val, _ = integrate_finite(lambda x: f(x) * _ps_eval(p, x), lo, hi, spec)
                else:
                    emax = _ps_max_exponent(p)
                    if emax >= -1.0:
                        raise DivergenceError("density tail not integrable against bounded f")
                    from .quad import integrate_semi_infinite
                    val, _ = integrate_semi_infinite(
                        lambda x: f(x) * _ps_eval(p, x), lo, -emax, spec)
                total += val
        return total

    def cumulative(self) -> PiecewiseFunction:
        """Omega(x) = measure of (-inf, x] (right-continuous), as a function."""
        dens_cum = self.density.antiderivative() if self.density is not None else None
        base = dens_cum if dens_cum is not None else PiecewiseFunction.zero(self.domain)
        out = base
        for x, h in self.jumps:
            if self.domain == DomainKind.HALF_LINE and x == 0.0:
                step = PiecewiseFunction.constant(h, self.domain)
            elif self.domain == DomainKind.FULL_LINE:
                step = PiecewiseFunction(self.domain, (x,), ((), ((h, 0.0),)))
            else:
                step = PiecewiseFunction(self.domain, (0.0, x), ((), ((h, 0.0),)))
            out = out + step
        return out

    def dilated(self, h: float, k: float) -> "StieltjesMeasure":
        """Scaling law Omega_h(x) = h**-k Omega(x/h) for the generating function."""
        if h <= 0:
            raise ValueError("scale must be positive")
        amp = h ** (-k)
        jumps = tuple((x * h, amp * j) for x, j in self.jumps)
        dens = self.density.dilate(h, amp / h) if self.density is not None else None
        return StieltjesMeasure(self.domain, jumps, dens)

    def to_dict(self) -> dict:
        return {
            "domain": self.domain.value,
            "jumps": [[x, h] for x, h in self.jumps],
            "density": self.density.to_dict() if self.density is not None else None,
        }

    def __repr__(self):
        return (f"StieltjesMeasure({self.domain.value}, {len(self.jumps)} jumps, "
                f"density={'yes' if self.density is not None else 'no'})")
