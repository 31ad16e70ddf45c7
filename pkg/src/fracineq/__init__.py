"""fracineq: fractional derivatives and sharp Kolmogorov-type inequalities.

Numerical library and CLI for the right-sided Marchaud fractional derivative
(and its Hadamard counterpart under the logarithmic substitution), the
extremal function/measure pairs behind sharp additive and multiplicative
Landau-Kolmogorov inequalities on the line and half-line, the induced sharp
constants, Stechkin best-approximation values, optimal-recovery errors, and
three-numbers feasibility checks.
"""

from .funcmodel import (DomainKind, NormSpec, PiecewiseFunction,
                        StieltjesMeasure, repeated_integral, INF)
from .special import FracOrder, bspline, gamma, kappa, power_kernel

__version__ = "0.1.0"

__all__ = [
    "DomainKind", "NormSpec", "PiecewiseFunction", "StieltjesMeasure",
    "repeated_integral", "INF", "FracOrder", "bspline", "gamma", "kappa",
    "power_kernel", "__version__",
]
