"""Generalized Laguerre polynomials and half-line quadrature."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, NonConvergence


@dataclass(frozen=True)
class LaguerreSpec:
    n: int
    alpha: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise DomainError(f"degree must be a non-negative integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        if not self.alpha > -1:
            raise DomainError(f"upper index must exceed -1, got {self.alpha!r}")


def laguerre_eval(spec: LaguerreSpec, x):
    """Evaluate L_n^alpha(x) by the upward three-term recurrence.

    (k+1) L_{k+1} = (2k + 1 + alpha - x) L_k - (k + alpha) L_{k-1}

    Works elementwise on arrays; scalars in give a float back.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("Laguerre argument must be non-negative")
    a = spec.alpha
    prev = np.ones_like(x)
    if spec.n == 0:
        cur = prev
    else:
        cur = 1.0 + a - x
        for k in range(1, spec.n):
            prev, cur = cur, ((2 * k + 1 + a - x) * cur - (k + a) * prev) / (k + 1)
    return float(cur) if cur.ndim == 0 else cur


def laguerre_l2_norm(spec: LaguerreSpec) -> float:
    """Weighted norm int_0^inf x^alpha e^-x L_n^alpha(x)^2 dx = Gamma(n+alpha+1)/n!."""
    return math.exp(math.lgamma(spec.n + spec.alpha + 1) - math.lgamma(spec.n + 1))


_GL_ORDER = 20
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(_GL_ORDER)


def _composite_gl(g: Callable, panels: int) -> float:
    edges = np.linspace(0.0, 1.0, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    t = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    w = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
    return float(np.dot(w, g(t)))


def halfline_quadrature(
    f: Callable,
    decay_scale: float,
    rtol: float = 1e-10,
    atol: float = 0.0,
    max_refinements: int = 14,
    grading: int = 3,
) -> float:
    """Integrate a vectorized ``f`` over (0, inf).

    The half-line is mapped onto (0, 1) by rho = s t / (1 - t) with
    s = ``decay_scale``, and t = u^grading clusters nodes at the origin so
    that algebraic endpoint factors rho^a (a >= 0) stay well resolved. The
    panel count of a composite 20-point Gauss-Legendre rule in u is doubled
    until two successive sums agree.

    Raises
    ------
    NonConvergence
        If the sums still disagree after ``max_refinements`` doublings.
    """
    if not decay_scale > 0:
        raise ValueError("decay_scale must be positive")
    s = float(decay_scale)
    k = int(grading)

    def g(u):
        t = u**k
        one_minus = 1.0 - t
        return f(s * t / one_minus) * s / one_minus**2 * k * u ** (k - 1)

    panels = 4
    previous = _composite_gl(g, panels)
    for _ in range(max_refinements):
        panels *= 2
        current = _composite_gl(g, panels)
        if abs(current - previous) <= max(rtol * abs(current), atol):
            return current
        last_change = abs(current - previous)
        previous = current
    raise NonConvergence(
        f"half-line quadrature did not settle after {max_refinements} refinements: "
        f"last change {last_change!r} on a sum of {current!r}"
    )
