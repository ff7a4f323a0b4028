"""Closed-form energies and radial eigenfunctions for both configurations.

The full wavefunction is exp(-i E t + i l phi + i k z) psi(rho); only the
radial factor psi is represented here. Energies are evaluated in the printed
grouping of the closed form so that the signed Q*Cm term and the |Q*Cm|
term stay separately testable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .params import (
    QuantumNumbers,
    ScalarPotential,
    SystemParams,
    case_of,
    effective_couplings,
    shifted_l,
)
from .special import LaguerreSpec, laguerre_eval, laguerre_l2_norm

_PARAM_TOL = 4 * np.finfo(float).eps


def quantum_sum(p: SystemParams, v: Optional[ScalarPotential], q: QuantumNumbers) -> float:
    """1 + 2n + L; called delta for case 1 and tau for case 2."""
    c = effective_couplings(p, v, q)
    return 1 + 2 * q.n + math.sqrt(c.Lsq)


def energy_case1(p: SystemParams, q: QuantumNumbers) -> float:
    c = effective_couplings(p, None, q)
    s = c.shifted_l
    qc = p.Q * p.Cm
    delta = 1 + 2 * q.n + math.sqrt(s**2 - 2 * p.m * (p.Q * p.lam))
    return p.k**2 / (2 * p.m) + (qc / p.m) * s + (delta / p.m) * abs(qc)


def energy_case2(p: SystemParams, v: ScalarPotential, q: QuantumNumbers) -> float:
    c = effective_couplings(p, v, q)
    s = c.shifted_l
    qc = p.Q * p.Cm
    tau = 1 + 2 * q.n + math.sqrt(s**2 + 2 * p.m * (v.C2 - p.Q * p.lam))
    return (
        v.C3
        + p.k**2 / (2 * p.m)
        + (qc / p.m) * s
        + (tau / p.m) * math.sqrt(2 * p.m * v.C1 + qc * qc)
    )


def energy(p: SystemParams, v: Optional[ScalarPotential], q: QuantumNumbers) -> float:
    return energy_case1(p, q) if v is None else energy_case2(p, v, q)


def unbound_advisory(p: SystemParams, v: Optional[ScalarPotential], q: QuantumNumbers) -> bool:
    """Sign pattern under which the source calls the level an unbound state.

    Only reported, never acted upon: the closed form still yields the level.
    """
    flag = p.Q * p.Cm > 0 and q.l > p.beta * p.k
    if v is not None:
        flag = flag and v.C3 > 0
    return flag


@dataclass(frozen=True)
class SpectralSolution:
    """Energy and the parameter set of psi(rho) = N rho^a exp(-g rho^2) L_n^b(c rho^2).

    ``wf_exponent`` is the power a of rho, ``wf_gaussian`` the positive
    Gaussian rate g, ``laguerre_index`` the upper index b and
    ``laguerre_arg_scale`` the argument scale c. For every valid input
    a = b = L and c = 2 g = Omega.
    """

    energy: float
    case_tag: int
    n: int
    l: int
    wf_exponent: float
    wf_gaussian: float
    laguerre_index: float
    laguerre_arg_scale: float
    norm_const: float
    quantum_sum: float

    def __post_init__(self):
        if not math.isclose(self.laguerre_index, self.wf_exponent, rel_tol=_PARAM_TOL, abs_tol=_PARAM_TOL):
            raise AssertionError("Laguerre index and rho exponent disagree")
        if not math.isclose(self.laguerre_arg_scale, 2 * self.wf_gaussian, rel_tol=_PARAM_TOL):
            raise AssertionError("Laguerre argument scale and Gaussian rate disagree")
        if not self.norm_const > 0:
            raise AssertionError("normalization constant must be positive")

    def __call__(self, rho):
        """Evaluate psi; rho = 0 gives N for L = 0 and 0 otherwise."""
        rho = np.asarray(rho, dtype=float)
        if np.any(rho < 0):
            raise ValueError("rho must be non-negative")
        x = self.laguerre_arg_scale * rho**2
        lag = laguerre_eval(LaguerreSpec(self.n, self.laguerre_index), x)
        out = self.norm_const * rho**self.wf_exponent * np.exp(-self.wf_gaussian * rho**2) * lag
        return float(out) if out.ndim == 0 else out


def eigenfunction(
    p: SystemParams,
    v: Optional[ScalarPotential],
    q: QuantumNumbers,
    normalized: bool = True,
) -> tuple[SpectralSolution, Callable]:
    """Closed-form state (n, l) and a callable rho -> psi(rho).

    With ``normalized`` the constant is fixed by int_0^inf |psi|^2 rho drho = 1,
    i.e. N^2 = 2 Omega^(L+1) n! / Gamma(n + L + 1); otherwise N = 1.
    """
    c = effective_couplings(p, v, q)
    root = math.sqrt(c.Lsq)
    # Parameters in the form they are printed: index-1, scale, half-power, -half-scale.
    index_plus_one = 1 + root
    arg_scale = c.Omega
    half_power = 0.5 * root
    gaussian = -0.5 * c.Omega

    if normalized:
        norm = math.sqrt(2 * c.Omega ** (root + 1) / laguerre_l2_norm(LaguerreSpec(q.n, root)))
    else:
        norm = 1.0
    sol = SpectralSolution(
        energy=energy(p, v, q),
        case_tag=case_of(v),
        n=q.n,
        l=q.l,
        wf_exponent=2 * half_power,
        wf_gaussian=-gaussian,
        laguerre_index=index_plus_one - 1,
        laguerre_arg_scale=arg_scale,
        norm_const=norm,
        quantum_sum=1 + 2 * q.n + root,
    )
    return sol, sol


# Sixth-order central differences.
_D1 = np.array([-1, 9, -45, 0, 45, -9, 1]) / 60.0
_D2 = np.array([2, -27, 270, -490, 270, -27, 2]) / 180.0


def ode_residual(
    p: SystemParams,
    v: Optional[ScalarPotential],
    q: QuantumNumbers,
    samples: Optional[Sequence[float]] = None,
    energy_override: Optional[float] = None,
) -> float:
    """Scaled residual of the closed-form state in the radial equation.

    The equation is assembled from the raw parameters, not from the
    couplings, and derivatives are taken numerically:

    psi'' + psi'/rho + [2mE - k^2 - 2 Q Cm (l - beta k) - (Q Cm)^2 rho^2
                        - (l - beta k)^2/rho^2 + 2 m Q lambda/rho^2 - 2 m V] psi

    Returns max |residual| / max |psi| over ``samples``.
    """
    sol, psi = eigenfunction(p, v, q, normalized=True)
    E = sol.energy if energy_override is None else energy_override
    scale = 1.0 / math.sqrt(sol.laguerre_arg_scale)
    if samples is None:
        extent = scale * math.sqrt(2 * sol.quantum_sum + 20)
        samples = np.linspace(0.05 * scale, extent, 400)
    rho = np.asarray(samples, dtype=float)
    if np.any(rho <= 0):
        raise ValueError("residual samples must be positive")

    h = np.minimum(2e-3 * scale, rho / 8)
    offsets = np.arange(-3, 4)
    stencil = rho[:, None] + h[:, None] * offsets[None, :]
    values = psi(stencil)
    d1 = values @ _D1 / h
    d2 = values @ _D2 / h**2
    f = values[:, 3]

    s = shifted_l(p, q)
    qc = p.Q * p.Cm
    V = 0.0 if v is None else v(rho)
    bracket = (
        -(s**2) / rho**2
        - p.k**2
        - 2 * qc * s
        - qc**2 * rho**2
        + 2 * p.m * p.Q * p.lam / rho**2
        + 2 * p.m * E
        - 2 * p.m * V
    )
    residual = d2 + d1 / rho + bracket * f
    return float(np.max(np.abs(residual)) / np.max(np.abs(f)))
