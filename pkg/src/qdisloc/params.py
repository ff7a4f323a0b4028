"""Physical parameters and the effective couplings of the radial problem.

Natural units (hbar = c = 1) throughout. A missing ``ScalarPotential`` selects
the field-only configuration (case 1); a present one selects case 2 with
V(rho) = C1 rho^2 + C2 / rho^2 + C3.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import BoundConditionViolated, NoConfinement

BOUND_CONDITION_CASE1 = "(l - beta*k)^2 > 2*m*Q*lambda"
BOUND_CONDITION_CASE2 = "(l - beta*k)^2 + 2*m*(C2 - Q*lambda) > 0"


def _check_finite(obj, names):
    for name in names:
        value = getattr(obj, name)
        if not math.isfinite(value):
            raise ValueError(f"{type(obj).__name__}.{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class SystemParams:
    """Medium and particle constants.

    Parameters
    ----------
    m : float
        Particle mass, must be positive.
    Q : float
        Quadrupole constant. Signed values are accepted.
    lam : float
        Linear electric charge density along the defect axis.
    Cm : float
        Magnetic field constant, B = Cm rho^2 / 2 along z.
    beta : float
        Screw dislocation parameter b_z / (2 pi).
    k : float
        Wave number along z.
    """

    m: float = 1.0
    Q: float = 1.0
    lam: float = 0.0
    Cm: float = 1.0
    beta: float = 0.0
    k: float = 0.0

    def __post_init__(self):
        _check_finite(self, ("m", "Q", "lam", "Cm", "beta", "k"))
        if not self.m > 0:
            raise ValueError(f"mass must be positive, got {self.m!r}")


@dataclass(frozen=True)
class ScalarPotential:
    C1: float = 0.0
    C2: float = 0.0
    C3: float = 0.0

    def __post_init__(self):
        _check_finite(self, ("C1", "C2", "C3"))

    def __call__(self, rho):
        rho = np.asarray(rho, dtype=float)
        return self.C1 * rho**2 + self.C2 / rho**2 + self.C3


@dataclass(frozen=True)
class QuantumNumbers:
    n: int = 0
    l: int = 0

    def __post_init__(self):
        for name in ("n", "l"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value:
                raise ValueError(f"{name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        if self.n < 0:
            raise ValueError(f"radial quantum number must be >= 0, got {self.n}")


@dataclass(frozen=True)
class EffectiveCouplings:
    """Couplings of the reduced radial equation.

    ``Lsq`` is the squared effective angular index and ``Omega`` the
    oscillator strength; the radial operator is
    -psi'' - psi'/rho + (Lsq/rho^2 + Omega^2 rho^2) psi.
    """

    shifted_l: float
    Lsq: float
    Omega: float
    case: int

    @property
    def L(self) -> float:
        return math.sqrt(self.Lsq)


def case_of(v: Optional[ScalarPotential]) -> int:
    return 1 if v is None else 2


def shifted_l(p: SystemParams, q: QuantumNumbers) -> float:
    """Angular number shifted by the torsion of the dislocation, l - beta k."""
    return q.l - p.beta * p.k


def effective_couplings(
    p: SystemParams, v: Optional[ScalarPotential], q: QuantumNumbers
) -> EffectiveCouplings:
    """Build the couplings, rejecting parameters without a discrete spectrum.

    Raises
    ------
    BoundConditionViolated
        If the squared angular index is negative.
    NoConfinement
        If the oscillator strength is zero or imaginary.
    """
    s = shifted_l(p, q)
    qlam = p.Q * p.lam
    qc = p.Q * p.Cm
    if v is None:
        Lsq = s * s - 2 * p.m * qlam
        if Lsq < 0:
            raise BoundConditionViolated(
                f"bound condition {BOUND_CONDITION_CASE1} violated: "
                f"(l - beta*k)^2 = {s * s!r}, 2*m*Q*lambda = {2 * p.m * qlam!r}"
            )
        Omega = abs(qc)
        if Omega == 0:
            raise NoConfinement("oscillator strength |Q*Cm| = 0; the spectrum is continuous")
        return EffectiveCouplings(s, Lsq, Omega, 1)

    Lsq = s * s + 2 * p.m * (v.C2 - qlam)
    if Lsq < 0:
        raise BoundConditionViolated(
            f"bound condition {BOUND_CONDITION_CASE2} violated: value = {Lsq!r}"
        )
    if v.C1 >= 0:
        # hypot: no underflow, and exactly |Q*Cm| when C1 = 0
        Omega = math.hypot(math.sqrt(2 * p.m * v.C1), qc)
    else:
        Omega_sq = 2 * p.m * v.C1 + qc * qc
        Omega = math.sqrt(Omega_sq) if Omega_sq > 0 else 0.0
    if not Omega > 0:
        raise NoConfinement(
            f"oscillator strength squared 2*m*C1 + (Q*Cm)^2 = {2 * p.m * v.C1 + qc * qc!r} "
            "is not positive"
        )
    return EffectiveCouplings(s, Lsq, Omega, 2)


def energy_offset(p: SystemParams, v: Optional[ScalarPotential], q: QuantumNumbers) -> float:
    """Constant separating 2 m E from the transformed eigenvalue.

    eps = 2 m E - offset, offset = k^2 + 2 Q Cm (l - beta k) + 2 m C3.
    """
    c3 = 0.0 if v is None else v.C3
    return p.k**2 + 2 * p.Q * p.Cm * shifted_l(p, q) + 2 * p.m * c3


def transformed_eigenvalue(p, v, q, energy: float) -> float:
    return 2 * p.m * energy - energy_offset(p, v, q)


def physical_energy(p, v, q, eps):
    """Invert :func:`transformed_eigenvalue`; works elementwise on arrays."""
    return (np.asarray(eps, dtype=float) + energy_offset(p, v, q)) / (2 * p.m)


def effective_radial_potential(
    p: SystemParams, v: Optional[ScalarPotential], q: QuantumNumbers
) -> Callable:
    """Potential of the Liouville-transformed equation for u = sqrt(rho) psi.

    -u'' + W u = eps u with W(rho) = (Lsq - 1/4)/rho^2 + Omega^2 rho^2.
    """
    c = effective_couplings(p, v, q)
    centrifugal = c.Lsq - 0.25
    omega_sq = c.Omega**2

    def W(rho):
        rho = np.asarray(rho, dtype=float)
        if np.any(rho <= 0):
            raise ValueError("effective potential is defined for rho > 0 only")
        out = centrifugal / rho**2 + omega_sq * rho**2
        return float(out) if out.ndim == 0 else out

    return W
