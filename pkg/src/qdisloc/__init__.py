"""Bound states of an electric quadrupole moment in an elastic medium with a
screw dislocation: closed-form spectra, eigenfunctions and an independent
finite-difference oracle."""
from .analytic import (
    SpectralSolution,
    eigenfunction,
    energy,
    energy_case1,
    energy_case2,
    ode_residual,
    quantum_sum,
    unbound_advisory,
)
from .errors import (
    AllPointsInvalid,
    BisectionStall,
    BoundConditionViolated,
    DegenerateShift,
    DomainError,
    EmptyTable,
    GridTooCoarse,
    NoConfinement,
    NonConvergence,
    NonQuadraticConvergence,
    QdislocError,
)
from .oracle import OracleResult, RadialGrid, discretize, extrapolate, lowest_eigenvalues, solve_oracle
from .params import (
    EffectiveCouplings,
    QuantumNumbers,
    ScalarPotential,
    SystemParams,
    effective_couplings,
    effective_radial_potential,
)
from .special import LaguerreSpec, halfline_quadrature, laguerre_eval, laguerre_l2_norm

__version__ = "0.1.0"

__all__ = [
    "AllPointsInvalid",
    "BisectionStall",
    "BoundConditionViolated",
    "DegenerateShift",
    "DomainError",
    "EffectiveCouplings",
    "EmptyTable",
    "GridTooCoarse",
    "LaguerreSpec",
    "NoConfinement",
    "NonConvergence",
    "NonQuadraticConvergence",
    "OracleResult",
    "QdislocError",
    "QuantumNumbers",
    "RadialGrid",
    "ScalarPotential",
    "SpectralSolution",
    "SystemParams",
    "discretize",
    "effective_couplings",
    "effective_radial_potential",
    "eigenfunction",
    "energy",
    "energy_case1",
    "energy_case2",
    "extrapolate",
    "halfline_quadrature",
    "laguerre_eval",
    "laguerre_l2_norm",
    "lowest_eigenvalues",
    "ode_residual",
    "quantum_sum",
    "solve_oracle",
    "unbound_advisory",
]
