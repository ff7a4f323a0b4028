"""Finite-difference eigensolver for the radial equation.

This is the independent check on the closed forms: it only knows the radial
differential operator, never the energy formula or the Laguerre solution.

Two discretizations produce a symmetric tridiagonal matrix:

``"frobenius"`` (default)
    Factor out the indicial behaviour psi = rho^L f, where L^2 is the
    coefficient of 1/rho^2 in the operator. f is smooth and even, and
    -(w f')'/w + Omega^2 rho^2 f = eps f with w = rho^(2L+1) is discretized
    by finite volumes on cells [i h, (i+1) h] with exact cell integrals of
    the weight. Zero flux at the origin is natural; Dirichlet at rho_max.
    Converges as h^2 for every L >= 0.

``"liouville"``
    Three-point stencil for -u'' + W u = eps u, u = sqrt(rho) psi, with
    Dirichlet walls at rho_min and rho_max. Simple, but the 1/rho^2
    singularity of W limits it to roughly h^(2L) convergence when L < 1,
    and it stalls entirely for L = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.linalg import solve_banded

from .errors import (
    BisectionStall,
    DegenerateShift,
    GridTooCoarse,
    NonQuadraticConvergence,
)
from .params import (
    QuantumNumbers,
    ScalarPotential,
    SystemParams,
    effective_couplings,
    effective_radial_potential,
    physical_energy,
)

MIN_POINTS = 200
MAX_COUNT = 12
SCHEMES = ("frobenius", "liouville")


@dataclass(frozen=True)
class RadialGrid:
    """Discretization descriptor shared by all refinement levels.

    ``rho_max=None`` picks an outer wall from the couplings so that the
    confining term dominates the highest requested level by a factor of ten.
    ``rho_min=None`` means one grid spacing (liouville scheme only; the
    frobenius scheme always starts at the origin).
    """

    rho_max: Optional[float] = None
    points: int = 2000
    refinement_levels: int = 3
    rho_min: Optional[float] = None

    def __post_init__(self):
        if self.points < MIN_POINTS:
            raise GridTooCoarse(f"need at least {MIN_POINTS} points, got {self.points}")
        if self.refinement_levels < 2:
            raise ValueError("refinement_levels must be >= 2 for extrapolation")
        if self.rho_max is not None and not self.rho_max > 0:
            raise ValueError("rho_max must be positive")
        if self.rho_min is not None:
            if self.rho_min < 0:
                raise ValueError("rho_min must be non-negative")
            if self.rho_max is not None and not self.rho_min < self.rho_max:
                raise ValueError("rho_min must lie below rho_max")

    def level_points(self) -> list[int]:
        return [self.points * 2**j for j in range(self.refinement_levels)]


@dataclass(frozen=True, eq=False)
class TridiagonalOperator:
    """Symmetric tridiagonal matrix plus what is needed to read its vectors.

    ``u_factor`` maps a unit eigenvector y to samples of u = sqrt(rho) psi
    at ``nodes``: u_i = u_factor_i * y_i.
    """

    diag: np.ndarray
    offdiag: np.ndarray
    nodes: np.ndarray
    h: float
    u_factor: np.ndarray
    scheme: str = "liouville"
    source: Optional[tuple] = field(default=None, repr=False)

    def __post_init__(self):
        if len(self.offdiag) != len(self.diag) - 1:
            raise ValueError("off-diagonal must be one shorter than the diagonal")

    @property
    def size(self) -> int:
        return len(self.diag)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        y = self.diag * x
        y[:-1] += self.offdiag * x[1:]
        y[1:] += self.offdiag * x[:-1]
        return y

    def shifted(self, c: float) -> "TridiagonalOperator":
        return TridiagonalOperator(
            self.diag + c, self.offdiag, self.nodes, self.h, self.u_factor, self.scheme, self.source
        )


def default_rho_max(Lsq: float, Omega: float, count: int) -> float:
    """Outer wall with Omega^2 rho_max^2 >= 10 * eps estimate of level ``count - 1``."""
    eps_top = 2 * Omega * (2 * (count - 1) + 1 + math.sqrt(Lsq))
    return math.sqrt(10 * eps_top) / Omega


def discretize_potential(
    W: Callable, rho_min: float, rho_max: float, points: int
) -> TridiagonalOperator:
    """Three-point stencil for -u'' + W u with Dirichlet walls.

    Nodes are rho_min + i h, i = 1..points, h = (rho_max - rho_min)/(points + 1);
    diagonal 2/h^2 + W, off-diagonal -1/h^2.
    """
    if points < MIN_POINTS:
        raise GridTooCoarse(f"need at least {MIN_POINTS} points, got {points}")
    if not 0 <= rho_min < rho_max:
        raise ValueError("need 0 <= rho_min < rho_max")
    h = (rho_max - rho_min) / (points + 1)
    nodes = rho_min + h * np.arange(1, points + 1)
    diag = 2.0 / h**2 + np.asarray(W(nodes), dtype=float)
    offdiag = np.full(points - 1, -1.0 / h**2)
    return TridiagonalOperator(diag, offdiag, nodes, h, np.ones(points))


def _frobenius_operator(L: float, Omega: float, rho_max: float, points: int) -> TridiagonalOperator:
    h = rho_max / points
    faces = h * np.arange(points + 1)
    nodes = faces[:-1] + 0.5 * h
    p = 2 * L + 2
    mass = (faces[1:] ** p - faces[:-1] ** p) / p
    confine = Omega**2 * (faces[1:] ** (p + 2) - faces[:-1] ** (p + 2)) / (p + 2)
    flux = faces[1:-1] ** (2 * L + 1) / h
    stiff = np.zeros(points)
    stiff[:-1] += flux
    stiff[1:] += flux
    # Dirichlet wall at rho_max, half a cell from the last node.
    stiff[-1] += 2 * rho_max ** (2 * L + 1) / h
    diag = (stiff + confine) / mass
    offdiag = -flux / np.sqrt(mass[:-1] * mass[1:])
    u_factor = nodes ** (L + 0.5) / np.sqrt(mass)
    return TridiagonalOperator(diag, offdiag, nodes, h, u_factor, scheme="frobenius")


def discretize(
    p: SystemParams,
    v: Optional[ScalarPotential],
    q: QuantumNumbers,
    grid: RadialGrid,
    scheme: str = "frobenius",
    count: int = 6,
    points: Optional[int] = None,
) -> TridiagonalOperator:
    """Discretize the radial operator of state family (p, v, l) on one grid level.

    ``points`` overrides ``grid.points`` (used for refinement levels);
    ``count`` only matters when the outer wall is chosen automatically.
    """
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}; choose from {SCHEMES}")
    c = effective_couplings(p, v, q)
    points = grid.points if points is None else points
    if points < MIN_POINTS:
        raise GridTooCoarse(f"need at least {MIN_POINTS} points, got {points}")
    rho_max = grid.rho_max if grid.rho_max is not None else default_rho_max(c.Lsq, c.Omega, count)

    if scheme == "frobenius":
        op = _frobenius_operator(math.sqrt(c.Lsq), c.Omega, rho_max, points)
    else:
        W = effective_radial_potential(p, v, q)
        rho_min = grid.rho_min if grid.rho_min is not None else rho_max / (points + 2)
        op = discretize_potential(W, rho_min, rho_max, points)
    return TridiagonalOperator(
        op.diag, op.offdiag, op.nodes, op.h, op.u_factor, scheme, source=(p, v, q)
    )


def sturm_count(op: TridiagonalOperator, x) -> np.ndarray:
    """Number of eigenvalues strictly below each shift in ``x``.

    Counts negative pivots of the LDL^T factorization of T - x I.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    d = op.diag.tolist()
    e2 = (op.offdiag**2).tolist()
    tiny = np.finfo(float).tiny ** 0.5
    count = np.zeros(x.shape, dtype=np.int64)
    pivot = d[0] - x
    buf = np.empty_like(x)
    for i in range(len(d)):
        if i:
            np.divide(e2[i - 1], pivot, out=buf)
            np.subtract(d[i] - x, buf, out=pivot)
        pivot[pivot == 0] = -tiny
        count += pivot < 0
    return count


def gershgorin_bounds(op: TridiagonalOperator) -> tuple[float, float]:
    radius = np.zeros(op.size)
    radius[:-1] += np.abs(op.offdiag)
    radius[1:] += np.abs(op.offdiag)
    return float(np.min(op.diag - radius)), float(np.max(op.diag + radius))


def lowest_eigenvalues(
    op: TridiagonalOperator,
    count: int,
    rtol: float = 4e-15,
    sections: int = 63,
    max_passes: int = 200,
) -> np.ndarray:
    """The ``count`` smallest eigenvalues by Sturm-count multisection.

    Every bracket is split into ``sections + 1`` pieces per pass, all
    brackets at once. A bracket is done when its width falls below
    max(rtol |lambda|, 8 eps ||T||), the accuracy floor of Sturm counting.

    Raises
    ------
    BisectionStall
        If a pass fails to shrink an unfinished bracket, or the matrix has
        non-finite entries so that no bracket can be formed.
    """
    if not 1 <= count <= MAX_COUNT:
        raise ValueError(f"count must be in 1..{MAX_COUNT}")
    if count > op.size:
        raise ValueError("more eigenvalues requested than the matrix has")
    lo, hi = gershgorin_bounds(op)
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise BisectionStall("matrix has non-finite entries; the potential is pathological")
    norm = max(abs(lo), abs(hi))
    floor = 8 * np.finfo(float).eps * norm
    # Pad so that the Sturm counts at the ends are exact.
    span = hi - lo
    lo -= 1e-3 * span + floor
    hi += 1e-3 * span + floor

    lower = np.full(count, lo)
    upper = np.full(count, hi)
    targets = np.arange(count)
    # Low eigenvalues of a fine grid sit far below the Gershgorin top:
    # seed the brackets from one pass over geometrically spaced shifts.
    seeds = lo + (hi - lo) * np.geomspace(1e-14, 1.0, 96)[:-1]
    seed_counts = sturm_count(op, seeds)
    for j in range(count):
        below = seeds[seed_counts <= j]
        above = seeds[seed_counts > j]
        if below.size:
            lower[j] = below.max()
        if above.size:
            upper[j] = above.min()
    frac = np.arange(1, sections + 1) / (sections + 1)
    for _ in range(max_passes):
        width = upper - lower
        tol = np.maximum(rtol * np.maximum(np.abs(lower), np.abs(upper)), floor)
        active = width > tol
        if not np.any(active):
            return 0.5 * (lower + upper)
        shifts = lower[active, None] + width[active, None] * frac[None, :]
        counts = sturm_count(op, shifts.ravel()).reshape(shifts.shape)
        k = targets[active, None]
        # Largest shift with count <= k is a new lower bound, smallest with count > k a new upper.
        below = counts <= k
        new_lower = np.where(below, shifts, -np.inf).max(axis=1)
        new_upper = np.where(~below, shifts, np.inf).min(axis=1)
        nl = np.maximum(lower[active], new_lower)
        nu = np.minimum(upper[active], new_upper)
        if np.any((nu - nl) >= width[active]):
            stalled = np.flatnonzero(active)[(nu - nl) >= width[active]]
            raise BisectionStall(f"bracket for eigenvalue index {stalled[0]} stopped shrinking")
        lower[active] = nl
        upper[active] = nu
    raise BisectionStall(f"no convergence after {max_passes} passes")


def _inverse_iteration(op: TridiagonalOperator, shift: float, iterations: int):
    n = op.size
    banded = np.zeros((3, n))
    banded[0, 1:] = op.offdiag
    banded[1] = op.diag - shift
    banded[2, :-1] = op.offdiag
    rng = np.random.default_rng(12345)
    x = rng.standard_normal(n)
    x /= np.linalg.norm(x)
    for _ in range(iterations):
        x = solve_banded((1, 1), banded, x, check_finite=False)
        norm = np.linalg.norm(x)
        if not np.isfinite(norm) or norm == 0:
            raise np.linalg.LinAlgError("singular shifted solve")
        x /= norm
    return x


def eigenvector(
    op: TridiagonalOperator, eigenvalue: float, iterations: int = 4
) -> tuple[np.ndarray, int, float]:
    """Inverse iteration at ``eigenvalue``.

    Returns
    -------
    u : ndarray
        Samples of u = sqrt(rho) psi at ``op.nodes``, unit discrete L2 norm
        (sum u^2 h = 1), first lobe positive.
    node_count : int
        Interior sign changes.
    residual : float
        ||(T - lambda) y|| / ||y|| of the symmetric-matrix eigenvector, with
        lambda its Rayleigh quotient.
    """
    norm = max(abs(v) for v in gershgorin_bounds(op))
    nudge = 64 * np.finfo(float).eps * norm
    try:
        y = _inverse_iteration(op, eigenvalue + nudge, iterations)
    except (np.linalg.LinAlgError, ValueError):
        try:
            y = _inverse_iteration(op, eigenvalue - 1e3 * nudge, iterations)
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise DegenerateShift(f"shifted solve singular near {eigenvalue!r}") from exc
    Ty = op.matvec(y)
    rayleigh = float(y @ Ty)
    residual = float(np.linalg.norm(Ty - rayleigh * y))

    u = op.u_factor * y
    big = np.abs(u) > 1e-8 * np.max(np.abs(u))
    first = u[np.argmax(big)]
    u = u * np.sign(first) / math.sqrt(float(np.sum(u**2)) * op.h)
    signs = np.sign(u[big])
    node_count = int(np.count_nonzero(signs[1:] != signs[:-1]))
    return u, node_count, residual


@dataclass
class LevelResult:
    """Eigenpairs of one grid level."""

    h: float
    eigenvalues: np.ndarray
    nodes: np.ndarray
    eigenvectors: list
    node_counts: list
    residuals: list


def solve_level(op: TridiagonalOperator, count: int, vectors: bool = True) -> LevelResult:
    eps = lowest_eigenvalues(op, count)
    vecs, nodes, res = [], [], []
    if vectors:
        for value in eps:
            u, nc, r = eigenvector(op, value)
            vecs.append(u)
            nodes.append(nc)
            res.append(r)
    return LevelResult(op.h, eps, op.nodes, vecs, nodes, res)


@dataclass
class OracleResult:
    """Extrapolated spectrum of one (p, v, l) family.

    ``eigenvalues`` are transformed values eps, ``energies`` the physical
    E (``None`` for a bare potential). Vectors and node counts come from the
    finest level.
    """

    eigenvalues: np.ndarray
    energies: Optional[np.ndarray]
    eigenvectors: list
    nodes: np.ndarray
    node_counts: list
    extrapolation_error: np.ndarray
    order: np.ndarray
    spacings: list

    def __post_init__(self):
        if np.any(np.diff(self.eigenvalues) <= 0):
            raise ValueError("oracle eigenvalues are not strictly increasing")
        if self.node_counts and list(self.node_counts) != list(range(len(self.node_counts))):
            raise ValueError(f"node counts {self.node_counts} break the oscillation law")


def observed_order(coarse: float, mid: float, fine: float, noise: float) -> float:
    """log2 of successive difference ratio; NaN when differences sit in the noise."""
    d1, d2 = coarse - mid, mid - fine
    if abs(d1) <= noise or abs(d2) <= noise or d1 * d2 <= 0:
        return math.nan
    return math.log2(d1 / d2)


def extrapolate(
    levels: Sequence[LevelResult],
    source: Optional[tuple] = None,
    order_tolerance: float = 0.5,
) -> OracleResult:
    """Richardson-extrapolate eigenvalues from grids with spacing halved each level.

    Fits a polynomial in h^2 through all levels (Neville) and evaluates
    it at h = 0, which is the Romberg table for exact halving. The reported ``extrapolation_error`` is |finest - extrapolated|.

    Raises
    ------
    NonQuadraticConvergence
        If the observed order of any eigenvalue differs from 2 by more than
        ``order_tolerance``.
    """
    if len(levels) < 2:
        raise ValueError("need at least two grid levels")
    for a, b in zip(levels, levels[1:]):
        if not math.isclose(a.h, 2 * b.h, rel_tol=0.05):
            raise ValueError("grid spacing must roughly halve between levels")
    table = np.array([lvl.eigenvalues for lvl in levels])
    finest = table[-1]

    order = np.full(table.shape[1], math.nan)
    if len(levels) >= 3:
        noise = 1e3 * np.finfo(float).eps * np.max(np.abs(table), axis=0) + 1e-10
        for j in range(table.shape[1]):
            order[j] = observed_order(table[-3, j], table[-2, j], table[-1, j], noise[j])
        bad = np.abs(order - 2) > order_tolerance
        if np.any(bad):
            j = int(np.flatnonzero(bad)[0])
            raise NonQuadraticConvergence(
                f"eigenvalue {j}: observed order {order[j]:.3f}, expected 2; "
                "check rho_min/rho_max"
            )

    # Neville's scheme in t = h^2, evaluated at t = 0.
    t = [lvl.h**2 for lvl in levels]
    row = list(table)
    for m in range(1, len(levels)):
        row = [
            (t[i] * row[i + 1] - t[i + m] * row[i]) / (t[i] - t[i + m])
            for i in range(len(row) - 1)
        ]
    extrapolated = row[0]

    energies = None
    if source is not None:
        energies = physical_energy(*source, extrapolated)
    last = levels[-1]
    return OracleResult(
        eigenvalues=extrapolated,
        energies=energies,
        eigenvectors=last.eigenvectors,
        nodes=last.nodes,
        node_counts=last.node_counts,
        extrapolation_error=np.abs(finest - extrapolated),
        order=order,
        spacings=[lvl.h for lvl in levels],
    )


def solve_oracle(
    p: SystemParams,
    v: Optional[ScalarPotential],
    q: QuantumNumbers,
    count: int,
    grid: Optional[RadialGrid] = None,
    scheme: str = "frobenius",
    vectors: bool = True,
) -> OracleResult:
    """Lowest ``count`` states of angular family ``q.l`` on all refinement levels.

    ``q.n`` is ignored; the states are indexed by position in the result.
    """
    grid = grid or RadialGrid()
    if grid.rho_max is None:
        c = effective_couplings(p, v, q)
        grid = RadialGrid(
            default_rho_max(c.Lsq, c.Omega, count), grid.points, grid.refinement_levels, grid.rho_min
        )
    levels = []
    for j, pts in enumerate(grid.level_points()):
        op = discretize(p, v, q, grid, scheme=scheme, count=count, points=pts)
        last = j == grid.refinement_levels - 1
        levels.append(solve_level(op, count, vectors=vectors and last))
    return extrapolate(levels, source=(p, v, q))
