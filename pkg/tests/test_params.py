import math

import pytest
import sympy
from hypothesis import given, strategies as st

from qdisloc.errors import BoundConditionViolated, NoConfinement
from qdisloc.params import (
    QuantumNumbers,
    ScalarPotential,
    SystemParams,
    effective_couplings,
    effective_radial_potential,
    physical_energy,
    transformed_eigenvalue,
)

from conftest import FIG1_L, FIG1_PARAMS, FIG1_POTENTIAL


def test_trivial_couplings():
    c = effective_couplings(SystemParams(), None, QuantumNumbers(0, 0))
    assert (c.shifted_l, c.Lsq, c.Omega) == (0.0, 0.0, 1.0)


def test_fig1_couplings_at_unit_Q():
    c = effective_couplings(FIG1_PARAMS, FIG1_POTENTIAL, QuantumNumbers(0, FIG1_L))
    assert c.shifted_l == 0.75
    assert c.Lsq == 0.5625
    assert c.Omega == pytest.approx(math.sqrt(3), rel=1e-15)


def test_case1_with_fig1_params_violates_bound():
    with pytest.raises(BoundConditionViolated, match=r"\(l - beta\*k\)\^2 > 2\*m\*Q\*lambda"):
        effective_couplings(FIG1_PARAMS, None, QuantumNumbers(0, FIG1_L))


@pytest.mark.parametrize("Q, Cm", [(0.0, 1.0), (1.0, 0.0)])
def test_zero_oscillator_strength(Q, Cm):
    with pytest.raises(NoConfinement):
        effective_couplings(SystemParams(Q=Q, Cm=Cm), None, QuantumNumbers(0, 1))


def test_negative_C1_without_field_is_unconfined():
    with pytest.raises(NoConfinement):
        effective_couplings(SystemParams(Q=0.0), ScalarPotential(-1.0, 0.0, 0.0), QuantumNumbers(0, 1))


def test_invalid_inputs():
    with pytest.raises(ValueError):
        SystemParams(m=0.0)
    with pytest.raises(ValueError):
        SystemParams(k=math.inf)
    with pytest.raises(ValueError):
        QuantumNumbers(-1, 0)
    with pytest.raises(ValueError):
        QuantumNumbers(0, 0.5)
    with pytest.raises(ValueError):
        ScalarPotential(math.nan, 0, 0)


def test_effective_potential_case1_at_unit_radius():
    W = effective_radial_potential(SystemParams(), None, QuantumNumbers(0, 0))
    assert W(1.0) == 0.75


def test_effective_potential_fig1_against_symbolic():
    # Independent route: substitute into the raw radial equation symbolically.
    rho, m, Q, lam, Cm, beta, k, l, C1, C2 = sympy.symbols("rho m Q lam Cm beta k l C1 C2")
    s = l - beta * k
    inv_sq = s**2 - 2 * m * Q * lam + 2 * m * C2
    W_expr = (inv_sq - sympy.Rational(1, 4)) / rho**2 + (Q**2 * Cm**2 + 2 * m * C1) * rho**2
    subs = {rho: 1, m: 1, Q: 1, lam: 1, Cm: 1, beta: sympy.Rational(1, 2), k: sympy.Rational(1, 2), l: 1, C1: 1, C2: 1}
    expected = float(W_expr.subs(subs))
    assert expected == 3.3125
    W = effective_radial_potential(FIG1_PARAMS, FIG1_POTENTIAL, QuantumNumbers(0, FIG1_L))
    assert W(1.0) == pytest.approx(expected, rel=1e-15)


def test_effective_potential_is_confining():
    W = effective_radial_potential(FIG1_PARAMS, FIG1_POTENTIAL, QuantumNumbers(0, FIG1_L))
    for rho in (100.0, 1000.0, 1e4):
        assert W(rho) / (3 * rho**2) == pytest.approx(1.0, rel=1e-6)
    with pytest.raises(ValueError):
        W(0.0)


def test_energy_map_round_trip():
    q = QuantumNumbers(2, FIG1_L)
    eps = transformed_eigenvalue(FIG1_PARAMS, FIG1_POTENTIAL, q, 8.5)
    assert physical_energy(FIG1_PARAMS, FIG1_POTENTIAL, q, eps) == pytest.approx(8.5, rel=1e-15)


dyadic = st.integers(-256, 256).map(lambda i: i / 64)
powers_of_two = st.sampled_from([0.25, 0.5, 1.0, 2.0, -0.5, -1.0])


@given(l=st.integers(-5, 5), delta=st.integers(-3, 3), beta=dyadic, k=powers_of_two,
       lam=st.sampled_from([-0.5, 0.0, 0.01, 0.1]))
def test_translation_property(l, delta, beta, k, lam):
    p1 = SystemParams(Q=1.0, lam=lam, beta=beta, k=k)
    p2 = SystemParams(Q=1.0, lam=lam, beta=beta + delta / k, k=k)
    try:
        c1 = effective_couplings(p1, None, QuantumNumbers(0, l))
    except BoundConditionViolated:
        with pytest.raises(BoundConditionViolated):
            effective_couplings(p2, None, QuantumNumbers(0, l + delta))
        return
    c2 = effective_couplings(p2, None, QuantumNumbers(0, l + delta))
    assert c1 == c2


finite = st.floats(-3, 3, allow_nan=False)


@given(m=st.floats(0.1, 3), Q=finite, lam=finite, Cm=finite, beta=finite, k=finite, l=st.integers(-4, 4))
def test_zero_potential_reduces_to_case1(m, Q, lam, Cm, beta, k, l):
    p = SystemParams(m, Q, lam, Cm, beta, k)
    q = QuantumNumbers(0, l)
    try:
        c1 = effective_couplings(p, None, q)
    except (BoundConditionViolated, NoConfinement) as exc:
        with pytest.raises(type(exc)):
            effective_couplings(p, ScalarPotential(), q)
        return
    c2 = effective_couplings(p, ScalarPotential(), q)
    assert (c1.shifted_l, c1.Lsq, c1.Omega) == (c2.shifted_l, c2.Lsq, c2.Omega)


@given(qlam=st.lists(st.integers(-2000, 200), min_size=2, max_size=6, unique=True))
def test_Lsq_decreases_with_Q_lambda(qlam):
    qlam = [x / 1000 for x in sorted(qlam)]
    values = [effective_couplings(SystemParams(Q=1.0, lam=x, beta=0.5, k=0.5), None, QuantumNumbers(0, 1)).Lsq
              for x in qlam]
    assert all(a > b for a, b in zip(values, values[1:]))
