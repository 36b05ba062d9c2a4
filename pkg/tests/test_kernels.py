import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vlasov_shells import AnsatzParams, DomainError, PhaseState
from vlasov_shells.kernels import (beta_const_newton, beta_const_rel, distribution, effective_potential, g_newton,
                                   g_rel, h_rel, particle_energy_newton, particle_energy_rel, rel_kernel_argument,
                                   source_newton, source_rel)
from vlasov_shells.verify.oracles import (ckl_quadrature, cl_quadrature, kernel_gauss_oracle,
                                          velocity_space_oracle)


def test_ckl_isotropic_closed_form():
    # k = l = 0: rho is c0 times the volume of the velocity ball |v| <= sqrt(2(E0-U)).
    assert beta_const_newton(0.0, 0.0) == pytest.approx(4.0 * math.pi * 2.0**1.5 / 3.0, rel=1e-15)


def test_cl_isotropic_closed_form():
    # int_0^1 (1-s)^{-1/2} ds = 2, so c_0 = 4 pi.
    assert beta_const_rel(0.0) == pytest.approx(4.0 * math.pi, rel=1e-15)


@pytest.mark.parametrize("k,l", [(0, 0), (1, 0), (0, 1), (1, 1), (0.5, -0.25), (2.5, 0.3)])
def test_constants_match_quadrature(k, l):
    assert beta_const_newton(k, l) == pytest.approx(ckl_quadrature(k, l), rel=1e-10)
    assert beta_const_rel(l) == pytest.approx(cl_quadrature(l), rel=1e-10)


@pytest.mark.parametrize("k,l,regime", [(-1.0, 0.0, "newtonian"), (0.0, -1.0, "newtonian"),
                                        (4.0, 0.0, "newtonian"), (-0.8, -0.2, "newtonian"),
                                        (-0.1, 0.0, "relativistic"), (0.0, -0.5, "relativistic")])
def test_exponent_constraints(k, l, regime):
    with pytest.raises(DomainError):
        AnsatzParams(k, l, 1.0, 1.0 if regime == "relativistic" else -1.0, regime=regime)


@pytest.mark.parametrize("changes", [dict(c0=0.0), dict(L0=-1e-3), dict(E0=math.nan), dict(regime="mond")])
def test_param_validation(changes):
    base = dict(k=0.0, l=0.0, c0=1.0, E0=-1.0)
    base.update(changes)
    with pytest.raises(DomainError):
        AnsatzParams(**base)


def test_relativistic_cutoff_must_be_positive():
    with pytest.raises(DomainError):
        AnsatzParams(0.0, 0.0, 1.0, -0.5, regime="relativistic")


def test_kernels_vanish_outside_support():
    p = AnsatzParams(1.0, 0.5, 2.0, -1.0)
    assert g_newton(-1.0, p) == 0.0
    assert g_newton(0.3, p) == 0.0
    q = AnsatzParams(1.0, 0.5, 2.0, 1.1, regime="relativistic")
    assert g_rel(1.1, q) == 0.0 and h_rel(1.5, q) == 0.0
    assert source_rel(1.0, math.log(1.2), q) == (0.0, 0.0)
    with pytest.raises(DomainError):
        source_newton(0.0, -2.0, p)


def test_g_rel_against_gauss_oracle():
    # Frozen from 10^4-node Gauss-Legendre after the E = u cosh s substitution.
    p = AnsatzParams(0.0, 0.0, 1.0, 2.0, regime="relativistic")
    assert g_rel(1.0, p) == pytest.approx(36.0211140218855, rel=1e-12)
    assert h_rel(1.0, p) == pytest.approx(7.510070719735682, rel=1e-12)
    q = AnsatzParams(1.5, 0.7, 1.0, 1.3, regime="relativistic")
    for u in (0.4, 0.9, 1.25):
        assert g_rel(u, q) == pytest.approx(kernel_gauss_oracle(u, q), rel=1e-10)
        assert h_rel(u, q) == pytest.approx(kernel_gauss_oracle(u, q, pressure=True), rel=1e-10)


def test_relativistic_kernel_is_bit_reproducible():
    p = AnsatzParams(0.5, 0.25, 1.0, 1.05, regime="relativistic")
    u = np.linspace(0.5, 1.04, 7)
    assert np.array_equal(g_rel(u, p), g_rel(u.copy(), p))


@pytest.mark.parametrize("k,l,r,U", [(0, 0, 0.3, -1.4), (1, 0.5, 0.5, -1.2), (0.5, -0.25, 0.8, -1.6),
                                     (2.5, 0.3, 1.0, -1.1)])
def test_newton_source_matches_velocity_space(k, l, r, U):
    p = AnsatzParams(k, l, 1.3, -1.0, L0=0.05)
    assert source_newton(r, U, p) == pytest.approx(velocity_space_oracle(r, U, p), rel=1e-6)


@pytest.mark.parametrize("k,l,r,mu", [(0, 0, 0.4, -0.2), (1, 0.5, 0.7, -0.1), (0.5, -0.25, 0.9, -0.3)])
def test_rel_source_matches_velocity_space(k, l, r, mu):
    p = AnsatzParams(k, l, 0.7, 1.05, L0=0.05, regime="relativistic")
    rho, pr = source_rel(r, mu, p)
    rho_o, p_o = velocity_space_oracle(r, mu, p)
    assert rho == pytest.approx(rho_o, rel=1e-6)
    assert pr == pytest.approx(p_o, rel=1e-6)


def test_velocity_oracle_outside_support():
    p = AnsatzParams(0.0, 0.0, 1.0, -1.0, L0=0.5)
    assert velocity_space_oracle(0.1, -1.2, p) == 0.0
    q = AnsatzParams(0.0, 0.0, 1.0, 1.0, L0=0.5, regime="relativistic")
    assert velocity_space_oracle(0.1, 0.0, q) == (0.0, 0.0)


@settings(max_examples=40, deadline=None)
@given(k=st.floats(0.0, 3.0), l=st.floats(-0.4, 2.0), u=st.floats(-3.0, -1.0))
def test_newton_kernel_monotone_in_u(k, l, u):
    p = AnsatzParams(k, l, 1.0, -1.0)
    assert g_newton(u, p) >= g_newton(u + 1e-3, p) >= 0.0


@settings(max_examples=25, deadline=None)
@given(k=st.floats(0.0, 3.0), l=st.floats(-0.4, 2.0), frac=st.floats(0.05, 0.99))
def test_pressure_below_density(k, l, frac):
    # |v|^2/(1+|v|^2) < 1 in the velocity moments, so 0 < p < rho inside the support.
    p = AnsatzParams(k, l, 1.0, 1.2, regime="relativistic")
    rho, pr = source_rel(1.0, math.log(1.2 * frac), p)
    assert 0.0 < pr < rho


@settings(max_examples=50, deadline=None)
@given(r=st.floats(0.01, 10.0), U=st.floats(-5.0, 0.0), L0=st.floats(0.0, 1.0))
def test_kernel_arguments(r, U, L0):
    assert effective_potential(r, U, L0) == pytest.approx(U + L0 / (2 * r * r))
    assert rel_kernel_argument(r, U, L0) == pytest.approx(math.exp(U) * math.sqrt(1 + L0 / r**2))


def test_phase_state_invariants_and_distribution():
    s = PhaseState(np.array([1.0, 0.0, 0.0]), np.array([0.1, 0.2, 0.0]))
    assert s.r == pytest.approx(1.0)
    assert s.L == pytest.approx(0.04)
    assert particle_energy_newton(s, -1.0) == pytest.approx(-1.0 + 0.5 * 0.05)
    assert particle_energy_rel(s, 0.0) == pytest.approx(math.sqrt(1.05))
    p = AnsatzParams(1.0, 1.0, 2.0, -0.5, L0=0.01)
    assert distribution(-0.7, 0.03, p) == pytest.approx(2.0 * 0.2 * 0.02)
    assert distribution(-0.4, 0.03, p) == 0.0
    assert distribution(-0.7, 0.005, p) == 0.0
