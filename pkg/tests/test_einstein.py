import math

import numpy as np
import pytest

from conftest import REL_BALL, REL_SHELL
from vlasov_shells import (AnsatzParams, DomainError, HorizonError, InfeasibleCenterError, SolverConfig,
                           einstein, solve)
from vlasov_shells.einstein import (inner_radius_rel, integrate_einstein, lambda_from_mass, rescale_rel,
                                    solve_for_target_rel, target_scale_rel)

SMALL = SolverConfig(output_grid_size=513)


def test_reference_ball_frozen(rel_ball):
    # [DERIVED] adaptive solve, cross-checked against the fixed-step RK4 oracle.
    assert rel_ball.R_i == 0.0
    assert rel_ball.R_0 == pytest.approx(0.594012377220062, rel=1e-9)
    assert rel_ball.M == pytest.approx(0.01927791053577458, rel=1e-9)
    assert rel_ball.compactness == pytest.approx(0.07636887386678241, rel=1e-8)
    assert rel_ball.params.E0 == pytest.approx(0.9670018421896219, rel=1e-10)
    assert rel_ball.center_value == pytest.approx(-0.08234504264360344, rel=1e-9)


def test_reference_shell_frozen(rel_shell):
    assert rel_shell.R_i == pytest.approx(0.3123475237772121, rel=1e-14)
    assert rel_shell.R_0 == pytest.approx(0.8599682359676848, rel=1e-9)
    assert rel_shell.M == pytest.approx(0.0586854543244256, rel=1e-9)


def test_inner_radius_closed_form():
    p, mu_c = REL_SHELL
    assert inner_radius_rel(p, mu_c) == pytest.approx(math.sqrt(0.01 / (1.05**2 - 1.0)))
    with pytest.raises(InfeasibleCenterError):
        inner_radius_rel(p, math.log(1.06))


def test_vacuum_when_center_above_cutoff():
    p, _ = REL_BALL
    with pytest.warns(RuntimeWarning):
        sol = solve(p, 0.1, SMALL)
    assert sol.vacuum and sol.M == 0.0
    assert np.all(sol.profile.mu == 0.0) and np.all(sol.profile.lambda_m == 0.0)


def test_horizon_guard(monkeypatch):
    # Physical configurations stay below 2m/r = 8/9, so tighten the guard to exercise it.
    monkeypatch.setattr(einstein, "HORIZON_DELTA", 0.95)
    with pytest.raises(HorizonError):
        integrate_einstein(*REL_BALL, SMALL)


def test_lambda_from_mass():
    r = np.array([0.0, 1.0, 2.0])
    m = np.array([0.0, 0.25, 0.5])
    np.testing.assert_allclose(lambda_from_mass(r, m), [0.0, 0.5 * math.log(2.0), 0.5 * math.log(2.0)])


def test_exterior_is_schwarzschild(rel_shell):
    prof = rel_shell.profile
    ext = prof.grid >= rel_shell.R_0
    r = prof.grid[ext]
    q = 1.0 - 2.0 * rel_shell.M / r
    np.testing.assert_allclose(prof.mu[ext], 0.5 * np.log(q), rtol=0, atol=1e-10)
    np.testing.assert_allclose(prof.lambda_m[ext], -0.5 * np.log(q), rtol=0, atol=1e-10)
    assert prof.lambda_m[0] == 0.0
    assert np.all(prof.rho[ext] == 0.0) and np.all(prof.p[ext] == 0.0)


def test_normalization_rescales_cutoff_and_amplitude():
    raw = solve(*REL_SHELL, normalize=False)
    sol = einstein.normalize_mu(raw)
    mu_inf = raw.potential_at_infinity
    assert sol.params.E0 == pytest.approx(1.05 * math.exp(-mu_inf), rel=1e-15)
    assert sol.params.c0 == pytest.approx(math.exp(0.0 * mu_inf), rel=1e-15)  # k = 0
    # The normalized parameters and center reproduce the same spacetime.
    again = solve(sol.params, sol.center_value, SMALL)
    assert again.R_0 == pytest.approx(sol.R_0, rel=1e-8)
    assert again.M == pytest.approx(sol.M, rel=1e-8)


def test_normalization_with_energy_exponent(rel_aniso):
    raw = solve(AnsatzParams(0.5, 0.25, 1.0, 1.05, L0=0.01, regime="relativistic"), 0.0, SMALL, normalize=False)
    mu_inf = raw.potential_at_infinity
    assert rel_aniso.params.c0 == pytest.approx(math.exp(0.5 * mu_inf), rel=1e-12)
    again = solve(rel_aniso.params, rel_aniso.center_value, SMALL)
    assert again.M == pytest.approx(rel_aniso.M, rel=1e-8)


def test_source_ordering_and_support_coincidence(rel_aniso):
    prof = rel_aniso.profile
    assert np.all(prof.p <= prof.rho) and np.all(prof.p >= 0.0)
    assert np.array_equal(prof.rho > 0, prof.p > 0)
    assert rel_aniso.compactness < 8.0 / 9.0


@pytest.mark.parametrize("a", [2.0, 0.5, 3.7])
def test_scaling_closed_form_and_resolve(rel_shell, a):
    s = rescale_rel(rel_shell, a)
    assert s.M == pytest.approx(rel_shell.M / a, rel=1e-14)
    assert s.R_0 == pytest.approx(rel_shell.R_0 / a, rel=1e-14)
    assert s.R_i == pytest.approx(rel_shell.R_i / a, rel=1e-14)
    assert s.compactness == rel_shell.compactness
    np.testing.assert_array_equal(s.profile.mu, rel_shell.profile.mu)
    fresh = solve(s.params, s.center_value)
    mu_fresh, m_fresh = fresh.profile.state_at(s.profile.grid)
    assert np.max(np.abs(mu_fresh - s.profile.mu)) <= 1e-6 * np.max(np.abs(s.profile.mu))
    assert np.max(np.abs(m_fresh - s.profile.m)) <= 1e-6 * s.M
    assert fresh.M == pytest.approx(s.M, rel=1e-6)


@pytest.mark.parametrize("name", ["M_target", "R0_target", "Ri_target"])
def test_single_target(rel_shell, name):
    a = target_scale_rel(rel_shell, **{name: 2.0})
    s = rescale_rel(rel_shell, a)
    value = {"M_target": s.M, "R0_target": s.R_0, "Ri_target": s.R_i}[name]
    assert value == pytest.approx(2.0, rel=1e-8)


def test_target_arity(rel_shell):
    with pytest.raises(DomainError):
        target_scale_rel(rel_shell, M_target=1.0, R0_target=1.0)
    with pytest.raises(DomainError):
        target_scale_rel(rel_shell)


def test_solve_for_target():
    p, mu_c = REL_BALL
    sol = solve_for_target_rel(p, mu_c, R0_target=10.0, config=SMALL)
    assert sol.R_0 == pytest.approx(10.0, rel=1e-8)


def test_exterior_reignition_flag(rel_shell):
    # Normalized E0 < 1 while e^mu sqrt(1 + L0/r^2) -> 1: no matter beyond R0.
    assert rel_shell.params.E0 < 1.0 and rel_shell.exterior_reignition is False
    # With E0 > 1 the ansatz would be positive far out; the exterior stays vacuum but is flagged.
    p = rel_shell.params.replace(E0=1.1)
    assert einstein.exterior_reignition(0.0, rel_shell.M, p, rel_shell.R_0)
    assert not einstein.exterior_reignition(0.0, rel_shell.M, rel_shell.params, rel_shell.R_0)


def test_integrate_rejects_newtonian_params():
    with pytest.raises(DomainError):
        integrate_einstein(AnsatzParams(0.0, 0.0, 1.0, -1.0), -1.5)
