import math

import numpy as np
import pytest

from conftest import NEWTON_BALL, NEWTON_SHELL
from vlasov_shells import AnsatzParams, SolverConfig, UsageError, solve
from vlasov_shells.verify import (CheckResult, ValidationReport, boundary_conditions, characteristic_drift,
                                  field_residuals, l0_family_trend, parse_checks, shell_structure_check, validate)
from vlasov_shells.verify.orbits import RadialField, circular_state, integrate_orbit, invariants
from vlasov_shells.verify.oracles import rk4_profile
from vlasov_shells.verify.report import worst
from vlasov_shells.verify.residuals import centered_derivative


def test_check_result_semantics():
    assert CheckResult(1e-7, 1e-6).passed
    assert CheckResult(0.0, 0.0).passed
    assert not CheckResult(2e-6, 1e-6).passed
    assert not CheckResult(math.nan, 1.0).passed
    d = CheckResult(0.5, 1.0, [0.25], "x").to_dict()
    assert d == {"max_residual": 0.5, "tolerance": 1.0, "pass": True, "locations": [0.25], "note": "x"}


def test_worst_treats_nan_as_failure():
    value, locs = worst(np.array([1e-9, np.nan, 1e-3]), np.array([0.1, 0.2, 0.3]))
    assert value == math.inf and locs[0] == 0.2


def test_report_digest_is_order_independent():
    a = ValidationReport({"b": CheckResult(1.0, 2.0), "a": CheckResult(3.0, 2.0, [0.5])})
    b = ValidationReport({"a": CheckResult(3.0, 2.0, [0.5]), "b": CheckResult(1.0, 2.0)})
    assert a.digest() == b.digest()
    assert a.failures() == ["a"] and not a.passed


def test_centered_derivative_is_fourth_order():
    errs = []
    for n in (101, 201):
        x = np.linspace(0.0, 1.0, n)
        d = centered_derivative(np.sin(3 * x), x[1] - x[0])
        errs.append(np.nanmax(np.abs(d - 3 * np.cos(3 * x))))
    assert errs[0] / errs[1] == pytest.approx(16.0, rel=0.1)


def test_parse_checks():
    assert parse_checks(None) == parse_checks("all") == ["field_residuals", "boundary_conditions",
                                                        "shell_structure", "characteristic_drift"]
    assert parse_checks("shell_structure,field_residuals") == ["field_residuals", "shell_structure"]
    with pytest.raises(UsageError):
        parse_checks("poisson")


@pytest.mark.parametrize("name", ["newton_ball", "newton_shell", "newton_aniso", "rel_ball", "rel_shell",
                                  "rel_aniso"])
def test_static_checks_pass(request, name):
    sol = request.getfixturevalue(name)
    report = validate(sol, ["field_residuals", "boundary_conditions", "shell_structure"])
    assert report.passed, report.summary_lines()


def test_vacuum_reports_are_trivial():
    with pytest.warns(RuntimeWarning):
        sol = solve(NEWTON_BALL[0], -0.5)
    rep = validate(sol)
    assert rep.passed
    assert all(c.max_residual == 0.0 for c in rep.values())


def test_shell_structure_of_ball(newton_ball):
    rep = shell_structure_check(newton_ball)
    assert rep["shell_structure/inner_vacuum"].note.startswith("R_i = 0")
    assert rep["shell_structure/isotropic_monotone"].passed


@pytest.mark.parametrize("name", ["newton_shell", "rel_shell"])
def test_corrupted_density_is_located(request, name):
    sol = request.getfixturevalue(name)
    rho = sol.profile.rho.copy()
    inside = np.flatnonzero((sol.profile.grid > sol.R_i) & (sol.profile.grid < sol.R_0))
    i = int(inside[len(inside) // 2])
    rho[i] *= 1.1
    bad = sol.replace(profile=type(sol.profile)(*(rho if k == 3 else col for k, col in
                                                  enumerate(sol.profile.table().T))))
    bad.profile.plateau_radius = sol.profile.plateau_radius
    rep = field_residuals(bad)
    key = "field_residuals/poisson" if sol.regime == "newtonian" else "field_residuals/rf1"
    assert not rep[key].passed
    assert rep[key].locations[0] == sol.profile.grid[i]


def test_boundary_checks_detect_unnormalized():
    raw = solve(*NEWTON_SHELL, normalize=False)
    rep = boundary_conditions(raw)
    assert not rep["boundary_conditions/at_infinity"].passed
    assert rep["boundary_conditions/exterior"].passed


@pytest.mark.parametrize("name", ["newton_shell", "rel_shell"])
def test_circular_orbit_keeps_radius(request, name):
    sol = request.getfixturevalue(name)
    field = RadialField(sol)
    r0 = 0.5 * (sol.R_i + sol.R_0)
    t, y, _ = integrate_orbit(sol, circular_state(sol, r0, field), periods=5, field=field)
    r = np.linalg.norm(y[:3], axis=0)
    assert np.max(np.abs(r - r0)) <= 1e-8 * r0


def test_orbit_outside_support_has_zero_f(newton_shell):
    from vlasov_shells.kernels import distribution
    field = RadialField(newton_shell)
    # Inside the shell but with angular momentum below the cut-off L0.
    r0 = 0.5 * (newton_shell.R_i + newton_shell.R_0)
    vt = 0.5 * math.sqrt(newton_shell.params.L0) / r0
    y0 = np.array([r0, 0.0, 0.0, 0.0, vt, 0.0])
    t, y, _ = integrate_orbit(newton_shell, y0, periods=2, field=field)
    E, L, _ = invariants(field, y)
    assert np.all(distribution(E, L, newton_shell.params) == 0.0)


def test_hermite_field_reproduces_nodes(rel_shell):
    field = RadialField(rel_shell)
    i = len(field.r) // 3
    val, der = field(float(field.r[i]))
    assert val == rel_shell.profile.mu[i]
    assert der == pytest.approx(field.df[i])


def test_characteristic_drift_newton(newton_aniso):
    rep = characteristic_drift(newton_aniso)
    assert rep.passed, rep.summary_lines()
    assert "10 orbits" in rep["characteristic_drift/energy"].note


def test_trend_newton_small_amplitude():
    p = AnsatzParams(0.0, 0.0, 1e-3, -1.0)
    rep, rows = l0_family_trend(p, -1.5, [1e-1, 1e-2, 1e-3, 1e-4], SolverConfig(output_grid_size=1025))
    assert rep.passed, rep.summary_lines()
    assert [r["L0"] for r in rows] == [1e-1, 1e-2, 1e-3, 1e-4]
    d = [r["d"] for r in rows]
    assert all(b <= a for a, b in zip(d, d[1:]))


def test_trend_rejects_bad_sequence():
    with pytest.raises(ValueError):
        l0_family_trend(NEWTON_BALL[0], -1.5, [1e-3, 1e-2])
    with pytest.raises(ValueError):
        l0_family_trend(NEWTON_BALL[0], -1.5, [1e-2, 0.0])


def test_rk4_oracle_is_fourth_order():
    # k + l + 3/2 = 4 keeps the density smooth enough at the support edge for full order.
    p, Uc = NEWTON_SHELL
    p = p.replace(k=2.5)
    sol = solve(p, Uc, normalize=False)
    errs = []
    for steps in (200, 400):
        r, U, _ = rk4_profile(p, Uc, sol.R_0, steps)
        errs.append(np.max(np.abs(U - sol.profile.state_at(r)[0])))
    assert errs[0] / errs[1] == pytest.approx(16.0, rel=0.25)
