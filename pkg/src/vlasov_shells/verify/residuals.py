"""Finite-difference field-equation residuals and support-structure certification.

Everything here reads only the tabulated profile and the scalar fields of the
solution, so a profile read back from disk gives a bit-identical report.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import cumulative_simpson

from ..profiles import ShellSolution
from .report import CheckResult, ValidationReport, check_from, worst

FIELD_TOL = 1e-6
MASS_TOL = 1e-8
METRIC_TOL = 1e-8
BOUNDARY_TOL = 1e-10
RADIUS_TOL = 1e-8
EXCLUDE_NODES = 3


def centered_derivative(y: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order centered first derivative; the two end nodes on each side are NaN."""
    d = np.full_like(y, np.nan)
    d[2:-2] = (y[:-4] - 8.0 * y[1:-3] + 8.0 * y[3:-1] - y[4:]) / (12.0 * h)
    return d


def interior_mask(solution: ShellSolution) -> np.ndarray:
    """Grid nodes whose stencil stays clear of r = 0, R_i and R0 by EXCLUDE_NODES spacings."""
    r = solution.profile.grid
    h = r[1] - r[0]
    mask = np.zeros(r.shape, bool)
    mask[2:-2] = True
    for edge in {0.0, solution.R_i, solution.R_0}:
        mask &= np.abs(r - edge) > EXCLUDE_NODES * h
    return mask


def _relative(res, scale):
    return np.abs(res) / np.maximum(1.0, np.abs(scale))


def _vacuum_report(prefix, names):
    return ValidationReport({f"{prefix}/{n}": CheckResult(0.0, 0.0, note="vacuum") for n in names})


def field_residuals(solution: ShellSolution) -> ValidationReport:
    """Residuals of the Poisson or Einstein equations on the uniform output grid."""
    prof = solution.profile
    r = prof.grid
    h = r[1] - r[0]
    if solution.vacuum:
        names = ("poisson", "integrated_mass") if solution.regime == "newtonian" else (
            "rf1", "rf2", "metric", "regular_center", "no_horizon", "source_ordering")
        return _vacuum_report("field_residuals", names)
    mask = interior_mask(solution)
    rep = ValidationReport()
    start = 1 + EXCLUDE_NODES

    # Cumulative Simpson from a node clear of the center, matched to the stored m there.
    four_pi_r2_rho = 4.0 * math.pi * r**2 * prof.rho
    cum = prof.m[start] + cumulative_simpson(four_pi_r2_rho[start:], dx=h, initial=0.0)
    mass_res = np.abs(prof.m[start:] - cum) / max(solution.M, np.finfo(float).tiny)

    if solution.regime == "newtonian":
        # Relative to the peak source: every term of (r^2 U')' = 4 pi r^2 rho scales alike
        # under (lambda, gamma), so the residual is scale-covariant.
        source = 4.0 * math.pi * r**2 * prof.rho
        peak = float(np.max(np.abs(source[np.isfinite(source)])))
        res = np.abs(centered_derivative(r**2 * prof.Uprime, h) - source) / peak
        rep["field_residuals/poisson"] = check_from(res[mask], r[mask], FIELD_TOL,
                                                     note="relative to max 4 pi r^2 rho")
        rep["field_residuals/integrated_mass"] = check_from(mass_res, r[start:], MASS_TOL)
        return _fix_order(rep)

    lam, mu = prof.lambda_m, prof.mu
    e2l = np.exp(-2.0 * lam)
    src1 = 8.0 * math.pi * r**2 * prof.rho
    src2 = 8.0 * math.pi * r**2 * prof.p
    rf1 = _relative(e2l * (2.0 * r * centered_derivative(lam, h) - 1.0) + 1.0 - src1, src1)
    rf2 = _relative(e2l * (2.0 * r * centered_derivative(mu, h) + 1.0) - 1.0 - src2, src2)
    pos = r > 0
    metric = np.abs(e2l[pos] - (1.0 - 2.0 * prof.m[pos] / r[pos]))
    compact = 2.0 * prof.m[pos] / r[pos]
    ordering = np.maximum.reduce([prof.p - prof.rho, -prof.p, -prof.rho, np.zeros_like(r)])
    finite = np.isfinite(prof.rho) & np.isfinite(prof.p)
    note = "absolute, relative where the source exceeds 1"
    rep["field_residuals/rf1"] = check_from(rf1[mask], r[mask], FIELD_TOL, note)
    rep["field_residuals/rf2"] = check_from(rf2[mask], r[mask], FIELD_TOL, note)
    rep["field_residuals/integrated_mass"] = check_from(mass_res, r[start:], MASS_TOL)
    rep["field_residuals/metric"] = check_from(metric, r[pos], METRIC_TOL)
    rep["field_residuals/regular_center"] = CheckResult(abs(float(lam[0])), 0.0, [0.0] if lam[0] else [])
    i = int(np.argmax(compact))
    rep["field_residuals/no_horizon"] = CheckResult(float(compact[i]), 1.0 - 1e-10, [float(r[pos][i])],
                                                    note="max 2m/r (compactness)")
    rep["field_residuals/source_ordering"] = check_from(ordering[finite], r[finite], 0.0,
                                                         note="0 <= p <= rho")
    return _fix_order(rep)


def _fix_order(rep):
    return ValidationReport(sorted(rep.items()))


def boundary_conditions(solution: ShellSolution) -> ValidationReport:
    """Exterior matches the exact vacuum solution; potential vanishes at infinity."""
    prof = solution.profile
    r = prof.grid
    if solution.vacuum:
        return _vacuum_report("boundary_conditions", ("exterior", "at_infinity"))
    rep = ValidationReport()
    ext = r >= solution.R_0
    re = r[ext]
    M = solution.M
    inf = solution.potential_at_infinity
    if solution.regime == "newtonian":
        scale = M / re
        res = np.abs(prof.U[ext] - (inf - M / re)) / scale
        rep["boundary_conditions/exterior"] = check_from(res, re, BOUNDARY_TOL)
    else:
        half_log = 0.5 * np.log1p(-2.0 * M / re)
        res_mu = np.abs(prof.mu[ext] - (inf + half_log))
        res_lam = np.abs(prof.lambda_m[ext] + half_log)
        res = np.maximum(res_mu, res_lam)
        rep["boundary_conditions/exterior"] = check_from(res, re, BOUNDARY_TOL)
        rep["boundary_conditions/regular_center"] = CheckResult(abs(float(prof.lambda_m[0])), 0.0)
    rep["boundary_conditions/at_infinity"] = CheckResult(abs(inf), 0.0, note="potential at infinity")
    return _fix_order(rep)


def closed_form_inner_radius(solution: ShellSolution) -> float:
    p = solution.params
    if p.L0 == 0:
        return 0.0
    if solution.regime == "newtonian":
        return math.sqrt(p.L0 / (2.0 * (p.E0 - solution.center_value)))
    return math.sqrt(p.L0 / (p.E0**2 * math.exp(-2.0 * solution.center_value) - 1.0))


def shell_structure_check(solution: ShellSolution) -> ValidationReport:
    """Certify supp rho = [R_i, R0] on the grid, the closed-form R_i, and single-shell structure."""
    names = ("inner_vacuum", "outer_vacuum", "shell_nonempty", "inner_radius_closed_form",
             "inner_radius_positive")
    if solution.vacuum:
        return _vacuum_report("shell_structure", names)
    prof = solution.profile
    p = solution.params
    r, rho = prof.grid, prof.rho
    R_i, R0 = solution.R_i, solution.R_0
    rep = ValidationReport()
    scale = float(np.max(rho[np.isfinite(rho)]))

    if R_i > 0:
        sel = r <= R_i
        rep["shell_structure/inner_vacuum"] = check_from(np.abs(rho[sel]) / scale, r[sel], 0.0)
    else:
        rep["shell_structure/inner_vacuum"] = CheckResult(0.0, 0.0, note="R_i = 0: ball support")
    sel = r >= R0
    rep["shell_structure/outer_vacuum"] = check_from(np.abs(rho[sel]) / scale, r[sel], 0.0)
    inside = (r > R_i) & (r < R0)
    rep["shell_structure/shell_nonempty"] = CheckResult(0.0 if np.any(rho[inside] > 0) else 1.0, 0.0)

    r_closed = closed_form_inner_radius(solution)
    err = abs(R_i - r_closed) / r_closed if r_closed > 0 else abs(R_i)
    rep["shell_structure/inner_radius_closed_form"] = CheckResult(err, RADIUS_TOL, [R_i])
    rep["shell_structure/inner_radius_positive"] = CheckResult(float((R_i > 0) != (p.L0 > 0)), 0.0)

    if solution.regime == "newtonian":
        pos = inside & (r > 0)
        dV = prof.m[pos] / r[pos] ** 2 - p.L0 / r[pos] ** 3
        sign = np.sign(dV)
        sign = sign[sign != 0]
        changes = int(np.count_nonzero(np.diff(sign)))
        r_star = p.L0 / solution.M
        bad = max(changes - 1, 0) + (1 if r_star > R0 * (1 + 1e-12) else 0)
        rep["shell_structure/single_shell"] = CheckResult(float(bad), 0.0,
                                                          note=f"V' sign changes {changes}, r*={r_star:.6g}")
    else:
        mismatch = (prof.rho > 0) != (prof.p > 0)
        rep["shell_structure/support_coincidence"] = CheckResult(float(np.count_nonzero(mismatch)), 0.0,
                                                                 [float(x) for x in r[mismatch][:3]])

    if p.L0 == 0 and p.l == 0:
        rr = rho[r < R0]
        rise = np.diff(rr)
        res, loc = worst(np.maximum(rise, 0.0) / scale, r[r < R0][1:])
        rep["shell_structure/isotropic_monotone"] = CheckResult(res, 0.0, loc)
    return _fix_order(rep)
