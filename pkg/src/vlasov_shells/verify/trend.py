"""Continuity of the shell family as the angular-momentum cut-off L0 goes to zero."""

from __future__ import annotations

import math

import numpy as np

from ..errors import ShellError
from ..kernels import AnsatzParams
from ..profiles import SolverConfig
from .report import CheckResult, ValidationReport

LIMIT_TOL = 1e-4
RADIUS_TOL = 1e-8
#: Allowed growth of d(L0)/sqrt(L0) relative to its value at the largest L0.
SQRT_RATIO_GROWTH = 10.0


def closed_form_plateau(params: AnsatzParams, center: float) -> float:
    if params.L0 == 0:
        return 0.0
    if params.regime == "newtonian":
        return math.sqrt(params.L0 / (2.0 * (params.E0 - center)))
    return math.sqrt(params.L0 / (params.E0**2 * math.exp(-2.0 * center) - 1.0))


def solve_family(params: AnsatzParams, center: float, L0_values, config: SolverConfig | None = None):
    """Solve the un-normalized family sharing (k, l, c0, E0, center); failures are kept as exceptions."""
    from ..pipeline import solve

    out = []
    for L0 in L0_values:
        try:
            out.append(solve(params.replace(L0=float(L0)), center, config, normalize=False))
        except ShellError as exc:
            out.append(exc)
    return out


def family_distances(base, members, samples: int = 4001):
    """sup over [0, R0 of the L0 = 0 solution] of |potential_L0 - potential_0|."""
    r = np.linspace(0.0, base.R_0, samples)
    ref = base.profile.state_at(r)[0]
    dists = []
    for sol in members:
        if isinstance(sol, Exception):
            dists.append(math.nan)
        else:
            dists.append(float(np.max(np.abs(sol.profile.state_at(r)[0] - ref))))
    return dists


def _check_sequence(seq):
    if any(b >= a for a, b in zip(seq, seq[1:])) or any(x <= 0 for x in seq):
        raise ValueError("L0 sequence must be strictly decreasing and positive")


def trend_report(params: AnsatzParams, center: float, L0_sequence, base, members):
    """Trend checks for already solved (un-normalized) family members.

    ``base`` is the L0 = 0 solution; ``members`` holds a solution or the
    raised exception for every entry of ``L0_sequence``.
    """
    seq = [float(x) for x in L0_sequence]
    _check_sequence(seq)
    dists = family_distances(base, members)
    rows = []
    for L0, sol, d in zip(seq, members, dists):
        row = {"L0": L0, "d": d, "r_L0_closed_form": closed_form_plateau(params.replace(L0=L0), center)}
        if isinstance(sol, Exception):
            row.update(error=type(sol).__name__, message=str(sol))
        else:
            row.update(R_i=sol.R_i, R_0=sol.R_0, M=sol.M)
        row["d_over_sqrt_L0"] = d / math.sqrt(L0)
        rows.append(row)

    ok = [row for row in rows if "error" not in row]
    rep = ValidationReport()
    d = np.array([row["d"] for row in ok])
    rise = float(np.max(np.diff(d), initial=0.0)) if d.size > 1 else 0.0
    rep["trend/monotone"] = CheckResult(max(rise, 0.0), 0.0, note="largest increase of d as L0 decreases")
    rep["trend/limit"] = CheckResult(float(d[-1]) if d.size else math.inf, LIMIT_TOL, [ok[-1]["L0"]] if ok else [],
                                     note="d at the smallest L0")
    errs = [abs(row["R_i"] - row["r_L0_closed_form"]) / row["r_L0_closed_form"] for row in ok]
    rep["trend/inner_radius"] = CheckResult(max(errs, default=0.0), RADIUS_TOL)
    failed = len(rows) - len(ok)
    rep["trend/outer_support"] = CheckResult(float(failed), 0.0,
                                             [row["L0"] for row in rows if "error" in row],
                                             note="members without finite support")
    if params.regime == "relativistic":
        ratios = [row["d_over_sqrt_L0"] for row in ok]
        growth = max(ratios) / ratios[0] if ratios and ratios[0] > 0 else 0.0
        rep["trend/sqrt_ratio_bounded"] = CheckResult(growth, SQRT_RATIO_GROWTH,
                                                      note="max d/sqrt(L0) over its value at the largest L0")
    return ValidationReport(sorted(rep.items())), rows


def l0_family_trend(params: AnsatzParams, center: float, L0_sequence, config: SolverConfig | None = None):
    """Solve the family for a decreasing L0 sequence and report the trend checks.

    Returns
    -------
    report : ValidationReport
    rows : list of dict
        Per-member L0, d, R_i, closed-form r_L0, R0, M and d/sqrt(L0).
    """
    seq = [float(x) for x in L0_sequence]
    _check_sequence(seq)
    base = solve_family(params, center, [0.0], config)[0]
    if isinstance(base, Exception):
        raise base
    members = solve_family(params, center, seq, config)
    return trend_report(params, center, seq, base, members)
