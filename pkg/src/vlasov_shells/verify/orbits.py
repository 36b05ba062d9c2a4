"""Conservation of E, L and f along characteristics of the static Vlasov equation.

The field is interpolated from the tabulated profile by a piecewise cubic
Hermite interpolant of the potential and its derivative, so the interpolated
potential is exactly the one whose gradient drives the orbits: any drift is
integrator error, not interpolation error.
"""

from __future__ import annotations

import bisect
import math

import numpy as np
from scipy import integrate

from ..kernels import distribution
from ..profiles import ShellSolution
from .report import CheckResult, ValidationReport

ORBIT_RTOL = 1e-12
DRIFT_TOL = 1e-6
DEFAULT_PERIODS = 50
DEFAULT_ORBITS = 10
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class RadialField:
    """C^1 cubic Hermite interpolant of a potential (U or mu) on the profile grid."""

    def __init__(self, solution: ShellSolution):
        prof = solution.profile
        self.r = np.asarray(prof.grid, dtype=float)
        self.relativistic = solution.regime == "relativistic"
        if self.relativistic:
            r, m, p = self.r, prof.m, prof.p
            d = np.zeros_like(r)
            pos = r > 0
            d[pos] = (4.0 * math.pi * r[pos] * p[pos] + m[pos] / r[pos] ** 2) / (1.0 - 2.0 * m[pos] / r[pos])
            self.f, self.df = np.asarray(prof.mu, float), d
        else:
            d = np.asarray(prof.Uprime, float).copy()
            d[~np.isfinite(d)] = 0.0
            self.f, self.df = np.asarray(prof.U, float), d
        self._r = self.r.tolist()
        self._f = self.f.tolist()
        self._df = self.df.tolist()
        self.r_max = self._r[-1]
        self.M = solution.M
        self.inf = solution.potential_at_infinity

    def __call__(self, r: float):
        """Return (value, derivative) at radius ``r``."""
        if r >= self.r_max:
            if self.relativistic:
                q = 1.0 - 2.0 * self.M / r
                return self.inf + 0.5 * math.log(q), self.M / (r * r * q)
            return self.inf - self.M / r, self.M / (r * r)
        i = min(max(bisect.bisect_right(self._r, r) - 1, 0), len(self._r) - 2)
        r0, r1 = self._r[i], self._r[i + 1]
        h = r1 - r0
        t = (r - r0) / h
        f0, f1 = self._f[i], self._f[i + 1]
        d0, d1 = self._df[i] * h, self._df[i + 1] * h
        t2 = t * t
        t3 = t2 * t
        val = (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * d0 + (-2 * t3 + 3 * t2) * f1 + (t3 - t2) * d1
        der = ((6 * t2 - 6 * t) * f0 + (3 * t2 - 4 * t + 1) * d0 + (-6 * t2 + 6 * t) * f1 + (3 * t2 - 2 * t) * d1) / h
        return val, der


def _rhs(field: RadialField):
    if field.relativistic:
        def rhs(t, y):
            x0, x1, x2, v0, v1, v2 = y
            r = math.sqrt(x0 * x0 + x1 * x1 + x2 * x2)
            g = math.sqrt(1.0 + v0 * v0 + v1 * v1 + v2 * v2)
            a = -g * field(r)[1] / r
            return [v0 / g, v1 / g, v2 / g, a * x0, a * x1, a * x2]
    else:
        def rhs(t, y):
            x0, x1, x2, v0, v1, v2 = y
            r = math.sqrt(x0 * x0 + x1 * x1 + x2 * x2)
            a = -field(r)[1] / r
            return [v0, v1, v2, a * x0, a * x1, a * x2]
    return rhs


def invariants(field: RadialField, y: np.ndarray):
    """Particle energy E and squared angular momentum L along a trajectory ``y`` (6 x n)."""
    x, v = y[:3], y[3:]
    r = np.sqrt(np.sum(x * x, axis=0))
    pot = np.array([field(ri)[0] for ri in r])
    v2 = np.sum(v * v, axis=0)
    E = np.exp(pot) * np.sqrt(1.0 + v2) if field.relativistic else 0.5 * v2 + pot
    L = np.sum(np.cross(x.T, v.T) ** 2, axis=1)
    return E, L, r


def sample_states(solution: ShellSolution, count: int = DEFAULT_ORBITS, field: RadialField | None = None):
    """Deterministic bound initial states with E < E0 and L > L0.

    Radii, pitch and radial-velocity fractions follow golden-ratio sequences
    so the sample is reproducible without a random generator.
    """
    field = field or RadialField(solution)
    p = solution.params
    R_i, R0 = solution.R_i, solution.R_0
    states = []
    j = 0
    while len(states) < count and j < 50 * count:
        j += 1
        q1 = (0.5 + j * _GOLDEN) % 1.0
        q2 = (0.5 + j * _GOLDEN**2) % 1.0
        q3 = (0.5 + j * _GOLDEN**3) % 1.0
        r = R_i + (0.1 + 0.8 * q1) * (R0 - R_i)
        pot = field(r)[0]
        vt_min2 = p.L0 / r**2
        if field.relativistic:
            budget = (p.E0 * math.exp(-pot)) ** 2 - 1.0
        else:
            budget = 2.0 * (p.E0 - pot)
        if budget <= vt_min2:
            continue
        vt2 = vt_min2 + (0.15 + 0.7 * q2) * (budget - vt_min2)
        vr = math.sqrt((0.1 + 0.8 * q3) * (budget - vt2))
        vt = math.sqrt(vt2)
        phi = 2.0 * math.pi * q3
        states.append(np.array([r, 0.0, 0.0, vr, vt * math.cos(phi), vt * math.sin(phi)]))
    return states


def circular_state(solution: ShellSolution, r: float, field: RadialField | None = None) -> np.ndarray:
    """Initial state of the circular orbit of radius ``r`` in the plane z = 0."""
    field = field or RadialField(solution)
    d = field(r)[1]
    if field.relativistic:
        v = math.sqrt(r * d / (1.0 - r * d))
    else:
        v = math.sqrt(r * d)
    return np.array([r, 0.0, 0.0, 0.0, v, 0.0])


def radial_period(field: RadialField, y0, t_guess: float, rtol: float = ORBIT_RTOL) -> float:
    """Time between successive pericenter passages (x.v crossing zero upward)."""
    rhs = _rhs(field)

    def peri(t, y):
        return y[0] * y[3] + y[1] * y[4] + y[2] * y[5]

    peri.direction = 1
    peri.terminal = 3
    sol = integrate.solve_ivp(rhs, (0.0, 1e4 * t_guess), y0, method="DOP853", rtol=rtol,
                              atol=rtol * 1e-3 * float(np.max(np.abs(y0))), events=peri)
    t = sol.t_events[0]
    if len(t) < 3:
        return math.inf
    return float(t[2] - t[1])


def integrate_orbit(solution: ShellSolution, y0, periods: float = DEFAULT_PERIODS,
                    field: RadialField | None = None, rtol: float = ORBIT_RTOL):
    """Integrate one characteristic for ``periods`` radial periods.

    Returns (t, y, period).  A circular orbit has no pericenter; its angular
    period is used instead.
    """
    field = field or RadialField(solution)
    y0 = np.asarray(y0, dtype=float)
    r0 = float(np.linalg.norm(y0[:3]))
    speed = float(np.linalg.norm(y0[3:]))
    t_cross = r0 / max(speed, 1e-300)
    if field.relativistic:
        t_cross *= math.sqrt(1.0 + speed**2)
    period = radial_period(field, y0, 2 * math.pi * t_cross, rtol)
    if not math.isfinite(period):
        period = 2 * math.pi * t_cross
    sol = integrate.solve_ivp(_rhs(field), (0.0, periods * period), y0, method="DOP853", rtol=rtol,
                              atol=rtol * 1e-3 * float(np.max(np.abs(y0))))
    return sol.t, sol.y, period


def characteristic_drift(solution: ShellSolution, initial_states=None, periods: float = DEFAULT_PERIODS,
                         count: int = DEFAULT_ORBITS) -> ValidationReport:
    """Max relative drift of E, L and f along orbits started inside supp f."""
    if solution.vacuum:
        return ValidationReport({f"characteristic_drift/{n}": CheckResult(0.0, 0.0, note="vacuum")
                                 for n in ("energy", "angular_momentum", "distribution", "confinement")})
    field = RadialField(solution)
    states = initial_states if initial_states is not None else sample_states(solution, count, field)
    p = solution.params
    worst_E = worst_L = worst_f = 0.0
    loc_E, loc_L, loc_f = [], [], []
    escaped = 0
    min_periods = math.inf
    for y0 in states:
        t, y, period = integrate_orbit(solution, y0, periods, field)
        E, L, r = invariants(field, y)
        f = distribution(E, L, p)
        dE = float(np.max(np.abs(E - E[0])) / abs(E[0]))
        dL = float(np.max(np.abs(L - L[0])) / L[0]) if L[0] > 0 else float(np.max(L))
        df = float(np.max(np.abs(f - f[0])) / f[0]) if f[0] > 0 else float(np.max(np.abs(f)))
        r_start = float(r[0])
        if dE > worst_E:
            worst_E, loc_E = dE, [r_start]
        if dL > worst_L:
            worst_L, loc_L = dL, [r_start]
        if df > worst_f:
            worst_f, loc_f = df, [r_start]
        if f[0] > 0 and (r.min() < solution.R_i or r.max() > solution.R_0):
            escaped += 1
        min_periods = min(min_periods, t[-1] / period)
    rep = ValidationReport()
    note = f"{len(states)} orbits, {periods:g} radial periods each"
    rep["characteristic_drift/energy"] = CheckResult(worst_E, DRIFT_TOL, loc_E, note)
    rep["characteristic_drift/angular_momentum"] = CheckResult(worst_L, DRIFT_TOL, loc_L, note)
    rep["characteristic_drift/distribution"] = CheckResult(worst_f, DRIFT_TOL, loc_f, note)
    rep["characteristic_drift/confinement"] = CheckResult(float(escaped), 0.0, note="orbits leaving [R_i, R0]")
    return ValidationReport(sorted(rep.items()))
