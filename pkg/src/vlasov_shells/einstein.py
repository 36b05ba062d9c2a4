"""Static shells of the spherically symmetric Vlasov-Einstein system.

With m(r) = 4 pi int_0^r s^2 rho ds, the field equations reduce to

    mu' = (4 pi r p + m / r^2) / (1 - 2m/r),    m' = 4 pi r^2 rho,

and e^{-2 lambda} = 1 - 2m/r.  m is carried as a second ODE state so the
horizon guard 1 - 2m/r > delta is checked on every step.
"""

from __future__ import annotations

import logging
import math
import warnings

import numpy as np
from scipy import integrate, optimize

from .errors import DomainError, HorizonError, InfeasibleCenterError, NoFiniteSupportError, NumericalError
from .kernels import RELATIVISTIC, AnsatzParams, _rel_integral, beta_const_rel, rel_kernel_argument
from .newton import center_start_radius
from .profiles import EinsteinProfile, ShellSolution, SolverConfig

log = logging.getLogger(__name__)

HORIZON_DELTA = 1e-10


def _require_relativistic(params: AnsatzParams):
    if params.regime != RELATIVISTIC:
        raise DomainError("expected relativistic ansatz parameters")


def inner_radius_rel(params: AnsatzParams, mu_c: float) -> float:
    """sqrt(L0 / (E0^2 e^{-2 mu_c} - 1)), where e^{mu_c} sqrt(1 + L0/r^2) = E0."""
    _require_relativistic(params)
    if not math.exp(mu_c) < params.E0:
        raise InfeasibleCenterError(f"e^mu_c = {math.exp(mu_c)} is not below E0 = {params.E0}")
    if params.L0 == 0:
        return 0.0
    return math.sqrt(params.L0 / (params.E0**2 * math.exp(-2.0 * mu_c) - 1.0))


def lambda_from_mass(r, m):
    """lambda = -1/2 ln(1 - 2m/r), with lambda(0) = 0."""
    r = np.asarray(r, dtype=float)
    m = np.asarray(m, dtype=float)
    out = np.zeros(np.broadcast(r, m).shape)
    pos = r > 0
    out[pos] = -0.5 * np.log1p(-2.0 * np.broadcast_to(m, out.shape)[pos] / np.broadcast_to(r, out.shape)[pos])
    return out


class _Sources:
    """Scalar (rho, p) evaluation for the ODE right-hand side."""

    def __init__(self, params: AnsatzParams):
        self.k, self.l, self.E0, self.L0 = params.k, params.l, params.E0, params.L0
        self.pref = params.c0 * beta_const_rel(params.l)
        self.log_E0 = math.log(params.E0)

    def __call__(self, r, mu):
        # Compare in log form first: rejected trial stages of the integrator
        # can carry |mu| far beyond the range of exp.
        log_u = mu + 0.5 * math.log1p(self.L0 / (r * r))
        if not log_u < self.log_E0:
            return 0.0, 0.0
        u = math.exp(log_u)
        arg = -(2 * self.l + 4) * mu
        if arg > 700.0:
            return math.inf, math.inf
        factor = self.pref * r ** (2 * self.l) * math.exp(arg)
        g = _rel_integral(u, self.E0, self.k, self.l, False)
        h = _rel_integral(u, self.E0, self.k, self.l, True) / (2 * self.l + 3)
        return factor * g, factor * h


def _vacuum_profile(mu_c, config):
    grid = np.linspace(0.0, 1.0, config.output_grid_size)
    z = np.zeros_like(grid)
    return EinsteinProfile(grid, np.full_like(grid, mu_c), z.copy(), z.copy(), z.copy(), z.copy(),
                           state_at=lambda r: (np.full_like(np.asarray(r, float), mu_c),
                                               np.zeros_like(np.asarray(r, float))),
                           vacuum=True)


def integrate_einstein(params: AnsatzParams, mu_c: float, config: SolverConfig | None = None) -> EinsteinProfile:
    """Integrate (mu, m) outward from the plateau until rho and p vanish.

    The profile is sampled on a uniform grid over ``[0, extent * R0]``; for
    r > R0 the Schwarzschild exterior is used (see `vacuum_extend`).
    """
    _require_relativistic(params)
    config = config or SolverConfig()
    if not math.exp(mu_c) < params.E0:
        warnings.warn("e^mu_c is at or above E0: vacuum solution", RuntimeWarning, stacklevel=2)
        return _vacuum_profile(mu_c, config)

    l, E0, L0 = params.l, params.E0, params.L0
    sources = _Sources(params)
    four_pi = 4.0 * math.pi

    def rhs(r, y):
        mu, m = y
        rho, p = sources(r, mu)
        return [(four_pi * r * p + m / (r * r)) / (1.0 - 2.0 * m / r), four_pi * r * r * rho]

    def edge(r, y):
        return math.exp(y[0]) * math.sqrt(1.0 + L0 / (r * r)) - E0

    def horizon(r, y):
        return 1.0 - 2.0 * y[1] / r - HORIZON_DELTA

    edge.terminal = True
    edge.direction = 1
    horizon.terminal = True
    horizon.direction = -1

    r_plateau = inner_radius_rel(params, mu_c)
    rho_c = p_c = 0.0
    if L0 > 0:
        r_start = r_plateau
        y0 = [mu_c, 0.0]
        series = None
    else:
        rho_c, p_c = sources(1.0, mu_c)  # coefficients of r^{2l}
        scale = ((math.log(E0) - mu_c) / (four_pi * rho_c)) ** (1.0 / (2 * l + 2))
        r_start = center_start_radius(scale, l)
        m_coef = four_pi * rho_c / (2 * l + 3)
        mu_coef = (four_pi * p_c + m_coef) / (2 * l + 2)
        series = (mu_coef, m_coef)
        y0 = [mu_c + mu_coef * r_start ** (2 * l + 2), m_coef * r_start ** (2 * l + 3)]

    # Overflowing trial stages give non-finite derivatives and are rejected by step control.
    with np.errstate(over="ignore", invalid="ignore"):
        sol = integrate.solve_ivp(rhs, (r_start, config.max_radius), y0, method="DOP853",
                                  rtol=config.rel_tol, atol=config.abs_tol,
                                  dense_output=True, events=[edge, horizon])
    if sol.status == -1:
        raise NumericalError(f"Einstein integration failed: {sol.message}")
    if len(sol.t_events[1]):
        raise HorizonError(f"2m/r reached 1 - {HORIZON_DELTA} at r = {sol.t_events[1][0]:.6g}")
    if len(sol.t_events[0]) == 0:
        raise NoFiniteSupportError(f"rho did not vanish before max_radius={config.max_radius}")
    R0 = float(sol.t_events[0][0])
    mu_R0, M = (float(v) for v in sol.y_events[0][0])
    mu_inf = mu_R0 - 0.5 * math.log1p(-2.0 * M / R0)
    dense = sol.sol

    def state_at(r):
        r = np.asarray(r, dtype=float)
        mu = np.empty_like(r)
        m = np.empty_like(r)
        inner = r <= r_start
        mid = (~inner) & (r <= R0)
        outer = r > R0
        if series is None:
            mu[inner] = mu_c
            m[inner] = 0.0
        else:
            mu[inner] = mu_c + series[0] * r[inner] ** (2 * l + 2)
            m[inner] = series[1] * r[inner] ** (2 * l + 3)
        if mid.any():
            mu[mid], m[mid] = dense(r[mid])
        mu[outer] = mu_inf + 0.5 * np.log1p(-2.0 * M / r[outer])
        m[outer] = M
        return mu, m

    grid = np.linspace(0.0, config.output_extent * R0, config.output_grid_size)
    mu, m = state_at(grid)
    rho = np.zeros_like(grid)
    p = np.zeros_like(grid)
    for i in np.flatnonzero((grid > 0) & (grid < R0)):
        rho[i], p[i] = sources(grid[i], mu[i])
    if L0 == 0 and l <= 0:
        rho[0] = rho_c if l == 0 else math.inf
        p[0] = p_c if l == 0 else math.inf
    log.debug("relativistic solve: R0=%.6g M=%.6g steps=%d", R0, M, sol.t.size)
    return EinsteinProfile(grid, mu, lambda_from_mass(grid, m), rho, p, m, state_at=state_at,
                           plateau_radius=r_plateau, edge_radius=R0)


def detect_support_rel(profile: EinsteinProfile, params: AnsatzParams):
    """Return (R_i, R0): the plateau radius and the first outer zero of E0 - e^mu sqrt(1 + L0/r^2).

    R0 is bracketed on the grid and refined by bisection on the continuous
    solution when available, otherwise by linear interpolation.
    """
    _require_relativistic(params)
    if profile.vacuum:
        raise InfeasibleCenterError("vacuum profile has no support")
    E0, L0 = params.E0, params.L0
    r = profile.grid
    R_i = profile.plateau_radius
    pos = r > R_i
    u = np.full_like(r, np.inf)
    u[pos] = rel_kernel_argument(r[pos], profile.mu[pos], L0)
    above = np.flatnonzero(pos & (u >= E0) & (np.cumsum(pos & (u < E0)) > 0))
    if above.size == 0:
        raise NoFiniteSupportError("no outer crossing of the cut-off on the profile grid")
    i = above[0]
    lo, hi = r[i - 1], r[i]
    if profile.state_at is not None:
        def gap(x):
            return float(rel_kernel_argument(x, profile.state_at(np.array([x]))[0][0], L0) - E0)
        if gap(lo) < 0 <= gap(hi):
            R0 = optimize.bisect(gap, lo, hi, xtol=1e-12 * hi, maxiter=200)
        else:
            R0 = hi
    else:
        R0 = lo + (hi - lo) * (E0 - u[i - 1]) / (u[i] - u[i - 1])
    return float(R_i), float(R0)


def exterior_reignition(mu_inf: float, M: float, params: AnsatzParams, R0: float, grid=None) -> bool:
    """True if the ansatz would put matter somewhere beyond R0 on the vacuum exterior.

    Checked on ``grid`` (exterior nodes of the stored profile), on a
    logarithmic probe out to 1e8 R0, and in the limit r -> inf.
    """
    probes = R0 * np.logspace(0, 8, 801)[1:]
    if grid is not None:
        probes = np.concatenate([np.asarray(grid)[np.asarray(grid) > R0], probes])
    mu = mu_inf + 0.5 * np.log1p(-2.0 * M / probes)
    u = rel_kernel_argument(probes, mu, params.L0)
    return bool(np.any(u < params.E0) or math.exp(mu_inf) < params.E0)


def vacuum_extend(solution: ShellSolution) -> ShellSolution:
    """Replace everything beyond R0 by the Schwarzschild exterior.

    m = M, rho = p = 0 and mu(r) = mu(R0) + 1/2 [ln(1 - 2M/r) - ln(1 - 2M/R0)].
    Sets ``exterior_reignition`` when the ansatz would give rho > 0 there; the
    solution remains valid because the exterior is vacuum by prescription.
    """
    if solution.vacuum:
        return solution.replace(exterior_reignition=False)
    prof = solution.profile
    R0, M = solution.R_0, solution.M
    mu_inf = solution.potential_at_infinity
    grid = prof.grid
    ext = grid >= R0
    mu = prof.mu.copy()
    m = prof.m.copy()
    rho = prof.rho.copy()
    p = prof.p.copy()
    mu[ext] = mu_inf + 0.5 * np.log1p(-2.0 * M / grid[ext])
    m[ext] = M
    rho[ext] = 0.0
    p[ext] = 0.0
    flag = exterior_reignition(mu_inf, M, solution.params, R0, grid)
    new_prof = EinsteinProfile(grid.copy(), mu, lambda_from_mass(grid, m), rho, p, m,
                               state_at=prof.state_at, plateau_radius=prof.plateau_radius,
                               edge_radius=prof.edge_radius)
    warns = list(solution.warnings)
    if flag:
        warns.append("ansatz cut-off not maintained beyond R0; exterior continued as vacuum")
    return solution.replace(profile=new_prof, exterior_reignition=flag, warnings=warns)


def adm_mass(solution: ShellSolution) -> float:
    """ADM mass m(R0) = 4 pi int_0^R0 s^2 rho ds, from the accumulated mass variable."""
    if solution.vacuum:
        return 0.0
    prof = solution.profile
    if prof.state_at is not None:
        return float(prof.state_at(np.array([solution.R_0]))[1][0])
    return float(np.interp(solution.R_0, prof.grid, prof.m))


def normalize_mu(solution: ShellSolution) -> ShellSolution:
    """Impose mu(inf) = 0: mu -> mu - mu_inf, E0 -> E0 e^{-mu_inf}, c0 -> c0 e^{k mu_inf}."""
    shift = solution.potential_at_infinity
    if shift == 0.0:
        return solution
    prof = solution.profile
    grid = prof.grid
    mu = prof.mu - shift
    if not solution.vacuum:
        ext = grid >= solution.R_0
        mu[ext] = 0.5 * np.log1p(-2.0 * solution.M / grid[ext])
    state_at = None
    if prof.state_at is not None:
        base = prof.state_at

        def state_at(r):
            mu_, m_ = base(r)
            return mu_ - shift, m_

    new_prof = EinsteinProfile(grid.copy(), mu, prof.lambda_m.copy(), prof.rho.copy(), prof.p.copy(),
                               prof.m.copy(), state_at=state_at, plateau_radius=prof.plateau_radius,
                               edge_radius=prof.edge_radius, vacuum=prof.vacuum)
    p = solution.params
    params = p.replace(E0=p.E0 * math.exp(-shift), c0=p.c0 * math.exp(p.k * shift))
    return solution.replace(profile=new_prof, params=params,
                            center_value=solution.center_value - shift, potential_at_infinity=0.0)


def rescale_rel(solution: ShellSolution, a: float) -> ShellSolution:
    """Apply f -> a^2 f(a x, v): radii / a, mass / a, rho and p times a^2, metric unchanged.

    In the ansatz this is c0 -> c0 a^{2+2l} and L0 -> L0 / a^2 with E0 fixed.
    """
    a = float(a)
    if not a > 0:
        raise DomainError("scale factor must be positive")
    p = solution.params
    params = p.replace(c0=p.c0 * a ** (2 + 2 * p.l), L0=p.L0 / a**2)
    prof = solution.profile
    new_prof = EinsteinProfile(prof.grid / a, prof.mu.copy(), prof.lambda_m.copy(), prof.rho * a**2,
                               prof.p * a**2, prof.m / a, plateau_radius=prof.plateau_radius / a,
                               edge_radius=None if prof.edge_radius is None else prof.edge_radius / a,
                               vacuum=prof.vacuum)
    return solution.replace(profile=new_prof, params=params, R_i=solution.R_i / a, R_0=solution.R_0 / a,
                            M=solution.M / a, plateau_radius=solution.plateau_radius / a)


def max_compactness(profile: EinsteinProfile) -> float:
    r = profile.grid
    pos = r > 0
    return float(np.max(2.0 * profile.m[pos] / r[pos])) if pos.any() else 0.0


def _build_solution(profile, params, mu_c):
    if profile.vacuum:
        return ShellSolution(profile, params, R_i=0.0, R_0=0.0, M=0.0, plateau_radius=0.0,
                             center_value=mu_c, potential_at_infinity=mu_c, vacuum=True,
                             compactness=0.0, warnings=["vacuum: e^mu_c at or above E0"])
    R_i, R0 = detect_support_rel(profile, params)
    if abs(R0 - profile.edge_radius) > 1e-10 * R0:
        log.warning("support edge mismatch: bisection %.17g vs event %.17g", R0, profile.edge_radius)
    R0 = profile.edge_radius
    mu_R0, M = (float(v[0]) for v in profile.state_at(np.array([R0])))
    sol = ShellSolution(profile, params, R_i=R_i, R_0=R0, M=M, plateau_radius=profile.plateau_radius,
                        center_value=mu_c, potential_at_infinity=mu_R0 - 0.5 * math.log1p(-2.0 * M / R0))
    sol = vacuum_extend(sol)
    return sol.replace(compactness=max_compactness(sol.profile))


def solve_einstein(params: AnsatzParams, mu_c: float, config: SolverConfig | None = None,
                   normalize: bool = True) -> ShellSolution:
    """Integrate, detect the support, continue with vacuum and (by default) impose mu(inf) = 0."""
    profile = integrate_einstein(params, mu_c, config)
    sol = _build_solution(profile, params, mu_c)
    return normalize_mu(sol) if normalize else sol


def target_scale_rel(solution: ShellSolution, M_target=None, R0_target=None, Ri_target=None) -> float:
    """Closed-form a for exactly one prescribed value among M, R0 and R_i."""
    given = [(n, v) for n, v in (("M", M_target), ("R0", R0_target), ("Ri", Ri_target)) if v is not None]
    if len(given) != 1:
        raise DomainError("prescribe exactly one of M, R0, R_i in the relativistic case")
    name, value = given[0]
    if not value > 0:
        raise DomainError("target must be positive")
    if name == "M":
        return solution.M / value
    if name == "R0":
        return solution.R_0 / value
    if solution.params.L0 == 0 or solution.R_i == 0:
        raise DomainError("an inner-radius target needs L0 > 0")
    return solution.R_i / value


def solve_for_target_rel(params: AnsatzParams, mu_c: float, M_target=None, R0_target=None,
                         Ri_target=None, config: SolverConfig | None = None) -> ShellSolution:
    if Ri_target is not None and params.L0 == 0:
        raise DomainError("an inner-radius target needs L0 > 0")
    sol = solve_einstein(params, mu_c, config)
    if sol.vacuum:
        raise InfeasibleCenterError("template is vacuum; no scaling can reach the target")
    return rescale_rel(sol, target_scale_rel(sol, M_target, R0_target, Ri_target))
