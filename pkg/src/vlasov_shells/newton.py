"""Static shells of the Vlasov-Poisson system.

The reduced equation (1/r^2)(r^2 U')' = 4 pi r^{2l} g(U + L0/(2 r^2)) is
integrated outward as the first-order system

    U' = m / r^2,    m' = 4 pi r^2 rho(r, U),

with U held at its central value on the plateau [0, r_L0] where the
angular-momentum barrier forces vacuum.
"""

from __future__ import annotations

import logging
import math
import warnings

import numpy as np
from scipy import integrate, optimize

from .errors import DomainError, InfeasibleCenterError, NoFiniteSupportError, NumericalError
from .kernels import NEWTONIAN, AnsatzParams, beta_const_newton, effective_potential
from .profiles import NewtonProfile, ShellSolution, SolverConfig

log = logging.getLogger(__name__)


def _require_newtonian(params: AnsatzParams):
    if params.regime != NEWTONIAN:
        raise DomainError("expected newtonian ansatz parameters")


def inner_radius_newton(params: AnsatzParams, Uc: float) -> float:
    """Radius sqrt(L0 / (2 (E0 - Uc))) where the barrier L0/(2r^2) closes the plateau."""
    if not Uc < params.E0:
        raise InfeasibleCenterError(f"central potential {Uc} is not below the cut-off E0={params.E0}")
    if params.L0 == 0:
        return 0.0
    return math.sqrt(params.L0 / (2.0 * (params.E0 - Uc)))


def center_start_radius(scale: float, l: float) -> float:
    """Start radius of the L0 = 0 series, small enough that the neglected
    relative correction (r/scale)^{2l+2} stays below 1e-16."""
    return scale * 10.0 ** (-8.0 * max(1.0, 1.0 / (l + 1.0)))


def _center_limits(l, L0, rho_c):
    """Values of (rho, U') at r = 0 when matter reaches the center."""
    if L0 > 0 or l > 0:
        return 0.0, 0.0
    rho0 = rho_c if l == 0 else math.inf
    if 2 * l + 1 > 0:
        du0 = 0.0
    elif 2 * l + 1 == 0:
        du0 = 4 * math.pi * rho_c / (2 * l + 3)
    else:
        du0 = math.inf
    return rho0, du0


def _vacuum_profile(Uc, config, state_dim_fill=0.0):
    grid = np.linspace(0.0, 1.0, config.output_grid_size)
    zeros = np.zeros_like(grid)
    return NewtonProfile(grid, np.full_like(grid, Uc), zeros.copy(), zeros.copy(), zeros.copy(),
                         state_at=lambda r: (np.full_like(np.asarray(r, float), Uc),
                                             np.zeros_like(np.asarray(r, float))),
                         vacuum=True)


def integrate_newton(params: AnsatzParams, Uc: float, config: SolverConfig | None = None) -> NewtonProfile:
    """Solve the reduced Poisson equation from the center to the outer support edge.

    Returns the profile resampled on a uniform grid over ``[0, extent * R0]``;
    beyond the edge the exact vacuum exterior U(R0) + M (1/R0 - 1/r) is used.
    If ``Uc >= E0`` the constant vacuum profile is returned with
    ``profile.vacuum`` set.
    """
    _require_newtonian(params)
    config = config or SolverConfig()
    if not Uc < params.E0:
        warnings.warn("central potential is at or above E0: vacuum solution", RuntimeWarning, stacklevel=2)
        return _vacuum_profile(Uc, config)

    k, l, E0, L0 = params.k, params.l, params.E0, params.L0
    amp = params.c0 * beta_const_newton(k, l)
    expo = k + l + 1.5
    four_pi = 4.0 * math.pi

    def density(r, U):
        gap = E0 - U - L0 / (2.0 * r * r)
        return r ** (2 * l) * amp * gap**expo if gap > 0 else 0.0

    def rhs(r, y):
        return [y[1] / (r * r), four_pi * r * r * density(r, y[0])]

    def edge(r, y):
        return y[0] + L0 / (2.0 * r * r) - E0

    edge.terminal = True
    edge.direction = 1

    rho_c = amp * (E0 - Uc) ** expo
    r_plateau = inner_radius_newton(params, Uc)
    if L0 > 0:
        r_start = r_plateau
        y0 = [Uc, 0.0]
        series = None
    else:
        scale = ((E0 - Uc) / (four_pi * rho_c)) ** (1.0 / (2 * l + 2))
        r_start = center_start_radius(scale, l)
        m_coef = four_pi * rho_c / (2 * l + 3)
        u_coef = m_coef / (2 * l + 2)
        series = (u_coef, m_coef)
        y0 = [Uc + u_coef * r_start ** (2 * l + 2), m_coef * r_start ** (2 * l + 3)]

    sol = integrate.solve_ivp(rhs, (r_start, config.max_radius), y0, method="DOP853",
                              rtol=config.rel_tol, atol=config.abs_tol,
                              dense_output=True, events=edge)
    if sol.status == -1:
        raise NumericalError(f"Poisson integration failed: {sol.message}")
    if sol.status == 0 or len(sol.t_events[0]) == 0:
        raise NoFiniteSupportError(
            f"density did not vanish before max_radius={config.max_radius}")
    R0 = float(sol.t_events[0][0])
    U_R0, M = (float(v) for v in sol.y_events[0][0])
    U_inf = U_R0 + M / R0
    dense = sol.sol

    def state_at(r):
        r = np.asarray(r, dtype=float)
        U = np.empty_like(r)
        m = np.empty_like(r)
        inner = r <= r_start
        mid = (~inner) & (r <= R0)
        outer = r > R0
        if series is None:
            U[inner] = Uc
            m[inner] = 0.0
        else:
            U[inner] = Uc + series[0] * r[inner] ** (2 * l + 2)
            m[inner] = series[1] * r[inner] ** (2 * l + 3)
        if mid.any():
            U[mid], m[mid] = dense(r[mid])
        U[outer] = U_inf - M / r[outer]
        m[outer] = M
        return U, m

    grid = np.linspace(0.0, config.output_extent * R0, config.output_grid_size)
    U, m = state_at(grid)
    rho = np.zeros_like(grid)
    Uprime = np.zeros_like(grid)
    pos = grid > 0
    Uprime[pos] = m[pos] / grid[pos] ** 2
    inside = pos & (grid < R0)
    rho[inside] = [density(r, u) for r, u in zip(grid[inside], U[inside])]
    rho[0], Uprime[0] = _center_limits(l, L0, rho_c)
    log.debug("newtonian solve: R0=%.6g M=%.6g steps=%d", R0, M, sol.t.size)
    return NewtonProfile(grid, U, Uprime, rho, m, state_at=state_at,
                         plateau_radius=r_plateau, edge_radius=R0)


def detect_support(profile: NewtonProfile, params: AnsatzParams):
    """Locate the support [R_i, R0] of rho and certify it is a single shell.

    R0 is bracketed on the output grid and refined by bisection of
    V - E0 on the continuous solution.  Beyond R0, V(r) = U(R0) + M (1/R0 - 1/r)
    + L0/(2 r^2) has its only critical point at r* = L0/M, so matter cannot
    re-enter if r* <= R0.

    Returns
    -------
    (R_i, R0, single_shell)
    """
    _require_newtonian(params)
    if profile.vacuum:
        raise InfeasibleCenterError("vacuum profile has no support")
    E0, L0 = params.E0, params.L0
    r = profile.grid
    R_i = profile.plateau_radius
    pos = r > R_i
    V = np.full_like(r, np.inf)
    V[pos] = effective_potential(r[pos], profile.U[pos], L0)
    above = np.flatnonzero(pos & (V >= E0) & (np.cumsum(pos & (V < E0)) > 0))
    if above.size == 0:
        raise NoFiniteSupportError("no outer crossing V = E0 on the profile grid")
    hi = r[above[0]]
    lo = r[above[0] - 1]

    if profile.state_at is not None:
        def gap(x):
            return float(effective_potential(x, profile.state_at(np.array([x]))[0][0], L0) - E0)
        xtol = 1e-12 * hi
        if gap(lo) < 0 <= gap(hi):
            R0 = optimize.bisect(gap, lo, hi, xtol=xtol, maxiter=200)
        else:
            R0 = hi
    else:
        # Tabulated profile: linear interpolation of V - E0 between the bracketing nodes.
        i = above[0]
        v_lo, v_hi = V[i - 1] - E0, V[i] - E0
        R0 = lo + (hi - lo) * (-v_lo) / (v_hi - v_lo)

    M = float(np.interp(R0, r, profile.m))
    dV = np.zeros_like(r)
    dV[pos] = profile.m[pos] / r[pos] ** 2 - L0 / r[pos] ** 3
    sign = np.sign(dV[pos & (r < R0)])
    sign = sign[sign != 0]
    changes = int(np.count_nonzero(np.diff(sign)))
    exterior_ok = L0 == 0 or (M > 0 and L0 / M <= R0 * (1 + 1e-12))
    return float(R_i), float(R0), bool(changes <= 1 and exterior_ok)


def _build_solution(profile, params, Uc):
    if profile.vacuum:
        return ShellSolution(profile, params, R_i=0.0, R_0=0.0, M=0.0, plateau_radius=0.0,
                             center_value=Uc, potential_at_infinity=Uc, vacuum=True,
                             warnings=["vacuum: central potential at or above E0"])
    R_i, R0, single = detect_support(profile, params)
    # The integrator's event radius is the more accurate edge; detect_support certifies it.
    if abs(R0 - profile.edge_radius) > 1e-10 * R0:
        log.warning("support edge mismatch: bisection %.17g vs event %.17g", R0, profile.edge_radius)
    R0 = profile.edge_radius
    M = float(profile.state_at(np.array([R0]))[1][0])
    U_R0 = float(profile.state_at(np.array([R0]))[0][0])
    return ShellSolution(profile, params, R_i=R_i, R_0=R0, M=M, plateau_radius=profile.plateau_radius,
                         center_value=Uc, potential_at_infinity=U_R0 + M / R0, single_shell=single)


def normalize_potential(solution: ShellSolution) -> ShellSolution:
    """Shift U and E0 by U(inf) = U(R0) + M/R0 so that U -> 0 at infinity.

    f, rho, m and the support radii are unchanged.
    """
    shift = solution.potential_at_infinity
    if shift == 0.0:
        return solution
    prof = solution.profile
    grid = prof.grid
    U = prof.U - shift
    if not solution.vacuum:
        ext = grid >= solution.R_0
        U[ext] = -solution.M / grid[ext]
    state_at = None
    if prof.state_at is not None:
        base = prof.state_at

        def state_at(r):
            U_, m_ = base(r)
            return U_ - shift, m_

    new_prof = NewtonProfile(grid.copy(), U, prof.Uprime.copy(), prof.rho.copy(), prof.m.copy(),
                             state_at=state_at, plateau_radius=prof.plateau_radius,
                             edge_radius=prof.edge_radius, vacuum=prof.vacuum)
    params = solution.params.replace(E0=solution.params.E0 - shift)
    return solution.replace(profile=new_prof, params=params,
                            center_value=solution.center_value - shift, potential_at_infinity=0.0)


def rescale_newton(solution: ShellSolution, lambda_scale: float, gamma_scale: float) -> ShellSolution:
    """Apply f -> gamma^3 lambda^{-1} f(gamma x, gamma v / lambda) in closed form.

    Induced fields, with r' = r / gamma::

        rho'(r') = lambda^2 rho(r)          U'(r') = lambda^2 gamma^-2 U(r)
        m'(r')   = lambda^2 gamma^-3 m(r)   dU'/dr' = lambda^2 gamma^-1 dU/dr

    and ansatz constants c0 gamma^{3+2k+4l} lambda^{-1-2k-2l},
    E0 lambda^2 gamma^-2, L0 lambda^2 gamma^-4.
    """
    lam, gam = float(lambda_scale), float(gamma_scale)
    if not (lam > 0 and gam > 0):
        raise DomainError("scale factors must be positive")
    p = solution.params
    k, l = p.k, p.l
    pot = lam**2 / gam**2
    params = p.replace(c0=p.c0 * gam ** (3 + 2 * k + 4 * l) * lam ** (-1 - 2 * k - 2 * l),
                       E0=p.E0 * pot, L0=p.L0 * lam**2 / gam**4)
    prof = solution.profile
    new_prof = NewtonProfile(prof.grid / gam, prof.U * pot, prof.Uprime * lam**2 / gam,
                             prof.rho * lam**2, prof.m * lam**2 / gam**3,
                             plateau_radius=prof.plateau_radius / gam,
                             edge_radius=None if prof.edge_radius is None else prof.edge_radius / gam,
                             vacuum=prof.vacuum)
    return solution.replace(profile=new_prof, params=params, R_i=solution.R_i / gam,
                            R_0=solution.R_0 / gam, M=solution.M * lam**2 / gam**3,
                            plateau_radius=solution.plateau_radius / gam,
                            center_value=solution.center_value * pot,
                            potential_at_infinity=solution.potential_at_infinity * pot)


def solve_newton(params: AnsatzParams, Uc: float, config: SolverConfig | None = None,
                 normalize: bool = True) -> ShellSolution:
    """Integrate, detect the support and (by default) impose U(inf) = 0."""
    profile = integrate_newton(params, Uc, config)
    sol = _build_solution(profile, params, Uc)
    return normalize_potential(sol) if normalize else sol


def target_scales_newton(solution: ShellSolution, M_target: float, R0_target: float | None = None,
                         Ri_target: float | None = None):
    """Closed-form (lambda, gamma) mapping ``solution`` onto the prescribed mass and radius."""
    if (R0_target is None) == (Ri_target is None):
        raise DomainError("prescribe exactly one of R0 and R_i together with M")
    if not M_target > 0:
        raise DomainError("target mass must be positive")
    if R0_target is not None:
        if not R0_target > 0:
            raise DomainError("target radius must be positive")
        gam = solution.R_0 / R0_target
    else:
        if not Ri_target > 0:
            raise DomainError("target radius must be positive")
        if solution.params.L0 == 0 or solution.R_i == 0:
            raise DomainError("an inner-radius target needs L0 > 0")
        gam = solution.R_i / Ri_target
    lam = math.sqrt(M_target * gam**3 / solution.M)
    return lam, gam


def solve_for_targets_newton(params: AnsatzParams, Uc: float, M_target: float,
                             R0_target: float | None = None, Ri_target: float | None = None,
                             config: SolverConfig | None = None) -> ShellSolution:
    """Solve once from the template, then rescale to the prescribed (M, R0) or (M, R_i)."""
    if Ri_target is not None and params.L0 == 0:
        raise DomainError("an inner-radius target needs L0 > 0")
    sol = solve_newton(params, Uc, config)
    if sol.vacuum:
        raise InfeasibleCenterError("template is vacuum; no scaling can reach the targets")
    lam, gam = target_scales_newton(sol, M_target, R0_target, Ri_target)
    return rescale_newton(sol, lam, gam)
