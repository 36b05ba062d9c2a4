"""Regime-independent entry points used by the CLI and the checks."""

from __future__ import annotations

from . import einstein, newton
from .errors import DomainError
from .kernels import NEWTONIAN, AnsatzParams
from .profiles import ShellSolution, SolverConfig


def solve(params: AnsatzParams, center: float, config: SolverConfig | None = None,
          normalize: bool = True) -> ShellSolution:
    """Full pipeline: plateau, integration, support detection, vacuum exterior, normalization."""
    if params.regime == NEWTONIAN:
        return newton.solve_newton(params, center, config, normalize)
    return einstein.solve_einstein(params, center, config, normalize)


def rescale(solution: ShellSolution, lambda_scale=None, gamma_scale=None, a=None) -> ShellSolution:
    if solution.regime == NEWTONIAN:
        if a is not None:
            raise DomainError("the newtonian scaling takes lambda and gamma, not a")
        return newton.rescale_newton(solution, 1.0 if lambda_scale is None else lambda_scale,
                                     1.0 if gamma_scale is None else gamma_scale)
    if lambda_scale is not None or gamma_scale is not None:
        raise DomainError("the relativistic scaling takes a single factor a")
    return einstein.rescale_rel(solution, 1.0 if a is None else a)


def apply_targets(solution: ShellSolution, M=None, R0=None, Ri=None) -> ShellSolution:
    """Rescale an already solved template onto prescribed mass and/or radius."""
    if solution.vacuum:
        from .errors import InfeasibleCenterError
        raise InfeasibleCenterError("vacuum template cannot be scaled to targets")
    if solution.regime == NEWTONIAN:
        if M is None:
            raise DomainError("newtonian targets need M together with R0 or Ri")
        lam, gam = newton.target_scales_newton(solution, M, R0, Ri)
        return newton.rescale_newton(solution, lam, gam)
    return einstein.rescale_rel(solution, einstein.target_scale_rel(solution, M, R0, Ri))


def normalize(solution: ShellSolution) -> ShellSolution:
    """Impose the boundary condition at infinity on an un-normalized solution."""
    if solution.regime == NEWTONIAN:
        return newton.normalize_potential(solution)
    return einstein.normalize_mu(solution)
