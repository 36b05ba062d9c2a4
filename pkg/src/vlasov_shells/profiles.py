"""Radial profiles, shell solutions and solver settings shared by both regimes."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .kernels import AnsatzParams


@dataclass(frozen=True)
class SolverConfig:
    """Integration and output settings.

    ``output_extent`` sets the uniform output grid to ``[0, extent * R0]`` so
    that the stored table always contains part of the vacuum exterior.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_radius: float = 1e4
    output_grid_size: int = 4001
    output_extent: float = 1.5

    def __post_init__(self):
        if self.output_grid_size < 64:
            raise ValueError("output_grid_size must be at least 64")
        if not (self.rel_tol > 0 and self.abs_tol > 0 and self.max_radius > 0):
            raise ValueError("tolerances and max_radius must be positive")
        if not self.output_extent > 1:
            raise ValueError("output_extent must exceed 1")

    def replace(self, **changes) -> "SolverConfig":
        return dataclasses.replace(self, **changes)


@dataclass
class NewtonProfile:
    """Newtonian radial profile on a strictly increasing grid starting at r = 0.

    ``state_at`` is the continuous solution ``r -> (U, m)`` produced by the
    integrator; it is absent for profiles read from disk or rescaled.
    """

    grid: np.ndarray
    U: np.ndarray
    Uprime: np.ndarray
    rho: np.ndarray
    m: np.ndarray
    state_at: Optional[Callable] = field(default=None, repr=False, compare=False)
    plateau_radius: float = 0.0
    edge_radius: Optional[float] = None
    vacuum: bool = False

    columns = ("r", "U", "dU_dr", "rho", "m")

    @property
    def potential(self) -> np.ndarray:
        return self.U

    def table(self) -> np.ndarray:
        return np.column_stack([self.grid, self.U, self.Uprime, self.rho, self.m])

    @classmethod
    def from_table(cls, table: np.ndarray) -> "NewtonProfile":
        return cls(*(np.array(table[:, i]) for i in range(5)))


@dataclass
class EinsteinProfile:
    """Relativistic radial profile; metric ds^2 = -e^{2 mu} dt^2 + e^{2 lambda} dr^2 + r^2 dOmega^2."""

    grid: np.ndarray
    mu: np.ndarray
    lambda_m: np.ndarray
    rho: np.ndarray
    p: np.ndarray
    m: np.ndarray
    state_at: Optional[Callable] = field(default=None, repr=False, compare=False)
    plateau_radius: float = 0.0
    edge_radius: Optional[float] = None
    vacuum: bool = False

    columns = ("r", "mu", "lambda", "rho", "p", "m")

    @property
    def potential(self) -> np.ndarray:
        return self.mu

    def table(self) -> np.ndarray:
        return np.column_stack([self.grid, self.mu, self.lambda_m, self.rho, self.p, self.m])

    @classmethod
    def from_table(cls, table: np.ndarray) -> "EinsteinProfile":
        return cls(*(np.array(table[:, i]) for i in range(6)))


@dataclass
class ShellSolution:
    """A steady state: profile, support radii, total (ADM) mass and ansatz parameters.

    ``potential_at_infinity`` is U(inf) or mu(inf) of the stored profile; it
    is 0 once the boundary condition at infinity has been imposed.
    """

    profile: object
    params: AnsatzParams
    R_i: float
    R_0: float
    M: float
    plateau_radius: float
    center_value: float
    potential_at_infinity: float
    vacuum: bool = False
    single_shell: Optional[bool] = None
    exterior_reignition: Optional[bool] = None
    compactness: Optional[float] = None
    warnings: list = field(default_factory=list)

    @property
    def regime(self) -> str:
        return self.params.regime

    @property
    def normalized(self) -> bool:
        return self.potential_at_infinity == 0.0

    def replace(self, **changes) -> "ShellSolution":
        return dataclasses.replace(self, **changes)
