"""Static shell solutions of the Vlasov-Poisson and Vlasov-Einstein systems.

The distribution function is the polytropic ansatz

    f = c0 (E0 - E)_+^k (L - L0)_+^l,

with particle energy E and squared angular momentum L.  A cut-off L0 > 0
forces vacuum near the center, so the matter occupies an annulus
[R_i, R0].  `solve` integrates the reduced field equations, locates the
support, attaches the vacuum exterior and normalizes the potential at
infinity; `verify` checks the result against independent oracles.
"""

from .errors import (DomainError, HorizonError, InfeasibleCenterError, InputError, NoFiniteSupportError,
                     NumericalError, ShellError, UsageError)
from .kernels import NEWTONIAN, RELATIVISTIC, AnsatzParams, PhaseState
from .pipeline import apply_targets, normalize, rescale, solve
from .profiles import EinsteinProfile, NewtonProfile, ShellSolution, SolverConfig

__version__ = "0.1.0"

__all__ = [
    "AnsatzParams",
    "DomainError",
    "EinsteinProfile",
    "HorizonError",
    "InfeasibleCenterError",
    "InputError",
    "NEWTONIAN",
    "NewtonProfile",
    "NoFiniteSupportError",
    "NumericalError",
    "PhaseState",
    "RELATIVISTIC",
    "ShellError",
    "ShellSolution",
    "SolverConfig",
    "UsageError",
    "apply_targets",
    "normalize",
    "rescale",
    "solve",
]
