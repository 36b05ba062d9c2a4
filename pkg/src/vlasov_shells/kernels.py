"""Polytropic ansatz f = c0 (E0 - E)_+^k (L - L0)_+^l and its macroscopic source kernels.

Newtonian:    rho(r) = r^{2l} g(U + L0/(2 r^2))
Relativistic: rho(r) = r^{2l} e^{-(2l+4) mu} g(e^mu sqrt(1 + L0/r^2)),
              p(r)   = r^{2l} e^{-(2l+4) mu} h(e^mu sqrt(1 + L0/r^2))

Units are geometrized: G = c = particle mass = 1.
"""

from __future__ import annotations

import dataclasses
import functools
import math
from typing import NamedTuple

import numpy as np
from scipy import integrate, special

from .errors import DomainError, NumericalError

NEWTONIAN = "newtonian"
RELATIVISTIC = "relativistic"
REGIMES = (NEWTONIAN, RELATIVISTIC)

#: Relative tolerance of the relativistic kernel quadrature. One order tighter
#: than the default ODE tolerance so quadrature noise never drives step control.
KERNEL_RTOL = 1e-11


@dataclasses.dataclass(frozen=True)
class AnsatzParams:
    """Exponents and cut-off constants of the polytropic ansatz.

    Parameters
    ----------
    k, l : float
        Exponents of the energy and angular-momentum factors.
    c0 : float
        Amplitude, ``c0 > 0``.
    E0 : float
        Cut-off energy. Relativistic solutions require ``E0 > 0``; Newtonian
        ones have ``E0 < 0`` only after the potential is normalized at infinity.
    L0 : float
        Cut-off in the squared angular momentum, ``L0 >= 0``.
    regime : {"newtonian", "relativistic"}
    """

    k: float
    l: float
    c0: float
    E0: float
    L0: float = 0.0
    regime: str = NEWTONIAN

    def __post_init__(self):
        if self.regime not in REGIMES:
            raise DomainError(f"unknown regime {self.regime!r}")
        for name in ("k", "l", "c0", "E0", "L0"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        check_exponents(self.k, self.l, self.regime)
        if not self.c0 > 0:
            raise DomainError(f"c0 must be positive, got {self.c0}")
        if not self.L0 >= 0:
            raise DomainError(f"L0 must be non-negative, got {self.L0}")
        if self.regime == RELATIVISTIC and not self.E0 > 0:
            raise DomainError(f"relativistic E0 must be positive, got {self.E0}")

    @property
    def relativistic(self) -> bool:
        return self.regime == RELATIVISTIC

    def replace(self, **changes) -> "AnsatzParams":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


class PhaseState(NamedTuple):
    """A point (x, v) of phase space; v is the momentum per unit mass."""

    x: np.ndarray
    v: np.ndarray

    @property
    def r(self) -> float:
        return float(np.linalg.norm(self.x))

    @property
    def L(self) -> float:
        """Squared modulus of the angular momentum |x cross v|^2."""
        return float(np.sum(np.cross(self.x, self.v) ** 2))


def check_exponents(k: float, l: float, regime: str = NEWTONIAN) -> None:
    """Raise `DomainError` unless (k, l) admit finite-mass steady states."""
    if regime == NEWTONIAN:
        ok = k > -1 and l > -1 and k + l + 0.5 >= 0 and k < 3 * l + 3.5
        rule = "k > -1, l > -1, k + l + 1/2 >= 0, k < 3l + 7/2"
    else:
        ok = k >= 0 and l > -0.5 and k < 3 * l + 3.5
        rule = "k >= 0, l > -1/2, k < 3l + 7/2"
    if not ok:
        raise DomainError(f"exponents (k={k}, l={l}) violate {regime} constraints: {rule}")


def beta_const_newton(k: float, l: float) -> float:
    """Velocity-space normalization c_kl of the Newtonian density.

    ``c_kl = 2^{l+3/2} pi B(l+1, 1/2) B(l+3/2, k+1)``; the two Beta functions
    are the closed forms of int_0^1 s^l (1-s)^{-1/2} ds and
    int_0^1 s^{l+1/2} (1-s)^k ds.
    """
    check_exponents(k, l, NEWTONIAN)
    return 2.0 ** (l + 1.5) * math.pi * special.beta(l + 1.0, 0.5) * special.beta(l + 1.5, k + 1.0)


def beta_const_rel(l: float) -> float:
    """c_l = 2 pi B(l+1, 1/2)."""
    if not l > -0.5:
        raise DomainError(f"relativistic constant needs l > -1/2, got {l}")
    return 2.0 * math.pi * special.beta(l + 1.0, 0.5)


def g_newton(u, params: AnsatzParams):
    """Newtonian kernel c0 c_kl (E0 - u)_+^{k+l+3/2}; vectorized over ``u``."""
    ckl = beta_const_newton(params.k, params.l)
    gap = np.maximum(params.E0 - np.asarray(u, dtype=float), 0.0)
    out = params.c0 * ckl * gap ** (params.k + params.l + 1.5)
    return out if np.ndim(out) else float(out)


def effective_potential(r, U, L0: float):
    """V = U + L0/(2 r^2), the Newtonian kernel argument."""
    r = np.asarray(r, dtype=float)
    return U + L0 / (2.0 * r * r)


def rel_kernel_argument(r, mu, L0: float):
    """e^mu sqrt(1 + L0/r^2), the relativistic kernel argument."""
    r = np.asarray(r, dtype=float)
    return np.exp(mu) * np.sqrt(1.0 + L0 / (r * r))


def _require_positive_r(r):
    if np.any(np.asarray(r) <= 0):
        raise DomainError("radius must be positive")


def source_newton(r, U, params: AnsatzParams):
    """Mass density r^{2l} g(U + L0/(2 r^2)) at radius ``r`` for potential value ``U``."""
    _require_positive_r(r)
    r = np.asarray(r, dtype=float)
    rho = r ** (2 * params.l) * g_newton(effective_potential(r, U, params.L0), params)
    return rho if np.ndim(rho) else float(rho)


# Relativistic kernels.
#
# With E = u cosh(s), (E^2 - u^2)^{l+1/2} dE = u^{2l+2} sinh(s)^{2l+2} ds and
# E0 - E = 2u sinh((s_max + s)/2) sinh((s_max - s)/2), s_max = arccosh(E0/u).
# Both endpoint factors s^a and (s_max - s)^k go into the algebraic weight of
# QUADPACK's QAWS rule, leaving an analytic integrand.


def _sinhc(s):
    return np.where(s == 0.0, 1.0, np.sinh(s) / np.where(s == 0.0, 1.0, s))


@functools.lru_cache(maxsize=65536)
def _rel_integral(u: float, E0: float, k: float, l: float, pressure: bool) -> float:
    s_max = math.acosh(E0 / u)
    if not s_max > 0.0:  # u within rounding of E0: empty range of energies
        return 0.0
    a = 2.0 * l + (4.0 if pressure else 2.0)

    def smooth(s):
        gap = 2.0 * u * np.sinh(0.5 * (s_max + s)) * _sinhc(0.5 * (s_max - s)) * 0.5
        val = u ** (2.0 * l + 4.0) * _sinhc(s) ** a * gap**k
        if not pressure:
            val = val * np.cosh(s) ** 2
        return val

    res = integrate.quad(
        smooth, 0.0, s_max, weight="alg", wvar=(a, k),
        epsabs=0.0, epsrel=KERNEL_RTOL, limit=200, full_output=1,
    )
    value, abserr = res[0], res[1]
    if len(res) > 3 and abserr > 10 * KERNEL_RTOL * abs(value):
        raise NumericalError(
            f"kernel quadrature did not converge at u={u}: {res[3]}",
            achieved=abserr / abs(value) if value else abserr,
        )
    return float(value)


def _rel_kernel(u, params: AnsatzParams, pressure: bool):
    u_arr = np.asarray(u, dtype=float)
    if np.any(u_arr <= 0):
        raise DomainError("relativistic kernel argument must be positive")
    cl = beta_const_rel(params.l)
    pref = params.c0 * cl / (2.0 * params.l + 3.0 if pressure else 1.0)
    out = np.zeros(u_arr.shape)
    flat = out.reshape(-1)
    for i, ui in enumerate(u_arr.reshape(-1)):
        if ui < params.E0:
            flat[i] = pref * _rel_integral(float(ui), float(params.E0), float(params.k),
                                           float(params.l), pressure)
    return out if out.ndim else float(out)


def g_rel(u, params: AnsatzParams):
    """c0 c_l int_u^{E0} (E0-E)^k E^2 (E^2-u^2)^{l+1/2} dE; 0 for u >= E0."""
    return _rel_kernel(u, params, pressure=False)


def h_rel(u, params: AnsatzParams):
    """c0 c_l/(2l+3) int_u^{E0} (E0-E)^k (E^2-u^2)^{l+3/2} dE; 0 for u >= E0."""
    return _rel_kernel(u, params, pressure=True)


def source_rel(r, mu, params: AnsatzParams):
    """Mass-energy density and radial pressure ``(rho, p)`` at radius ``r``."""
    _require_positive_r(r)
    r = np.asarray(r, dtype=float)
    u = rel_kernel_argument(r, mu, params.L0)
    factor = r ** (2 * params.l) * np.exp(-(2 * params.l + 4) * np.asarray(mu, dtype=float))
    rho = factor * g_rel(u, params)
    p = factor * h_rel(u, params)
    if np.ndim(rho) == 0:
        return float(rho), float(p)
    return rho, p


def particle_energy_newton(state: PhaseState, U: float) -> float:
    return 0.5 * float(np.dot(state.v, state.v)) + U


def particle_energy_rel(state: PhaseState, mu: float) -> float:
    return math.exp(mu) * math.sqrt(1.0 + float(np.dot(state.v, state.v)))


def distribution(E, L, params: AnsatzParams):
    """f = c0 (E0 - E)_+^k (L - L0)_+^l evaluated on conserved quantities."""
    de = np.maximum(params.E0 - np.asarray(E, dtype=float), 0.0)
    dl = np.maximum(np.asarray(L, dtype=float) - params.L0, 0.0)
    inside = (de > 0) & (dl > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.where(inside, params.c0 * de**params.k * dl**params.l, 0.0)
    return val if np.ndim(val) else float(val)
