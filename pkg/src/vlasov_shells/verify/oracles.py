"""Brute-force oracles that share no code path with the reduced kernels or the solvers."""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate, special

from ..errors import DomainError, NumericalError
from ..kernels import AnsatzParams

INNER_RTOL = 1e-10
OUTER_RTOL = 1e-9


def _quad(fn, a, b, wvar, epsrel):
    res = integrate.quad(fn, a, b, weight="alg", wvar=wvar, epsabs=0.0,
                         epsrel=epsrel, limit=200, full_output=1)
    if len(res) > 3 and res[1] > 1e3 * epsrel * abs(res[0]):
        raise NumericalError(f"velocity-space quadrature failed: {res[3]}",
                             achieved=res[1] / abs(res[0]) if res[0] else res[1])
    return res[0]


def velocity_space_oracle(r: float, potential: float, params: AnsatzParams):
    """Integrate the ansatz f over momentum space at radius ``r`` directly.

    Cylindrical momentum coordinates (v_r, v_t) are used, the azimuth
    contributing 2 pi and the sign of v_r a factor 2.  The endpoint
    singularities of both nested integrals are absorbed into QAWS weights.

    Returns ``rho`` for the Newtonian regime (``potential`` is U) and
    ``(rho, p)`` for the relativistic one (``potential`` is mu).
    """
    if r <= 0:
        raise DomainError("radius must be positive")
    k, l, c0, E0, L0 = params.k, params.l, params.c0, params.E0, params.L0
    rel = params.relativistic
    a = math.sqrt(L0) / r
    if rel:
        emu = math.exp(potential)
        w2 = (E0 / emu) ** 2 - 1.0          # |v|^2 bound from E < E0
        top = math.sqrt(1.0 + w2) if w2 > -1 else 0.0
    else:
        w2 = 2.0 * (E0 - potential)         # |v|^2 bound from E < E0
    vr2_max = w2 - a * a
    if vr2_max <= 0:
        return (0.0, 0.0) if rel else 0.0
    vr_max = math.sqrt(vr2_max)
    alpha = l if L0 > 0 else 2 * l + 1

    def inner(vr, moment):
        b = math.sqrt(max(w2 - vr * vr, 0.0))
        if b <= a:
            return 0.0

        def fn(vt):
            if rel:
                g = math.sqrt(1.0 + vr * vr + vt * vt)
                val = c0 * (emu * (b + vt) / (top + g)) ** k
                val *= g if moment == 0 else vr * vr / g
            else:
                val = c0 * ((b + vt) / 2.0) ** k
            if L0 > 0:
                return val * (r * r * (vt + a)) ** l * vt
            return val * r ** (2 * l)

        return _quad(fn, a, b, (alpha, k), INNER_RTOL)

    expo = k + l + 1.0

    def outer(moment):
        def fn(vr):
            # QAWS samples the endpoint; the ratio is continuous there.
            vr = min(vr, vr_max * (1.0 - 1e-7))
            return inner(vr, moment) / (vr_max - vr) ** expo
        return 4.0 * math.pi * _quad(fn, 0.0, vr_max, (0.0, expo), OUTER_RTOL)

    if rel:
        return outer(0), outer(1)
    return outer(0)


def ckl_quadrature(k: float, l: float) -> float:
    """c_kl from its two defining integrals, evaluated by adaptive quadrature."""
    first = integrate.quad(lambda s: 1.0, 0.0, 1.0, weight="alg", wvar=(l, -0.5),
                           epsabs=0.0, epsrel=1e-13)[0]
    second = integrate.quad(lambda s: 1.0, 0.0, 1.0, weight="alg", wvar=(l + 0.5, k),
                            epsabs=0.0, epsrel=1e-13)[0]
    return 2.0 ** (l + 1.5) * math.pi * first * second


def cl_quadrature(l: float) -> float:
    return 2.0 * math.pi * integrate.quad(lambda s: 1.0, 0.0, 1.0, weight="alg", wvar=(l, -0.5),
                                          epsabs=0.0, epsrel=1e-13)[0]


def kernel_gauss_oracle(u: float, params: AnsatzParams, pressure: bool = False, nodes: int = 10_000) -> float:
    """g or h of the relativistic ansatz by fixed-order Gauss-Legendre on the raw integrand."""
    if u >= params.E0:
        return 0.0
    x, w = special.roots_legendre(nodes)
    E = 0.5 * (params.E0 - u) * x + 0.5 * (params.E0 + u)
    base = (params.E0 - E) ** params.k
    if pressure:
        vals = base * (E * E - u * u) ** (params.l + 1.5) / (2 * params.l + 3)
    else:
        vals = base * E * E * (E * E - u * u) ** (params.l + 0.5)
    return params.c0 * cl_quadrature(params.l) * 0.5 * (params.E0 - u) * float(np.dot(w, vals))


def rk4_profile(params: AnsatzParams, center: float, r_end: float, steps: int):
    """Classical fixed-step RK4 for (potential, m) from the plateau edge to ``r_end``.

    With L0 = 0 (only l = 0 supported) the first node is r = h, reached by the
    second-order Taylor expansion about the regular center; starting RK4 at
    r = 0 itself degrades it to second order through the m/r^2 term.
    Returns (r, potential, m) at every step.
    """
    from ..kernels import source_newton, source_rel

    rel = params.relativistic
    L0 = params.L0
    four_pi = 4.0 * math.pi

    def f(r, y):
        pot, m = y
        if rel:
            rho, p = source_rel(r, pot, params)
            return np.array([(four_pi * r * p + m / r**2) / (1 - 2 * m / r), four_pi * r * r * rho])
        return np.array([m / r**2, four_pi * r * r * source_newton(r, pot, params)])

    if L0 > 0:
        r0 = (math.sqrt(L0 / (params.E0**2 * math.exp(-2 * center) - 1.0)) if rel
              else math.sqrt(L0 / (2.0 * (params.E0 - center))))
        h = (r_end - r0) / steps
        y0 = (center, 0.0)
    else:
        if params.l != 0:
            raise DomainError("the series start of the RK4 oracle needs l = 0")
        h = r_end / (steps + 1)
        r0 = h
        if rel:
            rho_c, p_c = source_rel(1.0, center, params)
        else:
            rho_c, p_c = source_newton(1.0, center, params), 0.0
        y0 = (center + four_pi * (p_c / 2.0 + rho_c / 6.0) * h * h, four_pi * rho_c * h**3 / 3.0)

    r = r0 + h * np.arange(steps + 1)
    y = np.empty((steps + 1, 2))
    y[0] = y0
    for i in range(steps):
        ri, yi = r[i], y[i]
        k1 = f(ri, yi)
        k2 = f(ri + h / 2, yi + h / 2 * k1)
        k3 = f(ri + h / 2, yi + h / 2 * k2)
        k4 = f(ri + h, yi + h * k3)
        y[i + 1] = yi + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return r, y[:, 0], y[:, 1]
