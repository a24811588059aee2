"""Sound-soft scattering of a plane wave by a circular obstacle.

The outer (Helmholtz) part of the scattered field is the Mie series

    S+(r, theta) = -sum_j a_j H_j(kr) / H_j(kR) exp(i j theta),
    a_j = i^j exp(-i j psi) J_j(kR),

so that the total field ``S- + S+`` vanishes on ``r = R``.  In the nematic
regime ``rho0^2 u1 = ell^2``, ``rho0^2 u2 = ell^2 / gamma`` a boundary layer of
width ``O(ell)`` corrects the outer field; its decay rate and boundary value
are provided here.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .dispersion import relative_dispersion_residual, real_wavenumber
from .medium import Director, MaterialParams
from .specfun import MAX_ORDER, bessel_j_orders, hankel1_orders, signed_orders


class TruncationWarning(UserWarning):
    """The requested series truncation leaves a tail above the target."""


@dataclass(frozen=True)
class MieExpansion:
    """Circular-harmonic coefficients ``a_j``, ``j = -jmax..jmax``, of an incident plane wave."""

    coeffs: np.ndarray
    k: float
    R: float
    psi: float

    @property
    def jmax(self) -> int:
        return (len(self.coeffs) - 1) // 2

    @property
    def orders(self) -> np.ndarray:
        return np.arange(-self.jmax, self.jmax + 1)

    def coeff(self, j: int) -> complex:
        return complex(self.coeffs[j + self.jmax])

    def incident(self, r, theta):
        """Incident wave ``exp(i k r cos(theta - psi))`` in closed form."""
        return np.exp(1j * self.k * np.asarray(r) * np.cos(np.asarray(theta) - self.psi))

    def harmonic_sum(self, theta):
        """Partial sum ``sum_j a_j exp(i j theta)``; reconstructs the incident wave on ``r = R``."""
        theta = np.asarray(theta, dtype=float)
        return np.exp(1j * np.multiply.outer(theta, self.orders)) @ self.coeffs


def _check_tail(coeffs: np.ndarray, target: float) -> None:
    peak = np.max(np.abs(coeffs))
    if peak > 0.0 and max(abs(coeffs[0]), abs(coeffs[-1])) > target * peak:
        warnings.warn("Jacobi-Anger tail exceeds the target; increase jmax", TruncationWarning, stacklevel=3)


def jacobi_anger_coeffs(k: float, psi: float, r: float, jmax: int, target_tail: float = 1e-12) -> MieExpansion:
    """Coefficients ``a_j = i^j exp(-i j psi) J_j(k r)`` for ``|j| <= jmax``.

    The returned expansion carries ``R = r``.  A :class:`TruncationWarning`
    is issued when ``|a_jmax| / max |a_j|`` exceeds ``target_tail``.
    """
    if not k * r > 0.0:
        raise ValueError("k r must be positive")
    if jmax > MAX_ORDER:
        raise ValueError(f"jmax must not exceed {MAX_ORDER}")
    j = np.arange(-jmax, jmax + 1)
    jv = signed_orders(bessel_j_orders(jmax, k * r))
    coeffs = (1j) ** (j % 4) * np.exp(-1j * j * psi) * jv
    _check_tail(coeffs, target_tail)
    return MieExpansion(coeffs, float(k), float(r), float(psi))


def select_jmax(k: float, R: float, target_tail: float = 1e-12) -> int:
    """Smallest order past ``kR`` with ``|J_jmax(kR)| < target_tail``, and at least ``kR + 10``.

    The tail is measured relative to ``max_j |J_j(kR)|`` (at most 1), which
    also bounds the ratio ``|a_jmax| / max |a_j|``.

    Capped at 200 with a :class:`TruncationWarning`.
    """
    x = k * R
    if not x > 0.0:
        raise ValueError("kR must be positive")
    floor = math.ceil(x + 10.0)
    if floor > MAX_ORDER:
        warnings.warn("kR too large for the order cap; truncating at 200", TruncationWarning, stacklevel=2)
        return MAX_ORDER
    jv = np.abs(bessel_j_orders(MAX_ORDER, x))
    start = math.ceil(x)
    below = np.nonzero(jv[start:] < target_tail * jv.max())[0]
    if below.size == 0:
        warnings.warn("Bessel tail target not reached below order 200", TruncationWarning, stacklevel=2)
        return MAX_ORDER
    return max(int(start + below[0]), floor)


def mie_expansion(k: float, psi: float = 0.0, R: float = 1.0, target_tail: float = 1e-12) -> MieExpansion:
    """Expansion of ``exp(i k (x cos psi + y sin psi))`` at the obstacle radius."""
    return jacobi_anger_coeffs(k, psi, R, select_jmax(k, R, target_tail), target_tail)


def nematic_wavenumber(params: MaterialParams, omega: float, psi: float, n: Director) -> float:
    """Real root ``k`` for an incident wave travelling at angle ``psi`` in a medium with director ``n``."""
    d = (math.cos(psi), math.sin(psi))
    k = real_wavenumber(params, omega, n.angle_to(d))
    assert relative_dispersion_residual(params, n, k, d, omega) < 1e-10
    return k


def _radial_factors(exp: MieExpansion, r: np.ndarray, extra: int = 0):
    """``H_j(kr) / H_j(kR)`` for ``j = -jmax-extra..jmax+extra`` and each radius in ``r``."""
    m = exp.jmax + extra
    hr0 = signed_orders(hankel1_orders(m, exp.k * exp.R))
    rows = np.array([signed_orders(hankel1_orders(m, exp.k * v)) for v in r])
    return rows, hr0


def _by_radius(r, theta):
    r, theta = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(theta, dtype=float))
    if np.any(r < 0):
        raise ValueError("radius must be non-negative")
    radii, inverse = np.unique(r.ravel(), return_inverse=True)
    return r.shape, radii, inverse, theta.ravel()


def mie_scattered_field(exp: MieExpansion, r, theta):
    """Truncated Mie series for the scattered field at ``r >= R``.

    ``r`` and ``theta`` broadcast together; the result has their common shape.
    """
    shape, radii, inverse, theta = _by_radius(r, theta)
    if radii[0] < exp.R * (1.0 - 1e-12):
        raise ValueError("the Mie series is only valid outside the obstacle")
    hr, hr0 = _radial_factors(exp, radii)
    ratio = hr / hr0
    phase = np.exp(1j * np.multiply.outer(theta, exp.orders))
    out = -np.sum(phase * (ratio[inverse] * exp.coeffs), axis=1)
    return out.reshape(shape)[()] if shape else out[0]


@dataclass(frozen=True)
class SecondOrderTrace:
    """Value, Cartesian Hessian and Laplacian of a field at a set of points.

    ``hessian`` has shape ``(..., 2, 2)``.
    """

    value: np.ndarray
    hessian: np.ndarray

    @property
    def laplacian(self):
        return self.hessian[..., 0, 0] + self.hessian[..., 1, 1]

    def nhn(self, n: Director):
        """``n . H n`` for a constant director."""
        h = self.hessian
        return n.n1 * n.n1 * h[..., 0, 0] + 2.0 * n.n1 * n.n2 * h[..., 0, 1] + n.n2 * n.n2 * h[..., 1, 1]


def plane_wave_trace(k: float, psi: float, x, y, amplitude: complex = 1.0) -> SecondOrderTrace:
    """Exact second derivatives of ``amplitude * exp(i k d.x)`` with ``d = (cos psi, sin psi)``."""
    d = np.array([math.cos(psi), math.sin(psi)])
    s = amplitude * np.exp(1j * k * (d[0] * np.asarray(x) + d[1] * np.asarray(y)))
    hess = -(k * k) * s[..., None, None] * np.outer(d, d)
    return SecondOrderTrace(s, hess)


def mie_trace(exp: MieExpansion, r, theta) -> SecondOrderTrace:
    """Value and Hessian of the Mie scattered field, differentiated term by term."""
    shape, radii, inverse, theta = _by_radius(r, theta)
    j = exp.orders
    hr, hr0 = _radial_factors(exp, radii, extra=1)
    m = exp.jmax
    hj = hr[:, 1:-1]
    x = exp.k * radii[:, None]
    dh = hr[:, :-2] - j / x * hj  # H_j' = H_{j-1} - (j/x) H_j
    d2h = -dh / x - (1.0 - (j / x) ** 2) * hj
    c = -exp.coeffs / hr0[1 : 2 * m + 2]
    phase = np.exp(1j * np.multiply.outer(theta, j)) * c
    z, dz, d2z = hj[inverse], dh[inverse], d2h[inverse]
    k = exp.k
    rr = radii[inverse]
    s = np.sum(phase * z, axis=1)
    s_r = k * np.sum(phase * dz, axis=1)
    s_rr = k * k * np.sum(phase * d2z, axis=1)
    s_t = np.sum(1j * j * phase * z, axis=1)
    s_tt = np.sum(-(j * j) * phase * z, axis=1)
    s_rt = k * np.sum(1j * j * phase * dz, axis=1)
    # Hessian in the (e_r, e_theta) frame, rotated to Cartesian
    a = s_rr
    b = s_rt / rr - s_t / rr**2
    cc = s_r / rr + s_tt / rr**2
    ct, st = np.cos(theta), np.sin(theta)
    hxx = a * ct * ct - 2 * b * ct * st + cc * st * st
    hyy = a * st * st + 2 * b * ct * st + cc * ct * ct
    hxy = (a - cc) * ct * st + b * (ct * ct - st * st)
    hess = np.stack([np.stack([hxx, hxy], -1), np.stack([hxy, hyy], -1)], -2)
    return SecondOrderTrace(s.reshape(shape), hess.reshape(shape + (2, 2)))


def far_field_amplitude(exp: MieExpansion, theta):
    """Directional amplitude ``F`` with ``S+ ~ F(theta) exp(i k r) / sqrt(r)`` as ``r -> infinity``."""
    theta = np.asarray(theta, dtype=float)
    hr0 = signed_orders(hankel1_orders(exp.jmax, exp.k * exp.R))
    j = exp.orders
    weights = exp.coeffs * (-1j) ** (j % 4) / hr0
    f = np.exp(1j * np.multiply.outer(theta, j)) @ weights
    return -math.sqrt(2.0 / (math.pi * exp.k)) * np.exp(-1j * math.pi / 4) * f


def along_axis_field(exp: MieExpansion, y):
    """Complex scattered field ``S+(0, y)`` on the y-axis outside the obstacle (``|y| >= R``)."""
    y = np.asarray(y, dtype=float)
    theta = np.where(y >= 0.0, np.pi / 2, -np.pi / 2)
    return mie_scattered_field(exp, np.abs(y), theta)


@dataclass(frozen=True)
class BoundaryLayerSpec:
    """Nematic regime ``rho0^2 u1 = ell^2``, ``rho0^2 u2 = ell^2 / gamma`` around an obstacle of radius ``R``."""

    gamma: float
    ell: float
    R: float = 1.0

    def __post_init__(self):
        if not self.gamma >= 1.0:
            raise ValueError("gamma must be at least 1")
        if not 0.0 < self.ell < 0.1 * self.R:
            raise ValueError("ell must lie in (0, 0.1 R)")

    def params(self, c0: float = 1.0, rho0: float = 1.0) -> MaterialParams:
        u1 = self.ell**2 / rho0**2
        u2 = 0.0 if math.isinf(self.gamma) else u1 / self.gamma
        return MaterialParams(c0=c0, rho0=rho0, u1=u1, u2=u2)

    def decay_rate(self, params: MaterialParams, nu, n: Director) -> float:
        """Decay rate per unit physical distance, ``boundary_layer_rate / ell``."""
        return boundary_layer_rate(params, self.gamma, nu, n) / self.ell


def boundary_layer_rate(params: MaterialParams, gamma: float, nu, n: Director) -> float:
    """Decay rate of the layer in the stretched normal coordinate ``distance / ell``.

    For a layer that varies only along the unit normal ``nu``, the reaction-diffusion
    equation ``-c0^2 S + div((I + n n / gamma) grad S) = 0`` gives
    ``S ~ exp(-lambda xi)`` with ``lambda = c0 / sqrt(1 + (nu.n)^2 / gamma)``.
    """
    if not gamma >= 1.0:
        raise ValueError("gamma must be at least 1")
    nu = np.asarray(nu, dtype=float)
    nu = nu / np.hypot(nu[0], nu[1])
    dn = nu[0] * n.n1 + nu[1] * n.n2
    return params.c0 / math.sqrt(1.0 + dn * dn / gamma)


def boundary_layer_value(S_minus_trace, S0_plus_trace, params: MaterialParams, gamma: float, ell: float, n: Director, boundary_point=None):
    """Boundary value of the layer term at ``O(ell^2)``.

    ``(ell^2 / c0^2) (L[S-] - L[S0+])`` with ``L = Lap + n.H n / gamma``.  Here
    ``S-`` is the boundary data that the outer field ``S0+`` matches on the
    obstacle: the incident wave in the matching ``S+ = S-``, or the negated
    incident wave for the total-field-zero convention of the Mie series.
    Traces may be :class:`SecondOrderTrace` objects or callables returning one
    at ``boundary_point``.
    """
    if callable(S_minus_trace):
        S_minus_trace = S_minus_trace(boundary_point)
    if callable(S0_plus_trace):
        S0_plus_trace = S0_plus_trace(boundary_point)
    g = 0.0 if math.isinf(gamma) else 1.0 / gamma
    lm = S_minus_trace.laplacian + g * S_minus_trace.nhn(n)
    lp = S0_plus_trace.laplacian + g * S0_plus_trace.nhn(n)
    return ell**2 / params.c0**2 * (lm - lp)
