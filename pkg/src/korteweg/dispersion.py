"""Plane-wave dispersion of the (nematic) Helmholtz-Korteweg equation.

Substituting ``S = exp(i k d.x)`` gives

    -w^2 + c0^2 k^2 + rho0^2 (u1 + u2 (d.n)^2) k^4 = 0,

and with ``kappa = c0 k / w`` and ``x = w tau2`` the nondimensional quartic

    -1 + kappa^2 + x^2 kappa^4 / 4 = 0.

Its roots in ``kappa^2`` are ``2/(1 + sqrt(1+x^2))`` (a propagating pair) and
``-2 (1 + sqrt(1+x^2)) / x^2`` (an evanescent pair).  All closed forms below
are written so that ``sqrt(1+x^2) - 1`` is never formed by subtraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .medium import Director, MaterialParams, tau2

#: Below this value of ``omega * tau`` the quartic is treated as the Helmholtz quadratic.
DEGENERATE_OMEGA_TAU = 1e-14

PROPAGATING = "propagating"
EVANESCENT = "evanescent"
MIXED = "mixed"


def _hyp(x):
    """``1 + sqrt(1 + x^2)``."""
    return 1.0 + np.sqrt(1.0 + np.square(x))


def quartic(kappa, omega_tau):
    """Left-hand side of ``-1 + kappa^2 + (omega_tau^2/4) kappa^4``."""
    kappa = np.asarray(kappa)
    q = kappa * kappa
    return -1.0 + q + 0.25 * omega_tau**2 * q * q


def quartic_relative_residual(kappa, omega_tau):
    """Residual of the quartic scaled by the magnitude of its three terms."""
    kappa = np.asarray(kappa)
    scale = 1.0 + np.abs(kappa) ** 2 + 0.25 * omega_tau**2 * np.abs(kappa) ** 4
    return np.abs(quartic(kappa, omega_tau)) / scale


def classify(kappa: complex, rtol: float = 1e-14) -> str:
    """Label a root as purely real, purely imaginary or mixed."""
    re, im = abs(kappa.real), abs(kappa.imag)
    size = max(re, im)
    if im <= rtol * size:
        return PROPAGATING
    if re <= rtol * size:
        return EVANESCENT
    return MIXED


@dataclass(frozen=True)
class DispersionRoots:
    """Roots ``kappa`` of the nondimensional dispersion quartic.

    ``roots`` holds ``(+kr, -kr, +i ki, -i ki)`` in that order, or just
    ``(+1, -1)`` when ``degenerate`` is set (``omega*tau`` below
    :data:`DEGENERATE_OMEGA_TAU`, where the quartic collapses to the
    Helmholtz quadratic).
    """

    roots: np.ndarray
    kinds: tuple
    omega_tau: float
    degenerate: bool = False

    @property
    def propagating(self) -> float:
        """The positive purely real root."""
        return float(self.roots[0].real)

    @property
    def evanescent(self) -> complex | None:
        """The purely imaginary root with positive imaginary part, if any."""
        return None if self.degenerate else complex(self.roots[2])

    def wavenumbers(self, omega: float, c0: float) -> np.ndarray:
        """Dimensional wavenumbers ``k = omega kappa / c0``."""
        return omega / c0 * self.roots

    def residuals(self) -> np.ndarray:
        return quartic_relative_residual(self.roots, self.omega_tau)

    def vieta_product(self) -> complex:
        """Product of the two ``kappa^2`` roots; equals ``-4 / omega_tau^2``."""
        if self.degenerate:
            raise ValueError("degenerate quartic has a single kappa^2 root")
        return complex(self.roots[0] ** 2 * self.roots[2] ** 2)


def roots_from_omega_tau(omega_tau: float) -> DispersionRoots:
    """Closed-form roots of ``-1 + kappa^2 + omega_tau^2 kappa^4 / 4 = 0``."""
    x = float(omega_tau)
    if x < 0.0 or not math.isfinite(x):
        raise ValueError(f"omega_tau must be finite and non-negative, got {omega_tau!r}")
    if x < DEGENERATE_OMEGA_TAU:
        roots = np.array([1.0 + 0j, -1.0 + 0j])
        return DispersionRoots(roots, (PROPAGATING, PROPAGATING), x, degenerate=True)
    h = _hyp(x)
    kr = math.sqrt(2.0 / h)
    ki = math.sqrt(2.0 * h) / x
    roots = np.array([kr, -kr, 1j * ki, -1j * ki], dtype=complex)
    return DispersionRoots(roots, tuple(classify(r) for r in roots), x)


def solve_wavenumbers(params: MaterialParams, omega: float, xi: float = np.pi / 2) -> DispersionRoots:
    """Nondimensional wavenumbers for propagation at angle ``xi`` to the director.

    The dimensional wavenumbers ``k = (omega/c0) kappa`` satisfy
    :func:`dispersion_residual`.
    """
    if omega <= 0.0:
        raise ValueError(f"omega must be positive, got {omega!r}")
    return roots_from_omega_tau(omega * tau2(params, xi))


def dispersion_residual(params: MaterialParams, n: Director, k, d, omega: float):
    """``-w^2 + c0^2 k^2 + rho0^2 u1 k^4 + rho0^2 u2 k^4 (d.n)^2``.

    Vanishes exactly for admissible plane waves ``exp(i k d.x)``.
    """
    d = np.asarray(d, dtype=float)
    dn = d[0] * n.n1 + d[1] * n.n2
    k = np.asarray(k)
    k2 = k * k
    return -omega**2 + params.c0**2 * k2 + (params.beta1 + params.beta2 * dn * dn) * k2 * k2


def relative_dispersion_residual(params: MaterialParams, n: Director, k, d, omega: float):
    """:func:`dispersion_residual` divided by the magnitude of its terms."""
    d = np.asarray(d, dtype=float)
    dn = d[0] * n.n1 + d[1] * n.n2
    ak2 = np.abs(np.asarray(k)) ** 2
    scale = omega**2 + params.c0**2 * ak2 + (params.beta1 + params.beta2 * dn * dn) * ak2 * ak2
    return np.abs(dispersion_residual(params, n, k, d, omega)) / scale


def speed_ratio(omega_tau):
    """``c0 / c`` of the propagating wave, i.e. the positive real root ``kappa``.

    Equals 1 at ``omega_tau = 0`` and decreases strictly: the effective
    speed of sound grows with frequency.
    """
    x = np.asarray(omega_tau, dtype=float)
    if np.any(x < 0.0):
        raise ValueError("omega_tau must be non-negative")
    r = np.sqrt(2.0 / _hyp(x))
    return float(r) if r.ndim == 0 else r


def phase_speed(params: MaterialParams, omega: float, xi: float = np.pi / 2) -> float:
    """Effective speed of sound ``c = omega / k`` at angle ``xi`` to the director."""
    return params.c0 / speed_ratio(omega * tau2(params, xi))


def real_wavenumber(params: MaterialParams, omega: float, xi: float = np.pi / 2) -> float:
    """Positive real root ``k`` of the dimensional dispersion relation."""
    return omega / params.c0 * speed_ratio(omega * tau2(params, xi))


def frequency(params: MaterialParams, k: float, xi: float = np.pi / 2) -> float:
    """Inverse of :func:`real_wavenumber`: ``omega = sqrt(c0^2 k^2 + beta k^4)``."""
    return math.sqrt(params.c0**2 * k * k + params.beta(xi) * k**4)


def penetration_depth(params: MaterialParams, omega: float, xi: float = np.pi / 2) -> float:
    """1/e decay length of the evanescent wave obtained from the TIR branch.

    ``delta = (c0 / 2w) [(-1 + sqrt(1 + x^2)) / x^2]^(-1/2)`` with
    ``x = omega tau2(xi)``, which is ``c0 / (omega sqrt(alpha_+))`` for the
    positive root of :func:`tir_alpha` at ``c = c0``.  Grows with
    ``tau2`` and is therefore largest along the director.

    Raises
    ------
    ValueError
        If ``omega tau2 = 0``: there is no Korteweg evanescent branch.
    """
    if omega <= 0.0:
        raise ValueError(f"omega must be positive, got {omega!r}")
    x = omega * tau2(params, xi)
    if x < DEGENERATE_OMEGA_TAU:
        raise ValueError("penetration depth is undefined for omega*tau2 = 0")
    return params.c0 / (2.0 * omega) * math.sqrt(_hyp(x))


def penetration_depth_asymptotic(params: MaterialParams, omega: float, xi: float = np.pi / 2) -> float:
    """Large ``omega tau`` form ``(c0 / 2 omega) sqrt(omega tau2)``."""
    x = omega * tau2(params, xi)
    return params.c0 / (2.0 * omega) * math.sqrt(x)


def evanescent_depth(params: MaterialParams, omega: float, xi: float = np.pi / 2) -> float:
    """``1 / |Im k|`` for the purely imaginary root of the quartic.

    This is the decay length of the evanescent branch of the wave equation
    itself, as seen in boundary layers of the solver.
    """
    roots = solve_wavenumbers(params, omega, xi)
    if roots.degenerate:
        return math.inf
    return params.c0 / (omega * roots.evanescent.imag)


class TirAlpha(NamedTuple):
    """Roots of the total-internal-reflection parameter ``alpha``.

    ``plus`` is non-negative and physical; ``minus`` is negative and is kept
    only for completeness.
    """

    plus: float
    minus: float

    @property
    def physical(self) -> float:
        return self.plus


def tir_alpha(omega_tau: float, c_ratio: float = 1.0) -> TirAlpha:
    """``alpha = 4 (c/c0)^2 (-1 +- sqrt(1 + x^2)) / x^2`` with ``x = omega_tau``.

    ``c_ratio`` is ``c / c0``.  The roots solve
    ``-1 + (c0/c)^2 alpha / 2 + (x^2 / 16) (c0/c)^4 alpha^2 = 0``, i.e.
    ``(c0/c)^2 alpha / 2`` runs over the ``kappa^2`` roots of the quartic.
    """
    if omega_tau <= 0.0:
        raise ValueError("omega_tau must be positive")
    if c_ratio <= 0.0:
        raise ValueError("c_ratio must be positive")
    h = _hyp(omega_tau)
    c2 = c_ratio * c_ratio
    return TirAlpha(plus=4.0 * c2 / h, minus=-4.0 * c2 * h / omega_tau**2)


def kirchhoff_love_mu(params: MaterialParams, omega: float) -> float:
    """Coefficient ``mu = omega^2 / (c0^2 u1 rho0^2)`` of ``Lap^2 S - mu S = 0``."""
    denom = params.c0**2 * params.u1 * params.rho0**2
    if denom == 0.0:
        raise ZeroDivisionError("Kirchhoff-Love limit needs u1 > 0")
    return omega**2 / denom
