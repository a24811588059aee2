"""Material constants, the nematic director and derived time scales.

A (nematic) Korteweg fluid is described at the acoustic scale by four
constants: the isotropic speed of sound ``c0``, the reference density
``rho0`` and the two Korteweg constants ``u1`` (isotropic) and ``u2``
(director-weighted).  The dimensional wave equation is

    -w^2 S - c0^2 Lap S + rho0^2 u1 Lap^2 S + rho0^2 u2 Lap(n.H(S).n) = 0

and every dispersion formula depends on the parameters only through the
product ``omega * tau`` of the frequency with a characteristic time scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class MaterialParams:
    """Constitutive constants of a nematic Korteweg fluid.

    Parameters
    ----------
    c0 : float
        Isotropic speed of sound, > 0.
    rho0 : float
        Reference density, > 0.
    u1 : float
        Korteweg constant, >= 0.  ``u1 = u2 = 0`` is the classical fluid.
    u2 : float
        Nematic Korteweg constant, >= 0.
    """

    c0: float = 1.0
    rho0: float = 1.0
    u1: float = 0.0
    u2: float = 0.0

    def __post_init__(self):
        for name in ("c0", "rho0", "u1", "u2"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.c0 <= 0.0:
            raise ValueError(f"c0 must be positive, got {self.c0!r}")
        if self.rho0 <= 0.0:
            raise ValueError(f"rho0 must be positive, got {self.rho0!r}")
        if self.u1 < 0.0 or self.u2 < 0.0:
            raise ValueError("Korteweg constants u1, u2 must be non-negative")

    @property
    def beta1(self) -> float:
        """Coefficient ``rho0^2 u1`` of the biharmonic term."""
        return self.rho0**2 * self.u1

    @property
    def beta2(self) -> float:
        """Coefficient ``rho0^2 u2`` of the nematic fourth-order term."""
        return self.rho0**2 * self.u2

    @property
    def is_classical(self) -> bool:
        return self.u1 == 0.0 and self.u2 == 0.0

    def beta(self, xi) -> float:
        """Effective fourth-order coefficient ``rho0^2 (u1 + u2 cos^2 xi)``."""
        return self.rho0**2 * (self.u1 + self.u2 * cos2(xi))


@dataclass(frozen=True)
class Director:
    """Spatially constant nematic director, a unit 2-vector.

    The constructor normalizes its input; ``n`` and ``-n`` describe the same
    nematic state and give identical operators downstream.
    """

    n1: float
    n2: float

    def __post_init__(self):
        norm = math.hypot(self.n1, self.n2)
        if not math.isfinite(norm) or norm == 0.0:
            raise ValueError("director must be a finite non-zero vector")
        object.__setattr__(self, "n1", self.n1 / norm)
        object.__setattr__(self, "n2", self.n2 / norm)

    @classmethod
    def from_angle(cls, angle: float) -> "Director":
        """Director making ``angle`` (radians) with the x1 axis."""
        return cls(math.cos(angle), math.sin(angle))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.n1, self.n2])

    @property
    def angle(self) -> float:
        return math.atan2(self.n2, self.n1)

    def __neg__(self) -> "Director":
        return Director(-self.n1, -self.n2)

    def angle_to(self, d) -> float:
        """Angle in [0, pi] between the director and a direction ``d``."""
        d = np.asarray(d, dtype=float)
        c = (self.n1 * d[0] + self.n2 * d[1]) / np.hypot(d[0], d[1])
        return float(np.arccos(np.clip(c, -1.0, 1.0)))


def cos2(xi):
    """``cos(xi)**2`` evaluated as ``(1 + cos 2xi)/2``.

    This form is exactly zero at the floating-point value of pi/2, so the
    orthogonal direction reproduces the isotropic time scale bit for bit.
    """
    return 0.5 * (1.0 + np.cos(2.0 * np.asarray(xi, dtype=float)))


def tau1(params: MaterialParams) -> float:
    """Characteristic time scale of isotropic Korteweg waves.

    ``tau1 = 2 rho0 sqrt(u1) / c0^2``, normalized so that the dispersion
    relation of the wave equation reads ``-1 + kappa^2 + (w tau)^2 kappa^4 / 4 = 0``
    with ``kappa = c0 k / w``.
    """
    return 2.0 * params.rho0 * math.sqrt(params.u1) / params.c0**2


def tau2(params: MaterialParams, xi):
    """Anisotropic time scale for propagation at angle ``xi`` to the director.

    ``tau2 = 2 rho0 sqrt(u1 + u2 cos^2 xi) / c0^2``; equals :func:`tau1` for
    ``xi = pi/2`` and is maximal along the director.
    """
    t = 2.0 * params.rho0 * np.sqrt(params.u1 + params.u2 * cos2(xi)) / params.c0**2
    return float(t) if np.ndim(t) == 0 else t


@dataclass(frozen=True)
class NondimGroups:
    """Time scales of a medium at a fixed angular frequency."""

    params: MaterialParams
    omega: float

    @property
    def tau1(self) -> float:
        return tau1(self.params)

    def tau2_of_xi(self, xi):
        return tau2(self.params, xi)

    def omega_tau(self, xi=np.pi / 2):
        """The dimensionless product ``omega * tau2(xi)`` fed to the dispersion formulas."""
        return self.omega * self.tau2_of_xi(xi)


def omega_for_omega_tau(params: MaterialParams, omega_tau: float, xi: float = np.pi / 2) -> float:
    """Frequency at which ``omega * tau2(xi)`` equals ``omega_tau``."""
    t = tau2(params, xi)
    if t == 0.0:
        raise ValueError("medium has no Korteweg time scale (u1 = u2 cos^2 xi = 0)")
    return omega_tau / t
