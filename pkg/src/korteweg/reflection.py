"""Plane-wave reflection at the flat interface ``x2 = 0``.

The fluid occupies the upper half-plane.  An incoming wave
``s0 exp(i k (d1 x1 + d2 x2))`` with ``d2 <= 0`` is reflected into
``A s0 exp(i k (d1 x1 - d2 x2))`` and the boundary condition fixes ``A``.
Refraction into a second medium below the interface is described by Snell's
law; past the critical angle the transmitted wave is evanescent.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .dispersion import relative_dispersion_residual, real_wavenumber
from .medium import Director, MaterialParams

SOUND_SOFT = "sound_soft"
SOUND_HARD = "sound_hard"
IMPEDANCE = "impedance"
BC_KINDS = (SOUND_SOFT, SOUND_HARD, IMPEDANCE)


class ImpedanceResonance(ArithmeticError):
    """Raised when ``d2 k = zeta`` and the reflection amplitude has a pole."""


class NoTotalInternalReflection(ValueError):
    """Raised when ``nT > n``: every angle of incidence transmits."""


@dataclass(frozen=True)
class PlaneWave:
    """``s0 exp(i k d.x)`` with a real unit direction ``d``."""

    s0: complex
    k: complex
    d: tuple

    def __post_init__(self):
        d = np.asarray(self.d, dtype=float)
        norm = float(np.hypot(d[0], d[1]))
        if norm == 0.0 or not math.isfinite(norm):
            raise ValueError("direction must be a finite non-zero vector")
        object.__setattr__(self, "d", (float(d[0]) / norm, float(d[1]) / norm))

    @classmethod
    def from_angle(cls, k: complex, angle: float, s0: complex = 1.0) -> "PlaneWave":
        return cls(s0, k, (math.cos(angle), math.sin(angle)))

    def __call__(self, x1, x2):
        return self.s0 * np.exp(1j * self.k * (self.d[0] * np.asarray(x1) + self.d[1] * np.asarray(x2)))

    def derivative(self, x1, x2, order: tuple = (0, 1)):
        """Mixed partial derivative ``d^a/dx1^a d^b/dx2^b`` with ``order = (a, b)``."""
        a, b = order
        factor = (1j * self.k * self.d[0]) ** a * (1j * self.k * self.d[1]) ** b
        return factor * self(x1, x2)

    def mirror(self, amplitude: complex = 1.0) -> "PlaneWave":
        """Reflection across ``x2 = 0`` scaled by ``amplitude``."""
        return PlaneWave(amplitude * self.s0, self.k, (self.d[0], -self.d[1]))

    def is_admissible(self, params: MaterialParams, n: Director, omega: float, tol: float = 1e-8) -> bool:
        """Whether ``(k, d)`` solves the nematic dispersion relation at ``omega``."""
        return bool(relative_dispersion_residual(params, n, self.k, self.d, omega) < tol)


@dataclass(frozen=True)
class Superposition:
    """Sum of plane waves, evaluated together with its derivatives."""

    waves: tuple = field(default_factory=tuple)

    def __call__(self, x1, x2):
        return sum(w(x1, x2) for w in self.waves)

    def derivative(self, x1, x2, order: tuple = (0, 1)):
        return sum(w.derivative(x1, x2, order) for w in self.waves)

    @property
    def scale(self) -> float:
        """Largest ``|s0|`` and ``|k|`` of the components, for normalizing defects."""
        return max(abs(w.s0) for w in self.waves), max(abs(w.k) for w in self.waves)


@dataclass(frozen=True)
class InterfaceSpec:
    """Boundary condition on ``x2 = 0`` and, for transmission, the refractive pair ``(n, nT)``."""

    bc_kind: str = SOUND_SOFT
    zeta: complex = 0.0
    refractive_pair: tuple | None = None

    def __post_init__(self):
        if self.bc_kind not in BC_KINDS:
            raise ValueError(f"unknown boundary condition {self.bc_kind!r}")
        if not cmath.isfinite(self.zeta):
            raise ValueError("impedance zeta must be finite")
        if self.refractive_pair is not None:
            n, n_t = self.refractive_pair
            if not (n > 0 and n_t > 0):
                raise ValueError("refractive indices must be positive")


def reflect_amplitude(incoming: PlaneWave, iface: InterfaceSpec) -> complex:
    """Amplitude ``A`` of the mirrored wave for which the total field obeys the boundary condition.

    Sound-soft gives -1 and sound-hard +1.  For the impedance condition the
    balance ``i A (d2 k - zeta) = -i (d2 k + zeta)`` gives
    ``A = -(d2 k + zeta) / (d2 k - zeta)``, which tends to -1 as ``zeta -> 0``
    and to +1 as ``zeta -> infinity``.
    """
    if incoming.d[1] > 0.0:
        raise ValueError("incoming wave must travel toward the interface (d2 <= 0)")
    if iface.bc_kind == SOUND_SOFT:
        return -1.0 + 0j
    if iface.bc_kind == SOUND_HARD:
        return 1.0 + 0j
    d2k = incoming.d[1] * incoming.k
    denom = d2k - iface.zeta
    if abs(denom) <= 1e-14 * max(abs(d2k), abs(iface.zeta), 1e-300):
        raise ImpedanceResonance("d2 k = zeta: reflection amplitude is singular")
    return complex(-(d2k + iface.zeta) / denom)


def reflected_field(incoming: PlaneWave, iface: InterfaceSpec) -> Superposition:
    """Incident plus reflected wave."""
    return Superposition((incoming, incoming.mirror(reflect_amplitude(incoming, iface))))


def boundary_residual(total_field: Superposition, iface: InterfaceSpec, sample_points: Sequence[float]) -> float:
    """Largest normalized boundary-condition defect on ``x2 = 0``.

    Sound-soft measures ``|S| / s``, sound-hard ``|d2 S| / (s k)``.  The
    impedance amplitude makes ``d_nu(d_nu S) = i zeta d_nu S`` hold with
    ``nu = -e2`` the outward normal of the fluid, a Robin condition on the
    normal derivative; its defect is scaled by ``s k (k + |zeta|)``.
    Here ``s`` and ``k`` are the largest amplitude and wavenumber present.
    """
    x1 = np.asarray(sample_points, dtype=float)
    x2 = np.zeros_like(x1)
    s, k = total_field.scale
    if iface.bc_kind == SOUND_SOFT:
        defect = np.abs(total_field(x1, x2)) / s
    elif iface.bc_kind == SOUND_HARD:
        defect = np.abs(total_field.derivative(x1, x2, (0, 1))) / (s * k)
    else:
        s2 = total_field.derivative(x1, x2, (0, 2))
        s1 = total_field.derivative(x1, x2, (0, 1))
        defect = np.abs(s2 + 1j * iface.zeta * s1) / (s * k * (k + abs(iface.zeta)))
    return float(np.max(defect))


def incoming_wave(params: MaterialParams, n: Director, omega: float, theta: float, s0: complex = 1.0) -> PlaneWave:
    """Admissible wave hitting the interface at incidence angle ``theta`` from the normal.

    The direction is ``(sin theta, -cos theta)``; ``k`` is the real root of
    the nematic dispersion relation for that direction.
    """
    if not 0.0 <= theta < math.pi / 2:
        raise ValueError("incidence angle must lie in [0, pi/2)")
    d = (math.sin(theta), -math.cos(theta))
    xi = n.angle_to(d)
    return PlaneWave(s0, real_wavenumber(params, omega, xi), d)


def snell_transmit(theta: float, n: float, nT: float) -> np.ndarray:
    """Transmitted direction ``(sin(theta) n/nT, sqrt(1 - sin^2(theta) n^2/nT^2))``.

    Past the critical angle the second component is returned as a positive
    imaginary number.
    """
    if not 0.0 <= theta < math.pi / 2:
        raise ValueError("incidence angle must lie in [0, pi/2)")
    d1 = math.sin(theta) * n / nT
    radicand = 1.0 - d1 * d1
    d2 = complex(math.sqrt(radicand)) if radicand >= 0.0 else 1j * math.sqrt(-radicand)
    return np.array([d1, d2], dtype=complex)


def critical_angle(n: float, nT: float) -> float:
    """``arcsin(nT / n)``; raises :class:`NoTotalInternalReflection` when ``nT > n``."""
    if n <= 0.0 or nT <= 0.0:
        raise ValueError("refractive indices must be positive")
    if nT > n:
        raise NoTotalInternalReflection(f"nT = {nT} > n = {n}: no total internal reflection")
    return math.asin(nT / n)


def tir_decay_parameter(theta: float, k: float, n: float, nT: float) -> float:
    """``alpha = k^2 |(nT/n)^2 - sin^2 theta|`` for ``theta >= theta_c``."""
    theta_c = critical_angle(n, nT)
    if theta < theta_c - 1e-12:
        raise ValueError(f"theta = {theta} is below the critical angle {theta_c}")
    return k * k * abs((nT / n) ** 2 - math.sin(theta) ** 2)


def tir_transmitted_wave(theta: float, k: float, n: float, nT: float) -> np.ndarray:
    """Wave-vector ``(k sin theta, -i sqrt(alpha))`` of the evanescent transmitted wave.

    The transmitted field ``exp(i kT.x)`` lives in ``x2 < 0`` and the sign of
    the imaginary component makes it decay away from the interface, by a
    factor ``1/e`` at depth ``1/sqrt(alpha)``.
    """
    alpha = tir_decay_parameter(theta, k, n, nT)
    return np.array([k * math.sin(theta), -1j * math.sqrt(alpha)], dtype=complex)
