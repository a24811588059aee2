"""Explicit time stepping of the linearized (nematic) Korteweg wave equation.

The condensation ``s`` obeys

    d_tt s = -K s,   K = -c0^2 Lap + Lap (beta1 Lap + beta2 D_nn),

with the same centred stencils as the frequency-domain solver.  Leapfrog
(central differences in time) advances it on a Cartesian grid that is
periodic or has sound-soft walls (``s = 0`` and ``v = 0`` on the boundary).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
import scipy.sparse as sp

from .dispersion import phase_speed, real_wavenumber
from .medium import Director, MaterialParams
from .solver.assembly import grid_operators
from .solver.grid import CartesianGrid

SAFETY = 0.9
FRONT_THRESHOLD = 0.1


class StabilityError(ValueError):
    """The time step exceeds the leapfrog stability limit."""


@dataclass(frozen=True)
class PulseState:
    """Two consecutive time levels ``s^{m-1}``, ``s^m`` of the condensation.

    ``s`` is at time ``t``; ``s_prev`` at ``t - dt``.  Arrays have the grid's shape.
    """

    s_prev: np.ndarray
    s: np.ndarray
    t: float
    dt: float
    step: int = 0


def wave_operator(params: MaterialParams, n: Director, grid: CartesianGrid) -> sp.csr_matrix:
    """Sparse ``K``; on a non-periodic grid boundary nodes are held at ``s = v = 0``."""
    if grid.kind != "cartesian":
        raise ValueError("time stepping needs a Cartesian grid")
    ops = grid_operators(grid)
    w_op = params.beta1 * ops.lap + params.beta2 * ops.dnn(n)
    masks = grid.edge_masks()
    if not masks:
        return (-(params.c0**2) * ops.lap + ops.lap @ w_op).tocsr()
    bnd = np.zeros(grid.size, dtype=bool)
    for m in masks.values():
        bnd |= m
    keep = sp.diags((~bnd).astype(float))
    k = -(params.c0**2) * ops.lap + ops.lap @ keep @ w_op
    return (keep @ k @ keep).tocsr()


def dt_max(params: MaterialParams, grid: CartesianGrid) -> float:
    """Conservative leapfrog limit ``2 / sqrt(lambda_max)``.

    ``lambda_max = c0^2 (8/h^2) + rho0^2 (u1 + u2)(64/h^4)`` bounds the spectrum
    of ``K`` with ``h`` the smaller spacing.
    """
    h = min(grid.hx, grid.hy)
    lam = params.c0**2 * 8.0 / h**2 + (params.beta1 + params.beta2) * 64.0 / h**4
    return 2.0 / math.sqrt(lam)


def default_dt(params: MaterialParams, grid: CartesianGrid) -> float:
    return SAFETY * dt_max(params, grid)


def _check_dt(params, grid, dt, allow_unstable):
    if not dt > 0.0:
        raise ValueError("dt must be positive")
    limit = dt_max(params, grid)
    if dt > limit * (1.0 + 1e-12) and not allow_unstable:
        raise StabilityError(f"dt = {dt:.4g} exceeds the stability limit {limit:.4g}")


def initial_state(s0, dt: float, operator, velocity=None) -> PulseState:
    """State at ``t = 0`` from ``s(0)`` and ``d_t s(0)`` by a second-order Taylor step backwards."""
    s0 = np.asarray(s0, dtype=float)
    v0 = np.zeros_like(s0) if velocity is None else np.asarray(velocity, dtype=float)
    ks = (operator @ s0.ravel()).reshape(s0.shape)
    return PulseState(s0 - dt * v0 - 0.5 * dt * dt * ks, s0.copy(), 0.0, dt, 0)


def step(state: PulseState, params: MaterialParams, n: Director, grid: CartesianGrid, dt: float | None = None,
         operator=None, allow_unstable: bool = False) -> PulseState:
    """One leapfrog step ``s^{m+1} = 2 s^m - s^{m-1} - dt^2 K s^m``."""
    dt = state.dt if dt is None else dt
    if dt != state.dt:
        raise ValueError("dt must match the state's time step")
    _check_dt(params, grid, dt, allow_unstable)
    k = wave_operator(params, n, grid) if operator is None else operator
    ks = (k @ state.s.ravel()).reshape(state.s.shape)
    s_next = 2.0 * state.s - state.s_prev - dt * dt * ks
    return PulseState(state.s, s_next, state.t + dt, dt, state.step + 1)


class Stepper:
    """Leapfrog integrator bound to a medium, director and grid."""

    def __init__(self, params: MaterialParams, n: Director, grid: CartesianGrid, dt: float | None = None,
                 allow_unstable: bool = False):
        self.params, self.n, self.grid = params, n, grid
        self.dt = default_dt(params, grid) if dt is None else dt
        _check_dt(params, grid, self.dt, allow_unstable)
        self.operator = wave_operator(params, n, grid)

    def start(self, s0, velocity=None) -> PulseState:
        return initial_state(s0, self.dt, self.operator, velocity)

    def advance(self, state: PulseState, steps: int) -> PulseState:
        k, dt2 = self.operator, self.dt * self.dt
        prev, cur = state.s_prev.ravel(), state.s.ravel()
        for _ in range(steps):
            prev, cur = cur, 2.0 * cur - prev - dt2 * (k @ cur)
        shape = state.s.shape
        return PulseState(prev.reshape(shape), cur.reshape(shape), state.t + steps * self.dt, self.dt,
                          state.step + steps)

    def energy(self, state: PulseState) -> float:
        return _energy(state, self.operator, self.grid)


def _energy(state: PulseState, operator, grid) -> float:
    vel = (state.s - state.s_prev) / state.dt
    pot = float(state.s.ravel() @ (operator @ state.s_prev.ravel()))
    return 0.5 * (float(np.sum(vel * vel)) + pot) * grid.hx * grid.hy


def discrete_energy(state: PulseState, params: MaterialParams, n: Director, grid: CartesianGrid) -> float:
    """Energy conserved exactly by leapfrog for symmetric ``K``.

    ``E = 1/2 |(s^m - s^{m-1})/dt|^2 h^2 + 1/2 <s^m, K s^{m-1}> h^2``, the
    staggered form of ``1/2 (d_t s)^2 + 1/2 c0^2 |grad s|^2 + 1/2 beta1 (Lap s)^2
    + 1/2 beta2 (Lap s)(n.H(s).n)`` summed over the grid.
    """
    return _energy(state, wave_operator(params, n, grid), grid)


def energy_growth(energies, tol: float = 1e-3) -> bool:
    """Flag runs whose energy left the ``tol`` band around its initial value (divergence)."""
    e = np.asarray(energies, dtype=float)
    if not np.all(np.isfinite(e)):
        return True
    return bool(np.max(np.abs(e - e[0])) > tol * abs(e[0]))


# -- Gaussian pulse experiment ------------------------------------------------


@dataclass(frozen=True)
class GaussianPulse:
    """``amplitude * exp(-|x - center|^2 / (2 width^2))`` released from rest."""

    center: tuple = (0.0, 0.0)
    width: float = 0.1
    amplitude: float = 1.0

    def __call__(self, x, y):
        r2 = (x - self.center[0]) ** 2 + (y - self.center[1]) ** 2
        return self.amplitude * np.exp(-r2 / (2.0 * self.width**2))


@dataclass(frozen=True)
class Snapshot:
    t: float
    s: np.ndarray


def run_pulse(params: MaterialParams, n: Director, grid: CartesianGrid, gaussian: GaussianPulse, t_end: float,
              times=None, dt: float | None = None) -> list:
    """Snapshots of a Gaussian pulse at ``times`` (default: ``t = 0`` and ``t_end``).

    Each requested time is rounded to the nearest multiple of ``dt``; the
    snapshot carries the time actually reached.
    """
    if gaussian.width < 4.0 * max(grid.hx, grid.hy) * (1.0 - 1e-12):
        raise ValueError("pulse width must span at least 4 grid spacings")
    stepper = Stepper(params, n, grid, dt)
    times = [0.0, t_end] if times is None else sorted(times)
    if times[-1] > t_end * (1.0 + 1e-12) or times[0] < 0.0:
        raise ValueError("snapshot times must lie in [0, t_end]")
    x, y = grid.mesh()
    state = stepper.start(gaussian(x, y))
    out = []
    for t in times:
        target = int(round(t / stepper.dt))
        state = stepper.advance(state, target - state.step)
        out.append(Snapshot(state.t, state.s.copy()))
    return out


def ray_profile(s: np.ndarray, grid: CartesianGrid, center, direction, radii) -> np.ndarray:
    """Bilinear samples of ``s`` along the ray ``center + r * direction``."""
    d = np.asarray(direction, dtype=float)
    d = d / np.hypot(*d)
    px = center[0] + np.asarray(radii) * d[0]
    py = center[1] + np.asarray(radii) * d[1]
    fx = (px - grid.x0) / grid.hx
    fy = (py - grid.y0) / grid.hy
    i = np.clip(np.floor(fx).astype(int), 0, grid.nx - 2)
    j = np.clip(np.floor(fy).astype(int), 0, grid.ny - 2)
    a, b = fx - i, fy - j
    return ((1 - a) * (1 - b) * s[i, j] + a * (1 - b) * s[i + 1, j]
            + (1 - a) * b * s[i, j + 1] + a * b * s[i + 1, j + 1])


def front_radius(s: np.ndarray, grid: CartesianGrid, center, direction, r_max: float,
                 threshold: float = FRONT_THRESHOLD, samples: int = 2000) -> float:
    """Outermost radius along a ray where ``|s|`` reaches ``threshold`` times its peak on that ray."""
    r = np.linspace(0.0, r_max, samples)
    prof = np.abs(ray_profile(s, grid, center, direction, r))
    level = threshold * prof.max()
    idx = np.nonzero(prof >= level)[0][-1]
    if idx == samples - 1:
        return float(r[-1])
    # linear interpolation of the crossing between idx and idx + 1
    p0, p1 = prof[idx], prof[idx + 1]
    return float(r[idx] + (p0 - level) / (p0 - p1) * (r[idx + 1] - r[idx]))


def front_speeds(snapshots, grid: CartesianGrid, center, directions, r_max: float,
                 threshold: float = FRONT_THRESHOLD) -> np.ndarray:
    """Front speed along each direction from the first and last snapshot."""
    a, b = snapshots[0], snapshots[-1]
    ra = np.array([front_radius(a.s, grid, center, d, r_max, threshold) for d in directions])
    rb = np.array([front_radius(b.s, grid, center, d, r_max, threshold) for d in directions])
    return (rb - ra) / (b.t - a.t)


# -- phase speed from a single mode -------------------------------------------


@dataclass(frozen=True)
class PhaseSpeedMeasurement:
    speed: float
    predicted: float
    omega: float
    k: float

    @property
    def relative_error(self) -> float:
        return abs(self.speed - self.predicted) / self.predicted


def strip_grid(k: float, points_per_wavelength: int = 64, ny: int = 3) -> CartesianGrid:
    """Periodic strip one wavelength ``2 pi / k`` long (x) and ``ny`` cells wide."""
    length = 2.0 * math.pi / k
    h = length / points_per_wavelength
    return CartesianGrid(0.0, length, 0.0, ny * h, points_per_wavelength, ny, True, True)


def zero_crossings(t, signal) -> np.ndarray:
    """Linearly interpolated times at which ``signal`` changes sign."""
    t = np.asarray(t, dtype=float)
    f = np.asarray(signal, dtype=float)
    idx = np.nonzero(np.signbit(f[:-1]) != np.signbit(f[1:]))[0]
    return t[idx] + f[idx] / (f[idx] - f[idx + 1]) * (t[idx + 1] - t[idx])


def measure_phase_speed(params: MaterialParams, n: Director, xi: float, omega_target: float,
                        grid: CartesianGrid | None = None, periods: int = 4) -> PhaseSpeedMeasurement:
    """Phase speed of the mode ``cos(k x)`` at angle ``xi`` to the director.

    The strip's x-axis is the propagation direction, so the director is
    rotated to the angle ``xi`` from it.  ``k`` is the dispersion-module
    wavenumber at ``omega_target``; the mode's temporal frequency is read off
    the zero crossings of ``s`` at the origin over ``periods`` periods.
    """
    k = real_wavenumber(params, omega_target, xi)
    grid = grid or strip_grid(k)
    n_strip = Director(math.cos(xi), math.sin(xi))
    stepper = Stepper(params, n_strip, grid)
    x, _ = grid.mesh()
    state = stepper.start(np.cos(k * x))
    t_total = periods * 2.0 * math.pi / omega_target
    steps = int(math.ceil(t_total / stepper.dt)) + 1
    trace = np.empty(steps + 1)
    trace[0] = state.s[0, 0]
    for m in range(1, steps + 1):
        state = stepper.advance(state, 1)
        trace[m] = state.s[0, 0]
    zc = zero_crossings(stepper.dt * np.arange(steps + 1), trace)
    if zc.size < 2:
        raise RuntimeError("mode did not oscillate within the measurement window")
    half_period = (zc[-1] - zc[0]) / (zc.size - 1)
    omega = math.pi / half_period
    return PhaseSpeedMeasurement(omega / k, phase_speed(params, omega_target, xi), omega, k)


def mirror_state(state: PulseState) -> PulseState:
    """Reflect both time levels across the x-axis of a grid symmetric about ``y = 0``."""
    def flip(a):
        return np.roll(a[:, ::-1], 1, axis=1)

    return replace(state, s_prev=flip(state.s_prev), s=flip(state.s))
