"""Structured grids and the complex fields that live on them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

CARTESIAN = "cartesian"
POLAR = "polar-annulus"


class MeshingError(ValueError):
    """The grid is too coarse for the shortest propagating wavelength."""


@dataclass(frozen=True)
class CartesianGrid:
    """Uniform grid on ``[x0, x1] x [y0, y1]``.

    Node ``(i, j)`` sits at ``(x[i], y[j])`` and has flat index ``i * ny + j``.
    A periodic axis has no duplicated end node: its spacing is ``length / n``.
    """

    x0: float
    x1: float
    y0: float
    y1: float
    nx: int
    ny: int
    periodic_x: bool = False
    periodic_y: bool = False
    kind: str = field(default=CARTESIAN, init=False)

    def __post_init__(self):
        if not (self.x1 > self.x0 and self.y1 > self.y0):
            raise ValueError("empty domain")
        if min(self.nx, self.ny) < 3:
            raise ValueError("need at least 3 nodes per axis")

    @property
    def hx(self) -> float:
        return (self.x1 - self.x0) / (self.nx if self.periodic_x else self.nx - 1)

    @property
    def hy(self) -> float:
        return (self.y1 - self.y0) / (self.ny if self.periodic_y else self.ny - 1)

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.hx * np.arange(self.nx)

    @property
    def y(self) -> np.ndarray:
        return self.y0 + self.hy * np.arange(self.ny)

    @property
    def shape(self) -> tuple:
        return (self.nx, self.ny)

    @property
    def size(self) -> int:
        return self.nx * self.ny

    @property
    def spacing(self) -> tuple:
        return (self.hx, self.hy)

    @property
    def max_spacing(self) -> float:
        return max(self.hx, self.hy)

    def mesh(self) -> tuple:
        """Physical coordinates ``(X, Y)`` of every node, each of shape ``grid.shape``."""
        return np.meshgrid(self.x, self.y, indexing="ij")

    def edge_masks(self) -> dict:
        """Boolean node masks of the non-periodic edges; corners belong to the x-edges."""
        i, j = np.meshgrid(np.arange(self.nx), np.arange(self.ny), indexing="ij")
        masks = {}
        if not self.periodic_x:
            masks["left"] = i == 0
            masks["right"] = i == self.nx - 1
        x_edge = (i == 0) | (i == self.nx - 1) if not self.periodic_x else np.zeros_like(i, bool)
        if not self.periodic_y:
            masks["bottom"] = (j == 0) & ~x_edge
            masks["top"] = (j == self.ny - 1) & ~x_edge
        return {k: m.ravel() for k, m in masks.items()}

    def cell_area(self) -> float:
        return self.hx * self.hy

    @classmethod
    def square(cls, n: int, x0=0.0, x1=1.0, periodic: bool = False) -> "CartesianGrid":
        return cls(x0, x1, x0, x1, n, n, periodic, periodic)


@dataclass(frozen=True)
class PolarGrid:
    """Annulus ``r0 <= r <= r1`` with ``nr`` radial nodes and ``ntheta`` periodic angular nodes.

    Node ``(i, j)`` sits at radius ``r[i]`` and angle ``theta[j] = 2 pi j / ntheta``
    with flat index ``i * ntheta + j``.
    """

    r0: float
    r1: float
    nr: int
    ntheta: int
    kind: str = field(default=POLAR, init=False)

    def __post_init__(self):
        if not (self.r1 > self.r0 > 0.0):
            raise ValueError("need 0 < r0 < r1")
        if self.nr < 3 or self.ntheta < 4:
            raise ValueError("grid too small")

    @property
    def hr(self) -> float:
        return (self.r1 - self.r0) / (self.nr - 1)

    @property
    def htheta(self) -> float:
        return 2.0 * math.pi / self.ntheta

    @property
    def r(self) -> np.ndarray:
        return self.r0 + self.hr * np.arange(self.nr)

    @property
    def theta(self) -> np.ndarray:
        return self.htheta * np.arange(self.ntheta)

    @property
    def shape(self) -> tuple:
        return (self.nr, self.ntheta)

    @property
    def size(self) -> int:
        return self.nr * self.ntheta

    @property
    def spacing(self) -> tuple:
        return (self.hr, self.htheta)

    @property
    def max_spacing(self) -> float:
        """Largest physical node distance: the radial step or the outer arc step."""
        return max(self.hr, self.r1 * self.htheta)

    def polar_mesh(self) -> tuple:
        return np.meshgrid(self.r, self.theta, indexing="ij")

    def mesh(self) -> tuple:
        rr, tt = self.polar_mesh()
        return rr * np.cos(tt), rr * np.sin(tt)

    def edge_masks(self) -> dict:
        i = np.repeat(np.arange(self.nr), self.ntheta)
        return {"inner": i == 0, "outer": i == self.nr - 1}

    def cell_area(self) -> np.ndarray:
        """Area weight ``r hr htheta`` per node."""
        rr, _ = self.polar_mesh()
        return rr * self.hr * self.htheta

    @classmethod
    def for_wavelength(cls, r0: float, r1: float, wavelength: float, ppw: float = 16.0) -> "PolarGrid":
        """Annulus with at most ``wavelength / ppw`` between neighbouring nodes.

        ``ntheta`` is a multiple of 4 so that the coordinate axes pass through nodes.
        """
        h = wavelength / ppw
        nr = int(math.ceil((r1 - r0) / h)) + 1
        nt = int(math.ceil(2.0 * math.pi * r1 / h))
        nt = 4 * int(math.ceil(nt / 4))
        return cls(r0, r1, nr, nt)


def check_resolution(grid, k_max: float, ppw: float = 8.0) -> None:
    """Raise :class:`MeshingError` if fewer than ``ppw`` nodes cover the wavelength ``2 pi / k_max``."""
    if k_max <= 0.0:
        return
    wavelength = 2.0 * math.pi / k_max
    if grid.max_spacing > wavelength / ppw * (1.0 + 1e-12):
        raise MeshingError(
            f"grid spacing {grid.max_spacing:.4g} exceeds wavelength/{ppw:g} = {wavelength / ppw:.4g}"
        )


SCALAR_S = "S"
AUXILIARY_V = "v"


@dataclass(frozen=True)
class ComplexField:
    """Complex samples of ``S`` or ``v`` at the nodes of a grid."""

    grid: object
    values: np.ndarray
    role: str = SCALAR_S

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex).reshape(self.grid.shape)
        object.__setattr__(self, "values", vals)

    def coordinates(self) -> tuple:
        return self.grid.mesh()

    def l2_norm(self, mask=None) -> float:
        """Discrete L2 norm with the grid's area weights, optionally over a node mask."""
        w = np.broadcast_to(self.grid.cell_area(), self.grid.shape)
        a = np.abs(self.values) ** 2 * w
        if mask is not None:
            a = a[mask]
        return float(math.sqrt(np.sum(a)))

    @property
    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.values)))
