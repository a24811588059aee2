"""Finite-difference assembly of the mixed (S, v) system.

The fourth-order equation

    -(w^2 + i w sigma) S - c0^2 Lap S + Lap v = f,
    v - beta1 Lap S - beta2 D_nn S = 0,

with ``beta1 = rho0^2 u1``, ``beta2 = rho0^2 u2`` and
``D_nn S = div((n n) grad S) = n.H(S).n`` is discretized with second-order
centred stencils.  Boundary nodes carry boundary-condition rows instead of
the two equations above.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.sparse as sp

from ..dispersion import real_wavenumber
from ..medium import Director, MaterialParams
from .grid import CARTESIAN, check_resolution

SOUND_SOFT = "sound_soft"
SOUND_HARD = "sound_hard"
IMPEDANCE = "impedance"
PERIODIC = "periodic"


# -- one-dimensional stencils -------------------------------------------------


def first_derivative(n: int, h: float, periodic: bool) -> sp.csr_matrix:
    """Centred ``(-1, 0, 1) / 2h``; one-sided second order at non-periodic ends."""
    m = sp.diags([-np.ones(n - 1), np.ones(n - 1)], [-1, 1], shape=(n, n), format="lil")
    if periodic:
        m[0, n - 1] = -1.0
        m[n - 1, 0] = 1.0
    else:
        m[0, :3] = [-3.0, 4.0, -1.0]
        m[n - 1, n - 3 :] = [1.0, -4.0, 3.0]
    return (m / (2.0 * h)).tocsr()


def second_derivative(n: int, h: float, periodic: bool) -> sp.csr_matrix:
    """Centred ``(1, -2, 1) / h^2``; end rows of a non-periodic axis are left empty."""
    m = sp.diags([np.ones(n - 1), -2.0 * np.ones(n), np.ones(n - 1)], [-1, 0, 1], shape=(n, n), format="lil")
    if periodic:
        m[0, n - 1] = 1.0
        m[n - 1, 0] = 1.0
    else:
        m[0, :] = 0.0
        m[n - 1, :] = 0.0
    return (m / (h * h)).tocsr()


# -- grid operators -----------------------------------------------------------


@dataclass(frozen=True)
class GridOperators:
    """Sparse Cartesian Hessian components on a grid and operators built from them."""

    grid: object
    dxx: sp.csr_matrix
    dxy: sp.csr_matrix
    dyy: sp.csr_matrix
    lap: sp.csr_matrix

    def dnn(self, n: Director) -> sp.csr_matrix:
        """``n.H n`` for a constant director; identical for ``n`` and ``-n``."""
        return (n.n1 * n.n1) * self.dxx + (2.0 * n.n1 * n.n2) * self.dxy + (n.n2 * n.n2) * self.dyy


def grid_operators(grid) -> GridOperators:
    if grid.kind == CARTESIAN:
        dx = first_derivative(grid.nx, grid.hx, grid.periodic_x)
        dy = first_derivative(grid.ny, grid.hy, grid.periodic_y)
        dxx1 = second_derivative(grid.nx, grid.hx, grid.periodic_x)
        dyy1 = second_derivative(grid.ny, grid.hy, grid.periodic_y)
        ix, iy = sp.identity(grid.nx), sp.identity(grid.ny)
        dxx = sp.kron(dxx1, iy, format="csr")
        dyy = sp.kron(ix, dyy1, format="csr")
        dxy = sp.kron(dx, dy, format="csr")
        return GridOperators(grid, dxx, dxy, dyy, (dxx + dyy).tocsr())
    # polar annulus: derivatives in (r, theta), rotated into the Cartesian frame
    dr1 = first_derivative(grid.nr, grid.hr, False)
    drr1 = second_derivative(grid.nr, grid.hr, False)
    dt1 = first_derivative(grid.ntheta, grid.htheta, True)
    dtt1 = second_derivative(grid.ntheta, grid.htheta, True)
    ir, it = sp.identity(grid.nr), sp.identity(grid.ntheta)
    d_r = sp.kron(dr1, it, format="csr")
    d_rr = sp.kron(drr1, it, format="csr")
    d_t = sp.kron(ir, dt1, format="csr")
    d_tt = sp.kron(ir, dtt1, format="csr")
    d_rt = sp.kron(dr1, dt1, format="csr")
    rr, tt = grid.polar_mesh()
    inv_r = sp.diags((1.0 / rr).ravel())
    inv_r2 = sp.diags((1.0 / rr**2).ravel())
    a = d_rr
    b = inv_r @ d_rt - inv_r2 @ d_t
    c = inv_r @ d_r + inv_r2 @ d_tt
    cos, sin = np.cos(tt).ravel(), np.sin(tt).ravel()
    cc, ss, cs = sp.diags(cos * cos), sp.diags(sin * sin), sp.diags(cos * sin)
    c2s2 = sp.diags(cos * cos - sin * sin)
    dxx = (cc @ a - 2.0 * cs @ b + ss @ c).tocsr()
    dyy = (ss @ a + 2.0 * cs @ b + cc @ c).tocsr()
    dxy = (cs @ (a - c) + c2s2 @ b).tocsr()
    return GridOperators(grid, dxx, dxy, dyy, (a + c).tocsr())


def normal_derivative_rows(grid, edge: str) -> sp.csr_matrix:
    """Outward normal derivative with one-sided second-order stencils, as an ``N x N`` matrix."""
    if grid.kind == CARTESIAN:
        if edge in ("left", "right"):
            d = sp.kron(first_derivative(grid.nx, grid.hx, False), sp.identity(grid.ny), format="csr")
            return -d if edge == "left" else d
        d = sp.kron(sp.identity(grid.nx), first_derivative(grid.ny, grid.hy, False), format="csr")
        return -d if edge == "bottom" else d
    d = sp.kron(first_derivative(grid.nr, grid.hr, False), sp.identity(grid.ntheta), format="csr")
    return -d if edge == "inner" else d


# -- absorbing layer ----------------------------------------------------------


@dataclass(frozen=True)
class AbsorbingLayerSpec:
    """Adiabatic absorber ``sigma = sigma_max (depth / width)^ramp_degree``.

    On a polar annulus the layer hugs the outer rim.  On a Cartesian grid it
    lines the edges named in ``edges`` (default: every non-periodic edge).
    """

    width: float
    sigma_max: float
    ramp_degree: int = 3
    edges: tuple | None = None

    def __post_init__(self):
        if self.width <= 0.0 or self.sigma_max < 0.0 or self.ramp_degree < 1:
            raise ValueError("invalid absorbing layer")

    def profile(self, depth):
        d = np.clip(np.asarray(depth, dtype=float) / self.width, 0.0, None)
        return self.sigma_max * d**self.ramp_degree

    def sigma(self, grid) -> np.ndarray:
        if grid.kind == CARTESIAN:
            x, y = grid.mesh()
            dist = {"left": x - grid.x0, "right": grid.x1 - x, "bottom": y - grid.y0, "top": grid.y1 - y}
            edges = self.edges
            if edges is None:
                edges = [e for e, per in (("left", grid.periodic_x), ("right", grid.periodic_x),
                                          ("bottom", grid.periodic_y), ("top", grid.periodic_y)) if not per]
            s = np.zeros(grid.shape)
            for e in edges:
                s += self.profile(self.width - dist[e])
            return s
        rr, _ = grid.polar_mesh()
        return self.profile(rr - (grid.r1 - self.width))


# -- boundary conditions ------------------------------------------------------


@dataclass(frozen=True)
class BoundaryCondition:
    """Conditions on ``(S, v)`` along one edge.

    ``sound_soft``: ``S = g``, ``v = g2``.  ``sound_hard``: ``d_nu S = g``,
    ``d_nu v = g2``.  ``impedance``: ``d_nu S - i zeta S = g`` and the same
    for ``v``.  Data are constants or callables of the node coordinates
    ``(x, y)``; ``None`` means homogeneous.
    """

    kind: str = SOUND_SOFT
    zeta: complex = 0.0
    g: object = None
    g2: object = None

    def __post_init__(self):
        if self.kind not in (SOUND_SOFT, SOUND_HARD, IMPEDANCE):
            raise ValueError(f"unsupported boundary condition {self.kind!r}")
        if not cmath.isfinite(self.zeta):
            raise ValueError("impedance zeta must be finite")


def _evaluate(data, x, y):
    if data is None:
        return np.zeros(x.shape, dtype=complex)
    if callable(data):
        return np.asarray(data(x, y), dtype=complex) * np.ones(x.shape)
    return np.asarray(data, dtype=complex) * np.ones(x.shape)


# -- the mixed system ---------------------------------------------------------


@dataclass(frozen=True)
class MixedSystem:
    """Stacked ``(S, v)`` system; ``matrix``/``rhs`` are complete once boundary rows are applied."""

    grid: object
    params: MaterialParams
    omega: float
    n: Director
    operators: GridOperators
    interior: np.ndarray
    interior_matrix: sp.csr_matrix
    interior_rhs: np.ndarray
    sigma: np.ndarray
    bc: dict = field(default_factory=dict)
    matrix: sp.csr_matrix | None = None
    rhs: np.ndarray | None = None

    @property
    def size(self) -> int:
        return self.grid.size

    @property
    def boundary_applied(self) -> bool:
        return self.matrix is not None


def _block_system(ops: GridOperators, diag_term: np.ndarray, c2: float, w_op) -> sp.csr_matrix:
    n = ops.grid.size
    eye = sp.identity(n, format="csr")
    a11 = sp.diags(diag_term.ravel()) - c2 * ops.lap
    return sp.bmat([[a11, ops.lap], [-w_op, eye]], format="csr")


def _interior_mask(grid) -> np.ndarray:
    masks = grid.edge_masks()
    bnd = np.zeros(grid.size, dtype=bool)
    for m in masks.values():
        bnd |= m
    return ~bnd


def _mask_rows(a: sp.csr_matrix, keep: np.ndarray) -> sp.csr_matrix:
    return (sp.diags(keep.astype(float)) @ a).tocsr()


def assemble(
    params: MaterialParams,
    omega: float,
    n: Director,
    grid,
    bc=None,
    layer: AbsorbingLayerSpec | None = None,
    source=None,
    incident=None,
    check_mesh: bool = True,
) -> MixedSystem:
    """Assemble the mixed system and, if ``bc`` is given, its boundary rows.

    ``source`` is the volume term ``f`` (array on the grid or callable of
    ``(x, y)``).  ``incident`` is forwarded to :func:`apply_bc`.
    """
    if check_mesh:
        check_resolution(grid, real_wavenumber(params, omega, np.pi / 2) if omega > 0 else 0.0)
    ops = grid_operators(grid)
    sigma = layer.sigma(grid) if layer is not None else np.zeros(grid.shape)
    diag = -(omega**2 + 1j * omega * sigma)
    w_op = params.beta1 * ops.lap + params.beta2 * ops.dnn(n)
    full = _block_system(ops, diag, params.c0**2, w_op)
    x, y = grid.mesh()
    f = _evaluate(source, x, y).ravel()
    interior = _interior_mask(grid)
    keep = np.concatenate([interior, interior])
    rhs = np.concatenate([f, np.zeros(grid.size, dtype=complex)]) * keep
    system = MixedSystem(grid, params, omega, n, ops, interior, _mask_rows(full, keep), rhs, sigma)
    if bc is not None:
        system = apply_bc(system, bc, incident)
    return system


def _incident_data(system: MixedSystem, incident):
    """Traces of ``-S_inc`` and ``-v_inc`` plus their gradients for a plane wave."""
    p, n = system.params, system.n
    d = np.asarray(incident.d, dtype=float)
    k = incident.k

    def s(x, y):
        return -incident(x, y)

    def grad(x, y):
        v = s(x, y)
        return 1j * k * d[0] * v, 1j * k * d[1] * v

    wfac = -(k * k) * (p.beta1 + p.beta2 * (d @ n.vector) ** 2)
    return s, grad, wfac


def apply_bc(system: MixedSystem, bc, incident=None, incident_edges=None) -> MixedSystem:
    """Replace the rows of boundary nodes with boundary-condition rows.

    ``bc`` is a :class:`BoundaryCondition` for every edge or a mapping from
    edge name to condition.  With an ``incident`` plane wave the data become
    those of the scattered field: the total field obeys the homogeneous
    condition, e.g. ``S = -S_inc`` and ``v = -(beta1 Lap + beta2 D_nn) S_inc``
    for the sound-soft case.  ``incident_edges`` restricts that data to some
    edges (default: all).
    """
    grid = system.grid
    masks = grid.edge_masks()
    if isinstance(bc, BoundaryCondition):
        bc = {e: bc for e in masks}
    missing = set(masks) - set(bc)
    extra = set(bc) - set(masks)
    if missing or extra:
        raise ValueError(f"boundary conditions must cover exactly the edges {sorted(masks)}")
    n_nodes = grid.size
    x, y = (c.ravel() for c in grid.mesh())
    rows = []
    rhs = np.zeros(2 * n_nodes, dtype=complex)
    inc = _incident_data(system, incident) if incident is not None else None
    for edge, cond in bc.items():
        m = masks[edge].astype(float)
        sel = sp.diags(m)
        idx = np.nonzero(masks[edge])[0]
        xe, ye = x[idx], y[idx]
        g = _evaluate(cond.g, xe, ye)
        g2 = _evaluate(cond.g2, xe, ye)
        if cond.kind == SOUND_SOFT:
            op = sp.identity(n_nodes, format="csr")
        else:
            op = normal_derivative_rows(grid, edge)
            if cond.kind == IMPEDANCE:
                op = op - 1j * cond.zeta * sp.identity(n_nodes, format="csr")
        if inc is not None and (incident_edges is None or edge in incident_edges):
            s_fun, grad_fun, wfac = inc
            sv = s_fun(xe, ye)
            if cond.kind == SOUND_SOFT:
                dat = sv
            else:
                gx, gy = grad_fun(xe, ye)
                nx_, ny_ = _outward_normal(grid, edge, xe, ye)
                dat = gx * nx_ + gy * ny_
                if cond.kind == IMPEDANCE:
                    dat = dat - 1j * cond.zeta * sv
            g = g + dat
            g2 = g2 + wfac * dat
        block = sel @ op
        zero = sp.csr_matrix((n_nodes, n_nodes))
        rows.append(sp.bmat([[block, zero], [zero, block]], format="csr"))
        rhs[idx] += g
        rhs[n_nodes + idx] += g2
    matrix = system.interior_matrix
    for r in rows:
        matrix = matrix + r
    matrix = matrix.tocsr()
    return replace(system, bc=dict(bc), matrix=matrix, rhs=system.interior_rhs + rhs)


def _outward_normal(grid, edge, x, y):
    if grid.kind == CARTESIAN:
        return {"left": (-1.0, 0.0), "right": (1.0, 0.0), "bottom": (0.0, -1.0), "top": (0.0, 1.0)}[edge]
    r = np.hypot(x, y)
    sign = -1.0 if edge == "inner" else 1.0
    return sign * x / r, sign * y / r


def assemble_primal(system: MixedSystem, g=None, g2=None):
    """Single-field form of a sound-soft problem, used to cross-check the mixed assembly.

    ``v`` is eliminated: at interior nodes it is ``(beta1 Lap + beta2 D_nn) S``,
    at boundary nodes the sound-soft condition fixes it to ``g2``, i.e.
    ``beta1 (Lap S + (u2/u1) n.H S n) = g2`` in the original variables.
    Returns the ``N x N`` matrix and right-hand side.
    """
    grid, p, ops = system.grid, system.params, system.operators
    x, y = grid.mesh()
    g = _evaluate(g, x, y).ravel()
    g2 = _evaluate(g2, x, y).ravel()
    interior = system.interior.astype(float)
    w_op = p.beta1 * ops.lap + p.beta2 * ops.dnn(system.n)
    diag = -(system.omega**2 + 1j * system.omega * system.sigma).ravel()
    k_op = sp.diags(diag) - p.c0**2 * ops.lap + ops.lap @ sp.diags(interior) @ w_op
    f = system.interior_rhs[: grid.size]
    rhs = f - ops.lap @ ((1.0 - interior) * g2)
    matrix = sp.diags(interior) @ k_op + sp.diags(1.0 - interior)
    rhs = interior * rhs + (1.0 - interior) * g
    return matrix.tocsr(), rhs


def kirchhoff_love_system(mu: float, grid, bc, source=None, scale: float = 1.0) -> MixedSystem:
    """Mixed form of ``Lap^2 S - mu S = f`` with ``v = Lap S``.

    Boundary data for ``v`` in ``bc`` are divided by ``scale`` so that a
    problem posed for ``v = beta1 Lap S`` can be reused with ``scale = beta1``.
    """
    ops = grid_operators(grid)
    diag = -mu * np.ones(grid.shape)
    full = _block_system(ops, diag, 0.0, ops.lap)
    x, y = grid.mesh()
    f = _evaluate(source, x, y).ravel()
    interior = _interior_mask(grid)
    keep = np.concatenate([interior, interior])
    rhs = np.concatenate([f, np.zeros(grid.size, dtype=complex)]) * keep
    if isinstance(bc, BoundaryCondition):
        bc = {e: bc for e in grid.edge_masks()}
    bc = {e: _scaled(c, scale) for e, c in bc.items()}
    params = MaterialParams(c0=1.0, rho0=1.0, u1=1.0, u2=0.0)
    system = MixedSystem(grid, params, 0.0, Director(1.0, 0.0), ops, interior, _mask_rows(full, keep), rhs, np.zeros(grid.shape))
    return apply_bc(system, bc)


def _scaled(cond: BoundaryCondition, scale: float) -> BoundaryCondition:
    if cond.g2 is None or scale == 1.0:
        return cond
    g2 = cond.g2
    new = (lambda x, y: g2(x, y) / scale) if callable(g2) else g2 / scale
    return replace(cond, g2=new)
