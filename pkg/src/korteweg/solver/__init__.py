"""Finite-difference solvers for the time-harmonic (nematic) Helmholtz-Korteweg equation."""

from .assembly import (
    IMPEDANCE,
    SOUND_HARD,
    SOUND_SOFT,
    AbsorbingLayerSpec,
    BoundaryCondition,
    GridOperators,
    MixedSystem,
    apply_bc,
    assemble,
    assemble_primal,
    grid_operators,
    kirchhoff_love_system,
)
from .bvp import (
    SolveError,
    SolveResult,
    axis_profile,
    default_layer,
    incident_plane_wave,
    sample_polar,
    scatter_bvp,
    sommerfeld_defect,
    solve,
    solve_sparse,
)
from .grid import CartesianGrid, ComplexField, MeshingError, PolarGrid, check_resolution

__all__ = [
    "IMPEDANCE",
    "SOUND_HARD",
    "SOUND_SOFT",
    "AbsorbingLayerSpec",
    "BoundaryCondition",
    "CartesianGrid",
    "ComplexField",
    "GridOperators",
    "MeshingError",
    "MixedSystem",
    "PolarGrid",
    "SolveError",
    "SolveResult",
    "apply_bc",
    "assemble",
    "assemble_primal",
    "axis_profile",
    "check_resolution",
    "default_layer",
    "grid_operators",
    "incident_plane_wave",
    "kirchhoff_love_system",
    "sample_polar",
    "scatter_bvp",
    "solve",
    "sommerfeld_defect",
    "solve_sparse",
]
