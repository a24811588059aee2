"""Time-harmonic and transient acoustics of Korteweg and nematic Korteweg fluids."""

from .medium import Director, MaterialParams, NondimGroups, tau1, tau2

__all__ = ["Director", "MaterialParams", "NondimGroups", "tau1", "tau2"]
__version__ = "0.1.0"
