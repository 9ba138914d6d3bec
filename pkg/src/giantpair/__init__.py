"""Bound states in the continuum for two identical giant atoms in a 1D waveguide."""

from .model import (
    CouplingLayout,
    InitialAtomState,
    SystemConfig,
    Topology,
    coupling_positions,
)
from .selfenergy import BranchSign

__all__ = [
    "BranchSign",
    "CouplingLayout",
    "InitialAtomState",
    "SystemConfig",
    "Topology",
    "coupling_positions",
]
__version__ = "0.1.0"
