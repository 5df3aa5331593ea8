"""Four-qubit SL-null-cone states and convex roofs of the square-root
threetangle on rank-2 three-qubit density matrices."""

from . import catalog, invariants, nullcone, roofkit, statekit
from .errors import TangleRoofError
from .invariants import concurrence, sl_invariants_4q, threetangle
from .roofkit import brute_force_roof, convex_roof_rank2
from .statekit import (
    DensityMatrix,
    PureState,
    RankTwoRange,
    load_density_matrix,
    load_state,
    partial_trace,
    rank2_range,
)

__all__ = [
    "DensityMatrix",
    "PureState",
    "RankTwoRange",
    "TangleRoofError",
    "brute_force_roof",
    "catalog",
    "concurrence",
    "convex_roof_rank2",
    "invariants",
    "load_density_matrix",
    "load_state",
    "nullcone",
    "partial_trace",
    "rank2_range",
    "roofkit",
    "sl_invariants_4q",
    "statekit",
    "threetangle",
]

__version__ = "0.1.0"
