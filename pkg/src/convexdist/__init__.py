"""Convex distances for counting measures and Monte Carlo checks of their
large deviation inequalities."""

__version__ = "0.1.0"

from .distances import (
    DistanceResult,
    check_projection_compatibility,
    convergence_gap_bound,
    d_T_binomial,
    d_T_classical,
    d_T_pi,
    difference_vector,
)
from .events import (
    CountLower,
    CountUpper,
    Explicit,
    HatEventSet,
    HatPreimage,
    Representative,
    event_contains,
    representative_reduction,
)
from .measures import (
    DELTA,
    AlphabetRegion,
    Box,
    CountingMeasure,
    FiniteAlphabet,
    HatVector,
    UnitCube,
    WeightFunction,
    count,
    integrate,
    multiset_difference,
    project_hat,
    symmetrize,
    weighted_norm_sq,
)
from .solver import min_norm_point, sphere_grid_oracle
