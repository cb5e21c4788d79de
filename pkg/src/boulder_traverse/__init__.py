"""Quasi-static simulator and planner for a rigidly connected pair of
peg-legged robots traversing lattices of semispherical boulders.

The model resolves the pair's potential energy by pitch-optimal,
non-penetrating leg placement, relaxes planar states to jamming states by
energy descent, and classifies traversability per connection length from
the dot product of the two half-stride motion directions.
"""

from .terrain import BoulderField, TerrainSegmentList, FootprintBoundary
from .robot import RobotParams, PairConfig, PlanarState, GaitGroup, LegId
from .energy import ResolvedPose, EnergyLandscape1D, resolve_pose, landscape_1d, energy_gradient
from .quasistatic import (
    JammingState,
    StrideOutcome,
    Trajectory,
    Classification,
    relax,
    stride_map,
    find_jamming_states,
    rollout,
    EmptyResult,
    MaxIterations,
)
from .planner import (
    TraversabilityReport,
    ConnectionSchedule,
    sweep_connection_lengths,
    select_connection_length,
    plan_segments,
    NoFeasibleC,
    InvalidRange,
)

__version__ = "0.1.0"
