"""Connection-length sweeps and model-informed selection.

For each candidate connection length the planner finds the jamming states on
the target lattice and applies the stride map from every one of them; a
length is accepted only when every jamming state produces constructive
half-strides (positive direction dot product) with real displacement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .quasistatic import (
    Classification,
    EmptyResult,
    JammingState,
    StrideOutcome,
    find_jamming_states,
    stride_map,
)
from .robot import GaitGroup, PairConfig, RobotParams
from .settings import DEFAULT_SETTINGS, DescentSettings
from .terrain import BoulderField, TerrainSegmentList


class InvalidRange(Exception):
    """Malformed connection-length sweep range."""


class NoFeasibleC(Exception):
    """No connection length in range passes the traversability test."""

    def __init__(self, message: str, segment_index: Optional[int] = None):
        super().__init__(message)
        self.segment_index = segment_index


@dataclass(frozen=True)
class CRecord:
    """One sweep row: worst-case stride outcome over all jamming states."""

    connection_c: float
    connection_c_ubl: float
    dot_v1v2: float
    displacement_ubl: float
    classification: Classification
    jamming_count: int


@dataclass(frozen=True)
class TraversabilityReport:
    rows: Tuple[CRecord, ...]

    def row_for(self, c: float, tol: float = 1e-12) -> Optional[CRecord]:
        for row in self.rows:
            if abs(row.connection_c - c) <= tol:
                return row
        return None

    @property
    def traversing_rows(self) -> Tuple[CRecord, ...]:
        return tuple(
            r for r in self.rows if r.classification is Classification.TRAVERSING
        )


@dataclass(frozen=True)
class ScheduleEntry:
    segment_index: int
    spacing: float
    chosen_c: float
    report_excerpt: CRecord


@dataclass(frozen=True)
class ConnectionSchedule:
    entries: Tuple[ScheduleEntry, ...]

    def as_segment_map(self) -> List[Tuple[int, float]]:
        """(segment_index, connection_c) pairs for rollout replay."""
        return [(e.segment_index, e.chosen_c) for e in self.entries]


def _c_grid(c_min: float, c_max: float, c_step: float) -> List[float]:
    if not (0 < c_min < c_max) or c_step <= 0:
        raise InvalidRange(
            f"need 0 < c_min < c_max and c_step > 0, got [{c_min}, {c_max}] step {c_step}"
        )
    n = int(math.floor((c_max - c_min) / c_step + 1e-9)) + 1
    return [c_min + i * c_step for i in range(n)]


def evaluate_connection_length(
    field: BoulderField,
    params: RobotParams,
    c: float,
    stance: GaitGroup = GaitGroup.GROUP1,
    settings: Optional[DescentSettings] = None,
) -> Tuple[CRecord, List[Tuple[JammingState, StrideOutcome]]]:
    """Classify one connection length on a uniform lattice.

    The record carries the minimum dot product across jamming states and the
    displacement of the first one; the overall classification is Traversing
    only when every jamming state's stride is Traversing.
    """
    config = PairConfig(params=params, connection_c=c)
    try:
        jams = find_jamming_states(config, field, stance, settings=settings)
    except EmptyResult:
        return (
            CRecord(c, c / params.ubl, 0.0, 0.0, Classification.NO_MOTION, 0),
            [],
        )
    pairs = []
    for jam in jams:
        outcome, _ = stride_map(config, field, jam.pose.state, jam.stance, settings)
        pairs.append((jam, outcome))
    worst_dot = min(o.dot_v1v2 for _, o in pairs)
    disp_ubl = pairs[0][1].displacement_ubl
    if all(o.classification is Classification.TRAVERSING for _, o in pairs):
        cls = Classification.TRAVERSING
    elif all(o.classification is Classification.NO_MOTION for _, o in pairs):
        cls = Classification.NO_MOTION
    else:
        cls = Classification.STUCK
    return (
        CRecord(c, c / params.ubl, worst_dot, disp_ubl, cls, len(pairs)),
        pairs,
    )


def sweep_connection_lengths(
    field: BoulderField,
    params: RobotParams,
    c_min: float,
    c_max: float,
    c_step: float,
    settings: Optional[DescentSettings] = None,
) -> TraversabilityReport:
    """Evaluate every connection length on the grid, ascending."""
    rows = [
        evaluate_connection_length(field, params, c, settings=settings)[0]
        for c in _c_grid(c_min, c_max, c_step)
    ]
    return TraversabilityReport(rows=tuple(rows))


def select_connection_length(
    field: BoulderField,
    params: RobotParams,
    c_min: float,
    c_max: float,
    c_step: float,
    settings: Optional[DescentSettings] = None,
    mode: str = "first",
) -> Tuple[float, TraversabilityReport]:
    """Scan connection lengths ascending and pick a traversing one.

    mode="first" (default) returns the first length whose every jamming state
    passes the dot-product and displacement tests, with the report covering
    the scanned prefix. mode="best" scans the whole range and returns the
    feasible length with the largest displacement (an extension beyond the
    first-feasible selection loop).
    """
    if mode not in ("first", "best"):
        raise ValueError(f"unknown mode {mode!r}")
    rows: List[CRecord] = []
    best: Optional[CRecord] = None
    for c in _c_grid(c_min, c_max, c_step):
        row = evaluate_connection_length(field, params, c, settings=settings)[0]
        rows.append(row)
        if row.classification is Classification.TRAVERSING:
            if mode == "first":
                return c, TraversabilityReport(rows=tuple(rows))
            if best is None or row.displacement_ubl > best.displacement_ubl:
                best = row
    if best is not None:
        return best.connection_c, TraversabilityReport(rows=tuple(rows))
    raise NoFeasibleC(
        f"no traversing connection length in [{c_min}, {c_max}] step {c_step}"
    )


def plan_segments(
    segments: TerrainSegmentList,
    params: RobotParams,
    c_range: Tuple[float, float],
    c_step: float,
    settings: Optional[DescentSettings] = None,
) -> ConnectionSchedule:
    """Pick a connection length per segment; segments sharing a lattice reuse
    the already-computed result."""
    c_min, c_max = c_range
    memo: Dict[Tuple[float, float, float], Tuple[float, CRecord]] = {}
    entries = []
    for i, (_x0, _x1, fld) in enumerate(segments.segments):
        key = (fld.radius_r, fld.spacing_x, fld.spacing_y)
        if key in memo:
            chosen, row = memo[key]
        else:
            try:
                chosen, report = select_connection_length(
                    fld, params, c_min, c_max, c_step, settings=settings
                )
            except NoFeasibleC as err:
                raise NoFeasibleC(
                    f"segment {i}: {err}", segment_index=i
                ) from err
            row = report.rows[-1]
            memo[key] = (chosen, row)
        entries.append(
            ScheduleEntry(
                segment_index=i,
                spacing=fld.spacing_x,
                chosen_c=chosen,
                report_excerpt=row,
            )
        )
    return ConnectionSchedule(entries=tuple(entries))
