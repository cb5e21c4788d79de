"""Flowing-phase relaxation, the stride map, jamming-state search and the
traversability classification.

A planar state relaxes by gradient descent on the resolved energy until the
gradient vanishes or no decreasing step remains; the rest states reached this
way are the jamming states. A full stride applies two half-stride relaxations
(one per stance group); the dot product of the two initial descent directions
classifies the connection length as traversing (constructive half-strides) or
stuck (destructive).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import _kernels
from ._grid import STATUS_MAX_ITERS
from .energy import ResolvedPose, resolve_pose
from .robot import (
    GaitGroup,
    LegId,
    LEG_ORDER,
    PairConfig,
    PlanarState,
    extensions,
    hip_offsets,
    leg_tips_xy,
)
from .settings import DEFAULT_SETTINGS, DescentSettings
from .terrain import BoulderField, TerrainSegmentList, edge_distance_at


class MaxIterations(Exception):
    """Relaxation failed to converge within the iteration budget."""


class EmptyResult(Exception):
    """No jamming state found: terrain and configuration do not couple."""


class Classification(Enum):
    TRAVERSING = "Traversing"
    STUCK = "Stuck"
    NO_MOTION = "NoMotion"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class StrideOutcome:
    """Result of one full stride started from a jamming state.

    v1_dir and v2_dir are the unit initial motion directions of the two
    half-stride relaxations (None when a half-stride starts already jammed);
    dot_v1v2 is their dot product, 0 when either is None.
    """

    v1_dir: Optional[Tuple[float, float]]
    v2_dir: Optional[Tuple[float, float]]
    dot_v1v2: float
    displacement: Tuple[float, float]
    displacement_ubl: float
    classification: Classification


@dataclass(frozen=True)
class JammingState:
    """Zero-gradient rest state that recurs every stride modulo the lattice.

    The gradient norm (theta component mapped through the characteristic arm)
    is at or below the descent tolerance; edge_distances gives each stance
    leg's distance to the nearest boulder footprint circle.
    """

    pose: ResolvedPose
    stance: GaitGroup
    phi_offset: float
    edge_distances: Dict[LegId, float]


@dataclass(frozen=True)
class TrajectoryEntry:
    stride_index: int
    state: PlanarState
    z: float
    alpha: float
    stance: GaitGroup
    event: str  # "Touchdown" or "Jammed"


@dataclass(frozen=True)
class Trajectory:
    entries: Tuple[TrajectoryEntry, ...]
    outcomes: Tuple[StrideOutcome, ...]

    @property
    def net_displacement(self) -> Tuple[float, float]:
        first = self.entries[0].state
        last = self.entries[-1].state
        return (last.x - first.x, last.y - first.y)


def _settings_for(config: PairConfig, settings: Optional[DescentSettings]) -> DescentSettings:
    base = settings if settings is not None else DEFAULT_SETTINGS
    return base.scaled_for(config.params.body_len)


def relax(
    config: PairConfig,
    field: BoulderField,
    start: PlanarState,
    stance: GaitGroup,
    settings: Optional[DescentSettings] = None,
    record_path: bool = True,
) -> Tuple[ResolvedPose, Optional[Tuple[float, float]], List[PlanarState]]:
    """Slide the pair downhill on the resolved energy until it jams.

    Returns the jammed pose, the unit XY direction of the first accepted
    descent step (None when the start is already jammed) and the descent path.
    Energy is non-increasing along the path. Raises MaxIterations when the
    descent exceeds its iteration budget.
    """
    s = _settings_for(config, settings)
    hips = hip_offsets(config)
    ext = extensions(config, stance)
    terr = field.as_array()
    packed = _kernels.pack_settings(s)
    cap = s.iter_max + 2
    x, y, th, z, alpha, v1x, v1y, has_v1, status, _iters, path, npath = _kernels.relax_run(
        start.x, start.y, start.theta, hips, ext, terr, packed,
        cap if record_path else 1, record_path, True,
    )
    if status == STATUS_MAX_ITERS:
        raise MaxIterations(
            f"relaxation from ({start.x}, {start.y}, {start.theta}) did not "
            f"converge in {s.iter_max} iterations"
        )
    jammed = resolve_pose(config, field, PlanarState(x, y, th), stance, settings)
    initial_dir = (v1x, v1y) if has_v1 else None
    states = [PlanarState(*path[i]) for i in range(npath)] if record_path else []
    return jammed, initial_dir, states


def _classify(
    s: DescentSettings,
    spacing: float,
    v1: Optional[Tuple[float, float]],
    v2: Optional[Tuple[float, float]],
    disp: Tuple[float, float],
) -> Tuple[float, Classification]:
    dot = 0.0
    if v1 is not None and v2 is not None:
        dot = v1[0] * v2[0] + v1[1] * v2[1]
    disp_norm = math.hypot(disp[0], disp[1])
    if v1 is None and v2 is None:
        cls = Classification.NO_MOTION
    elif dot > s.dot_threshold and disp_norm >= s.disp_threshold_frac * spacing:
        cls = Classification.TRAVERSING
    else:
        cls = Classification.STUCK
    return dot, cls


def stride_map(
    config: PairConfig,
    field: BoulderField,
    jammed_in: PlanarState,
    stance_in: GaitGroup,
    settings: Optional[DescentSettings] = None,
) -> Tuple[StrideOutcome, PlanarState]:
    """Advance one full stride from a jammed state.

    Touch down the swing group and relax (first half-stride), then switch
    back and relax again. The outcome records both initial motion directions,
    their dot product and the CoM displacement over the stride.
    """
    s = _settings_for(config, settings)
    other = stance_in.other
    j1, v1, _ = relax(config, field, jammed_in, other, settings, record_path=False)
    j2, v2, _ = relax(config, field, j1.state, stance_in, settings, record_path=False)
    disp = (j2.state.x - jammed_in.x, j2.state.y - jammed_in.y)
    dot, cls = _classify(s, field.spacing_x, v1, v2, disp)
    outcome = StrideOutcome(
        v1_dir=v1,
        v2_dir=v2,
        dot_v1v2=dot,
        displacement=disp,
        displacement_ubl=math.hypot(*disp) / config.params.ubl,
        classification=cls,
    )
    return outcome, j2.state


def _canonical(x: float, y: float, sx: float, sy: float) -> Tuple[float, float]:
    return (x % sx, y % sy)


def _circ_close(a: float, b: float, period: float, tol: float) -> bool:
    d = abs(a - b) % period
    return min(d, period - d) <= tol


def _is_lattice_translation(
    dx: float, dy: float, dth: float, sx: float, sy: float, s: DescentSettings
) -> bool:
    if abs(dth) > s.fixed_point_tol_theta:
        return False
    rx = dx - round(dx / sx) * sx
    ry = dy - round(dy / sy) * sy
    return abs(rx) <= s.fixed_point_tol_xy and abs(ry) <= s.fixed_point_tol_xy


def find_jamming_states(
    config: PairConfig,
    field: BoulderField,
    stance: GaitGroup,
    theta_window: Optional[float] = None,
    settings: Optional[DescentSettings] = None,
) -> List[JammingState]:
    """All stride-periodic rest states of one lattice cell for a stance group.

    Seeds a position grid over one lattice cell crossed with a yaw window,
    relaxes every seed, deduplicates the converged states modulo lattice
    translation, and keeps those with vanishing gradient that map to
    themselves (mod lattice) under the stride map. Raises EmptyResult when
    nothing passes, including the degenerate flat-landscape case.
    """
    if field.extent is not None:
        raise ValueError("jamming search requires an infinite periodic field")
    s = _settings_for(config, settings)
    tw = s.theta_window if theta_window is None else theta_window
    hips = hip_offsets(config)
    ext = extensions(config, stance)
    terr = field.as_array()
    packed = _kernels.pack_settings(s)
    _kernels.apply_thread_cap()

    n = s.seeds_per_axis
    ox, oy = field.origin
    xs = ox + field.spacing_x * (np.arange(n) / n)
    ys = oy + field.spacing_y * (np.arange(n) / n)
    thetas = np.linspace(-tw, tw, s.seeds_theta) if s.seeds_theta > 1 else np.array([0.0])

    # Degenerate flat landscape: no isolated minima, treated as no jamming.
    z_probe = np.array(
        [_kernels.resolve_z(float(px), float(py), 0.0, hips, ext, terr)[0]
         for px in xs for py in ys]
    )
    if z_probe.max() - z_probe.min() <= s.flat_z_tol:
        raise EmptyResult("energy landscape is flat over the lattice cell")

    seeds = np.array(
        [(px, py, pth) for pth in thetas for py in ys for px in xs], dtype=np.float64
    )
    result = _kernels.batch_descent(seeds, hips, ext, terr, packed)
    if np.any(result[:, 3] == STATUS_MAX_ITERS):
        bad = int(np.argmax(result[:, 3] == STATUS_MAX_ITERS))
        raise MaxIterations(
            f"seed {tuple(seeds[bad])} did not converge in {s.iter_max} iterations"
        )

    sx, sy = field.spacing_x, field.spacing_y
    reps: List[Tuple[float, float, float]] = []
    for i in range(result.shape[0]):
        x, y, th = result[i, 0], result[i, 1], result[i, 2]
        cx, cy = _canonical(x, y, sx, sy)
        for rx, ry, rth in reps:
            if (
                _circ_close(cx, rx, sx, s.dedup_tol_xy)
                and _circ_close(cy, ry, sy, s.dedup_tol_xy)
                and abs(th - rth) <= s.dedup_tol_theta
            ):
                break
        else:
            reps.append((cx, cy, th))

    # Polish each representative minimum and re-deduplicate.
    polished: List[PlanarState] = []
    for rx, ry, rth in reps:
        pose, _, _ = relax(
            config, field, PlanarState(rx, ry, rth), stance, settings, record_path=False
        )
        st = pose.state
        cx, cy = _canonical(st.x, st.y, sx, sy)
        for q in polished:
            if (
                _circ_close(cx, q.x, sx, s.dedup_tol_xy)
                and _circ_close(cy, q.y, sy, s.dedup_tol_xy)
                and abs(st.theta - q.theta) <= s.dedup_tol_theta
            ):
                break
        else:
            polished.append(PlanarState(cx, cy, st.theta))

    jams: List[JammingState] = []
    for cand in sorted(polished, key=lambda q: (q.theta, q.y, q.x)):
        gx, gy, gt = _kernels.grad_z(
            cand.x, cand.y, cand.theta, hips, ext, terr, s.delta_xy, s.delta_theta
        )
        gts = gt / s.theta_arm
        if math.sqrt(gx * gx + gy * gy + gts * gts) > s.grad_tol_z:
            continue
        _, j_out = stride_map(config, field, cand, stance, settings)
        if not _is_lattice_translation(
            j_out.x - cand.x, j_out.y - cand.y, j_out.theta - cand.theta, sx, sy, s
        ):
            continue
        pose = resolve_pose(config, field, cand, stance, settings)
        tips = leg_tips_xy(config, cand, pose.alpha)
        stance_legs = set(stance.legs)
        edges = {
            leg: edge_distance_at(field, tips[i])
            for i, leg in enumerate(LEG_ORDER)
            if leg in stance_legs
        }
        heading_pos = cand.x * math.cos(cand.theta) + cand.y * math.sin(cand.theta)
        jams.append(
            JammingState(
                pose=pose,
                stance=stance,
                phi_offset=heading_pos % sx,
                edge_distances=edges,
            )
        )
    if not jams:
        raise EmptyResult(
            f"no stride-periodic jamming state for C={config.connection_c}"
        )
    return jams


def rollout(
    config: PairConfig,
    terrain: Union[BoulderField, TerrainSegmentList],
    start: PlanarState,
    n_strides: int,
    settings: Optional[DescentSettings] = None,
    start_stance: GaitGroup = GaitGroup.GROUP1,
    schedule: Optional[Sequence[Tuple[int, float]]] = None,
) -> Trajectory:
    """Alternate stance groups for n_strides, relaxing after each touchdown.

    On segmented terrain each half-stride is evaluated on the field of the
    segment containing the CoM at touchdown; `schedule` optionally maps
    segment index to a connection length, applied instantaneously when the
    CoM crosses a boundary.
    """
    if n_strides < 1:
        raise ValueError(f"n_strides must be >= 1, got {n_strides}")
    sched = dict(schedule) if schedule is not None else {}
    entries: List[TrajectoryEntry] = []
    outcomes: List[StrideOutcome] = []
    state = start
    stance = start_stance
    for stride in range(n_strides):
        stride_start = state
        dirs: List[Optional[Tuple[float, float]]] = []
        spacing = None
        cfg = config
        for _half in range(2):
            if isinstance(terrain, TerrainSegmentList):
                seg = terrain.segment_index_at(state.x)
                fld = terrain.segments[seg][2]
                if seg in sched:
                    cfg = PairConfig(params=config.params, connection_c=sched[seg])
            else:
                fld = terrain
            if spacing is None:
                spacing = fld.spacing_x
            td_pose = resolve_pose(cfg, fld, state, stance, settings)
            entries.append(
                TrajectoryEntry(stride, state, td_pose.z, td_pose.alpha, stance, "Touchdown")
            )
            jammed, v, _ = relax(cfg, fld, state, stance, settings, record_path=False)
            entries.append(
                TrajectoryEntry(
                    stride, jammed.state, jammed.z, jammed.alpha, stance, "Jammed"
                )
            )
            dirs.append(v)
            state = jammed.state
            stance = stance.other
        disp = (state.x - stride_start.x, state.y - stride_start.y)
        s = _settings_for(cfg, settings)
        dot, cls = _classify(s, spacing, dirs[0], dirs[1], disp)
        outcomes.append(
            StrideOutcome(
                v1_dir=dirs[0],
                v2_dir=dirs[1],
                dot_v1v2=dot,
                displacement=disp,
                displacement_ubl=math.hypot(*disp) / cfg.params.ubl,
                classification=cls,
            )
        )
    return Trajectory(entries=tuple(entries), outcomes=tuple(outcomes))
