"""Kinematics of the rigidly connected two-robot pair.

The pair is one rigid body: two square-footprint robots joined along the
shared heading with a clear gap of connection_c between the facing footprint
edges. Legs are vertical pegs at the footprint corners; hips lie in one
horizontal plane through the center of mass. A trot-like gait alternates two
diagonal leg quadruples between full extension (stance) and a retracted
swing length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Tuple

import numpy as np


@dataclass(frozen=True)
class RobotParams:
    """Per-robot geometry plus bookkeeping constants.

    friction_mu and stride_freq are carried as metadata only; the quasi-static
    model never consumes them. Traversability predictions are provably
    independent of mass_m and gravity_g (energy scales by m*g, every argmin is
    unchanged).
    """

    body_len: float = 0.063
    body_width: float = 0.063
    leg_stroke: float = 0.025
    leg_len_extended: float = 0.050
    mass_m: float = 1.0
    gravity_g: float = 9.81
    friction_mu: float = 0.08
    stride_freq: float = 0.33

    def __post_init__(self):
        if self.body_len <= 0 or self.body_width <= 0:
            raise ValueError("body dimensions must be positive")
        if not 0 < self.leg_stroke < self.leg_len_extended:
            raise ValueError(
                f"need 0 < leg_stroke < leg_len_extended, got "
                f"{self.leg_stroke} / {self.leg_len_extended}"
            )
        if self.mass_m <= 0 or self.gravity_g <= 0:
            raise ValueError("mass and gravity must be positive")

    @property
    def ubl(self) -> float:
        """Unit body length, the reporting unit for displacements and C."""
        return self.body_len


class LegPos(Enum):
    LF = "LF"
    RF = "RF"
    LH = "LH"
    RH = "RH"


@dataclass(frozen=True, order=True)
class LegId:
    robot_index: int  # 1 = leading robot, 2 = trailing robot
    position: str     # one of "LF", "RF", "LH", "RH"

    def __post_init__(self):
        if self.robot_index not in (1, 2):
            raise ValueError(f"robot_index must be 1 or 2, got {self.robot_index}")
        if self.position not in ("LF", "RF", "LH", "RH"):
            raise ValueError(f"unknown leg position {self.position!r}")

    def __str__(self):
        return f"{self.position}{self.robot_index}"


# Canonical leg ordering used by every array-valued kinematic quantity.
LEG_ORDER: Tuple[LegId, ...] = (
    LegId(1, "LF"), LegId(1, "RF"), LegId(1, "LH"), LegId(1, "RH"),
    LegId(2, "LF"), LegId(2, "RF"), LegId(2, "LH"), LegId(2, "RH"),
)
LEG_INDEX = {leg: i for i, leg in enumerate(LEG_ORDER)}


class GaitGroup(Enum):
    """The two alternating diagonal leg quadruples of the trot-like gait."""

    GROUP1 = 1
    GROUP2 = 2

    @property
    def legs(self) -> Tuple[LegId, ...]:
        if self is GaitGroup.GROUP1:
            return (LegId(1, "LF"), LegId(1, "RH"), LegId(2, "LF"), LegId(2, "RH"))
        return (LegId(1, "RF"), LegId(1, "LH"), LegId(2, "RF"), LegId(2, "LH"))

    @property
    def other(self) -> "GaitGroup":
        return GaitGroup.GROUP2 if self is GaitGroup.GROUP1 else GaitGroup.GROUP1


@dataclass(frozen=True)
class PairConfig:
    """Geometry of the connected pair: per-robot params plus the clear gap C."""

    params: RobotParams
    connection_c: float

    def __post_init__(self):
        if self.connection_c <= 0:
            raise ValueError(f"connection_c must be positive, got {self.connection_c}")

    @property
    def connection_c_ubl(self) -> float:
        return self.connection_c / self.params.ubl


def normalize_angle(theta: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    t = math.fmod(theta, 2.0 * math.pi)
    if t > math.pi:
        t -= 2.0 * math.pi
    elif t <= -math.pi:
        t += 2.0 * math.pi
    return t


@dataclass(frozen=True)
class PlanarState:
    """Controlled planar state of the pair: CoM position and yaw."""

    x: float
    y: float
    theta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "theta", normalize_angle(self.theta))

    def displaced(self, phi: float) -> "PlanarState":
        """State shifted by phi along the current heading."""
        return PlanarState(
            self.x + phi * math.cos(self.theta),
            self.y + phi * math.sin(self.theta),
            self.theta,
        )

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.theta], dtype=np.float64)


def hip_offsets(config: PairConfig) -> np.ndarray:
    """Body-frame hip offsets, shape (8, 2), in LEG_ORDER.

    Robot 1 leads: its hind edge faces robot 2's front edge across the gap C.
    x runs along the heading, y to the left; the CoM sits at the origin, so
    the eight offsets sum to zero by construction.
    """
    L = config.params.body_len
    W = config.params.body_width
    half_gap = config.connection_c / 2.0
    front = half_gap + L   # robot 1 front hip row
    rear = -half_gap - L   # robot 2 hind hip row
    hw = W / 2.0
    offsets = {
        LegId(1, "LF"): (front, +hw),
        LegId(1, "RF"): (front, -hw),
        LegId(1, "LH"): (half_gap, +hw),
        LegId(1, "RH"): (half_gap, -hw),
        LegId(2, "LF"): (-half_gap, +hw),
        LegId(2, "RF"): (-half_gap, -hw),
        LegId(2, "LH"): (rear, +hw),
        LegId(2, "RH"): (rear, -hw),
    }
    return np.array([offsets[leg] for leg in LEG_ORDER], dtype=np.float64)


def leg_extension(group_in_stance: GaitGroup, leg: LegId, params: RobotParams) -> float:
    """Current vertical hip-to-tip length of a leg under the binary gait."""
    if leg in group_in_stance.legs:
        return params.leg_len_extended
    return params.leg_len_extended - params.leg_stroke


def extensions(config: PairConfig, stance: GaitGroup) -> np.ndarray:
    """Per-leg extensions in LEG_ORDER for the given stance group."""
    return np.array(
        [leg_extension(stance, leg, config.params) for leg in LEG_ORDER],
        dtype=np.float64,
    )


def leg_tip_xy(
    config: PairConfig,
    state: PlanarState,
    pitch_alpha: float,
    leg: LegId,
) -> Tuple[float, float]:
    """World-frame horizontal position of a leg tip.

    The hip offset is foreshortened along the body x axis by the pitch
    rotation about the CoM transverse axis, rotated by yaw, and translated to
    the CoM. Tips hang vertically below the hips, so their horizontal
    placement equals the pitched hip's.
    """
    if not abs(pitch_alpha) < math.pi / 2:
        raise ValueError(f"pitch {pitch_alpha} out of range (-pi/2, pi/2)")
    hx, hy = hip_offsets(config)[LEG_INDEX[leg]]
    u = hx * math.cos(pitch_alpha)
    cth, sth = math.cos(state.theta), math.sin(state.theta)
    return (state.x + u * cth - hy * sth, state.y + u * sth + hy * cth)


def leg_tips_xy(
    config: PairConfig, state: PlanarState, pitch_alpha: float
) -> np.ndarray:
    """All eight tip positions at once, shape (8, 2), in LEG_ORDER."""
    hips = hip_offsets(config)
    u = hips[:, 0] * math.cos(pitch_alpha)
    cth, sth = math.cos(state.theta), math.sin(state.theta)
    out = np.empty((8, 2))
    out[:, 0] = state.x + u * cth - hips[:, 1] * sth
    out[:, 1] = state.y + u * sth + hips[:, 1] * cth
    return out


def hip_drop(hips: np.ndarray, sin_alpha: float) -> np.ndarray:
    """Vertical offset of each hip below the CoM plane under pitch.

    A hip at body-frame x offset hx sits at height Z - hx * sin(alpha); this
    returns the hx * sin(alpha) term for all legs.
    """
    return hips[:, 0] * sin_alpha
