"""Energy-minimal pose resolution and potential-energy landscapes.

For a planar state (X, Y, theta) and a stance group, the pair's pose is
completed by the pitch that minimizes the hip-plane height Z subject to no
leg tip penetrating the terrain; the potential energy is then mass * g * Z.
Swing legs participate in the non-penetration constraint with their retracted
length, since retracted clearance can equal boulder height.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import FrozenSet, List, Tuple

import numpy as np

from . import _kernels
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
from .terrain import BoulderField, height_at


class NoSupport(Exception):
    """Pose requested outside a finite field's extent."""


@dataclass(frozen=True)
class ResolvedPose:
    """Energy-minimal completion of a planar state under a stance group.

    beta (roll) is frozen at zero; contact_set holds the legs whose tips rest
    on the terrain within the contact tolerance.
    """

    state: PlanarState
    z: float
    alpha: float
    beta: float
    energy_e: float
    contact_set: FrozenSet[LegId]


@dataclass(frozen=True)
class EnergyLandscape1D:
    """Resolved energy sampled along the heading through a reference state."""

    phi_samples: np.ndarray
    e_values: np.ndarray
    alpha_values: np.ndarray
    reference: PlanarState
    stance: GaitGroup


def _settings_for(config: PairConfig, settings: DescentSettings | None) -> DescentSettings:
    base = settings if settings is not None else DEFAULT_SETTINGS
    return base.scaled_for(config.params.body_len)


def resolve_pose(
    config: PairConfig,
    field: BoulderField,
    state: PlanarState,
    stance: GaitGroup,
    settings: DescentSettings | None = None,
) -> ResolvedPose:
    """Lowest non-penetrating pose over the pitch search window.

    Per candidate pitch the minimal feasible Z is the max over all eight legs
    of terrain height at the tip plus the leg's current length plus the hip's
    pitch drop; the returned pitch minimizes that closed form (coarse grid
    plus golden-section refinement).
    """
    if not field.contains((state.x, state.y)):
        raise NoSupport(
            f"state ({state.x}, {state.y}) outside field extent {field.extent}"
        )
    s = _settings_for(config, settings)
    hips = hip_offsets(config)
    ext = extensions(config, stance)
    terr = field.as_array()
    z, alpha = _kernels.resolve_z(state.x, state.y, state.theta, hips, ext, terr)
    tips = leg_tips_xy(config, state, alpha)
    sin_a = math.sin(alpha)
    contacts = []
    for i, leg in enumerate(LEG_ORDER):
        tip_z = z - hips[i, 0] * sin_a - ext[i]
        if abs(tip_z - height_at(field, tips[i])) <= s.eps_contact:
            contacts.append(leg)
    m, g = config.params.mass_m, config.params.gravity_g
    return ResolvedPose(
        state=state,
        z=z,
        alpha=alpha,
        beta=0.0,
        energy_e=m * g * z,
        contact_set=frozenset(contacts),
    )


def landscape_1d(
    config: PairConfig,
    field: BoulderField,
    reference: PlanarState,
    stance: GaitGroup,
    phi_range: Tuple[float, float],
    step: float,
    settings: DescentSettings | None = None,
) -> EnergyLandscape1D:
    """Sample the resolved energy along the heading through `reference`."""
    phi_min, phi_max = phi_range
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    if phi_max < phi_min:
        raise ValueError(f"empty range [{phi_min}, {phi_max}]")
    n = int(math.floor((phi_max - phi_min) / step + 1e-9)) + 1
    phis = phi_min + step * np.arange(n)
    e_vals = np.empty(n)
    a_vals = np.empty(n)
    for i, phi in enumerate(phis):
        pose = resolve_pose(config, field, reference.displaced(float(phi)), stance, settings)
        e_vals[i] = pose.energy_e
        a_vals[i] = pose.alpha
    return EnergyLandscape1D(
        phi_samples=phis,
        e_values=e_vals,
        alpha_values=a_vals,
        reference=reference,
        stance=stance,
    )


def energy_gradient(
    config: PairConfig,
    field: BoulderField,
    state: PlanarState,
    stance: GaitGroup,
    settings: DescentSettings | None = None,
) -> Tuple[float, float, float]:
    """Central-difference gradient of the resolved energy,
    (dE/dX, dE/dY, dE/dtheta) in (J/m, J/m, J/rad)."""
    if not field.contains((state.x, state.y)):
        raise NoSupport(
            f"state ({state.x}, {state.y}) outside field extent {field.extent}"
        )
    s = _settings_for(config, settings)
    hips = hip_offsets(config)
    ext = extensions(config, stance)
    terr = field.as_array()
    gx, gy, gt = _kernels.grad_z(
        state.x, state.y, state.theta, hips, ext, terr, s.delta_xy, s.delta_theta
    )
    w = config.params.mass_m * config.params.gravity_g
    return (w * gx, w * gy, w * gt)
