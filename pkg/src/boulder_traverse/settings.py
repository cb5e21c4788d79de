"""Numeric tuning shared across the pose resolver, relaxation and planner.

All defaults are calibrated for the reference robot (6.3 cm body). Length-like
quantities scale with body size so that globally rescaled scenes reproduce the
same predictions exactly; angle-like quantities are scale free.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

# Reference body side length the absolute defaults below were tuned for.
REF_BODY_LEN = 0.063

# Pitch search window and resolution of the pose resolver.
ALPHA_MAX = 0.35
ALPHA_COARSE_STEP = 0.005
ALPHA_REFINE_TOL = 1e-5

# Reference weight (mass * gravity) used to express gradient tolerances in
# energy units. Internally all descent runs on height (energy / weight), which
# makes every argmin-based prediction independent of mass and gravity.
REF_WEIGHT = 1.0 * 9.81


@dataclass(frozen=True)
class DescentSettings:
    """Hyperparameters of the energy relaxation and jamming search.

    Lengths are in meters at the reference body scale; `scaled_for` rescales
    them for larger or smaller robots.
    """

    step_init: float = 1e-3          # initial descent step (m, scaled space)
    step_min: float = 1e-7           # line-search abort threshold (m)
    grad_tol: float = 1e-4           # descent termination, J/m at reference weight
    iter_max: int = 10_000
    delta_xy: float = 1e-4           # central-difference step for X, Y (m)
    delta_theta: float = 1e-3        # central-difference step for theta (rad)
    theta_arm: float = 0.1           # characteristic arm mapping theta to meters
    polish_step_init: float = 1e-3   # pattern-search refinement after descent
    polish_step_min: float = 1e-8
    eps_contact: float = 1e-6        # tip-on-terrain tolerance (m)
    morph_steps: int = 64            # touchdown handoff resolution
    # Jamming search over one lattice cell.
    seeds_per_axis: int = 21
    seeds_theta: int = 9
    theta_window: float = 0.26       # rad, about +/-15 deg
    dedup_tol_xy: float = 1e-4
    dedup_tol_theta: float = 1e-3
    fixed_point_tol_xy: float = 1e-6
    fixed_point_tol_theta: float = 1e-5
    flat_z_tol: float = 1e-10        # height range below which a cell counts as flat
    # Traversability classification.
    dot_threshold: float = 0.0
    disp_threshold_frac: float = 0.2  # of the lattice period

    @property
    def grad_tol_z(self) -> float:
        """Gradient tolerance in height units (dimensionless slope)."""
        return self.grad_tol / REF_WEIGHT

    def scaled_for(self, body_len: float) -> "DescentSettings":
        """Rescale the length-like knobs for a robot of the given body size."""
        k = body_len / REF_BODY_LEN
        if k == 1.0:
            return self
        return replace(
            self,
            step_init=self.step_init * k,
            step_min=self.step_min * k,
            delta_xy=self.delta_xy * k,
            theta_arm=self.theta_arm * k,
            polish_step_init=self.polish_step_init * k,
            polish_step_min=self.polish_step_min * k,
            eps_contact=self.eps_contact * k,
            dedup_tol_xy=self.dedup_tol_xy * k,
            fixed_point_tol_xy=self.fixed_point_tol_xy * k,
            flat_z_tol=self.flat_z_tol * k,
        )


DEFAULT_SETTINGS = DescentSettings()
