"""Exact geometric queries on periodic lattices of semispherical boulders.

A field is a rectangular lattice of semispheres of radius r resting on a flat
plane. Heights are exact (semispheres have no overhangs) and the nearest
boulder center is found by lattice rounding, so every query is O(1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

# Index bound standing in for "unbounded" in the packed kernel representation.
_UNBOUNDED = 1e18


class FootprintBoundary(Exception):
    """Surface gradient requested within eps_edge of a footprint circle."""


@dataclass(frozen=True)
class BoulderField:
    """Periodic lattice of semispherical boulders on a flat plane.

    `origin` is the center of one boulder; boulders sit at
    origin + (i * spacing_x, j * spacing_y). `extent`, when given, restricts
    boulders to centers inside the (xmin, xmax, ymin, ymax) rectangle; the
    plane itself remains infinite.
    """

    radius_r: float = 0.025
    spacing_x: float = 0.05
    spacing_y: float = 0.05
    origin: Tuple[float, float] = (0.0, 0.0)
    extent: Optional[Tuple[float, float, float, float]] = None
    eps_edge: float = 1e-6

    def __post_init__(self):
        if self.radius_r <= 0:
            raise ValueError(f"radius_r must be positive, got {self.radius_r}")
        if self.spacing_x <= 0 or self.spacing_y <= 0:
            raise ValueError("spacings must be positive")
        if self.spacing_x < 2 * self.radius_r or self.spacing_y < 2 * self.radius_r:
            raise ValueError(
                f"boulders overlap: spacing ({self.spacing_x}, {self.spacing_y}) "
                f"< diameter {2 * self.radius_r}"
            )
        if self.extent is not None:
            xmin, xmax, ymin, ymax = self.extent
            if xmin >= xmax or ymin >= ymax:
                raise ValueError(f"degenerate extent {self.extent}")

    def _index_bounds(self) -> Tuple[float, float, float, float]:
        """Lattice-index bounds (kx_lo, kx_hi, ky_lo, ky_hi) of existing boulders."""
        if self.extent is None:
            return (-_UNBOUNDED, _UNBOUNDED, -_UNBOUNDED, _UNBOUNDED)
        xmin, xmax, ymin, ymax = self.extent
        ox, oy = self.origin
        return (
            math.ceil((xmin - ox) / self.spacing_x),
            math.floor((xmax - ox) / self.spacing_x),
            math.ceil((ymin - oy) / self.spacing_y),
            math.floor((ymax - oy) / self.spacing_y),
        )

    def contains(self, p: Sequence[float]) -> bool:
        """Whether p lies inside the field's extent (always true if infinite)."""
        if self.extent is None:
            return True
        xmin, xmax, ymin, ymax = self.extent
        return xmin <= p[0] <= xmax and ymin <= p[1] <= ymax

    def nearest_center(self, p: Sequence[float]) -> Tuple[float, float]:
        """Center of the boulder nearest to p (clamped to the extent)."""
        kxl, kxh, kyl, kyh = self._index_bounds()
        ox, oy = self.origin
        kx = min(max(math.floor((p[0] - ox) / self.spacing_x + 0.5), kxl), kxh)
        ky = min(max(math.floor((p[1] - oy) / self.spacing_y + 0.5), kyl), kyh)
        return (ox + kx * self.spacing_x, oy + ky * self.spacing_y)

    def as_array(self) -> np.ndarray:
        """Packed parameters consumed by the numeric kernels."""
        kxl, kxh, kyl, kyh = self._index_bounds()
        return np.array(
            [self.radius_r, self.spacing_x, self.spacing_y,
             self.origin[0], self.origin[1],
             float(kxl), float(kxh), float(kyl), float(kyh)],
            dtype=np.float64,
        )


def flat_field(spacing: float = 0.05) -> BoulderField:
    """Degenerate field with vanishing boulders, i.e. effectively flat ground."""
    return BoulderField(radius_r=1e-12, spacing_x=spacing, spacing_y=spacing)


def height_at(fld: BoulderField, p: Sequence[float]) -> float:
    """Terrain height at the horizontal point p. Total and exact."""
    cx, cy = fld.nearest_center(p)
    dd = (p[0] - cx) ** 2 + (p[1] - cy) ** 2
    rr = fld.radius_r * fld.radius_r
    if dd < rr:
        return math.sqrt(rr - dd)
    return 0.0


def surface_gradient_at(fld: BoulderField, p: Sequence[float]) -> Tuple[float, float]:
    """Slope vector of the height field at p.

    Raises FootprintBoundary within eps_edge of a footprint circle, where the
    semisphere's slope is unbounded.
    """
    cx, cy = fld.nearest_center(p)
    dx, dy = p[0] - cx, p[1] - cy
    d = math.hypot(dx, dy)
    if abs(d - fld.radius_r) < fld.eps_edge:
        raise FootprintBoundary(
            f"point {tuple(p)} is within {fld.eps_edge} of a footprint circle"
        )
    if d >= fld.radius_r:
        return (0.0, 0.0)
    if d == 0.0:
        return (0.0, 0.0)
    h = math.sqrt(fld.radius_r ** 2 - d * d)
    return (-dx / h, -dy / h)


def edge_distance_at(fld: BoulderField, p: Sequence[float]) -> float:
    """Unsigned distance from p to the nearest boulder footprint circle.

    With non-overlapping boulders the nearest circle always belongs to the
    nearest center, so this is |dist(p, nearest center) - r|.
    """
    cx, cy = fld.nearest_center(p)
    d = math.hypot(p[0] - cx, p[1] - cy)
    return abs(d - fld.radius_r)


@dataclass(frozen=True)
class TerrainSegmentList:
    """Contiguous x-segments, each carrying its own boulder lattice.

    Used for fields whose density changes along the travel direction; the
    y lattice of every segment is infinite.
    """

    segments: Tuple[Tuple[float, float, BoulderField], ...]

    def __post_init__(self):
        if not self.segments:
            raise ValueError("segment list is empty")
        prev_end = None
        for i, (x_start, x_end, fld) in enumerate(self.segments):
            if x_end <= x_start:
                raise ValueError(f"segment {i}: x_end {x_end} <= x_start {x_start}")
            if x_end - x_start < fld.spacing_x:
                raise ValueError(
                    f"segment {i} narrower than one lattice period "
                    f"({x_end - x_start} < {fld.spacing_x})"
                )
            if prev_end is not None and not math.isclose(x_start, prev_end, abs_tol=1e-12):
                raise ValueError(
                    f"segment {i} starts at {x_start}, previous ended at {prev_end}"
                )
            prev_end = x_end

    @property
    def x_start(self) -> float:
        return self.segments[0][0]

    @property
    def x_end(self) -> float:
        return self.segments[-1][1]

    def segment_index_at(self, x: float) -> int:
        """Index of the segment containing x (clamped to the ends)."""
        if x < self.segments[0][0]:
            return 0
        for i, (x_start, x_end, _) in enumerate(self.segments):
            if x < x_end:
                return i
        return len(self.segments) - 1

    def field_at(self, x: float) -> BoulderField:
        return self.segments[self.segment_index_at(x)][2]
