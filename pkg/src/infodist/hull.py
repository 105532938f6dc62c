"""Planar convex hulls of information-disturbance point sets."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["DegenerateHullError", "HullRegion", "convex_hull"]


class DegenerateHullError(ValueError):
    """All finite input points are collinear (or fewer than three)."""


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _chain(points):
    out = []
    for p in points:
        while len(out) >= 2 and _cross(out[-2], out[-1], p) <= 0:
            out.pop()
        out.append(p)
    return out


@dataclass(frozen=True)
class HullRegion:
    """Convex region of averaged (info, disturbance) values.

    ``lower`` and ``upper`` are the hull chains ordered by increasing info.
    When ``unbounded`` is set the region extends to infinite disturbance
    above the lower chain, and ``upper`` only records the sampled extent.
    """

    lower: np.ndarray = field(repr=False)
    upper: np.ndarray = field(repr=False)
    unbounded: bool = False
    pair: object = None
    dim: int | None = None

    @property
    def vertices(self) -> np.ndarray:
        """Counter-clockwise vertex list."""
        return np.vstack([self.lower[:-1], self.upper[::-1][:-1]])

    @property
    def info_range(self) -> tuple[float, float]:
        return float(self.lower[0, 0]), float(self.lower[-1, 0])

    def lower_boundary(self, info):
        """Disturbance on the lower chain at ``info`` (linear between vertices)."""
        return np.interp(info, self.lower[:, 0], self.lower[:, 1])

    def upper_boundary(self, info):
        if self.unbounded:
            return np.full(np.shape(info), np.inf)
        return np.interp(info, self.upper[:, 0], self.upper[:, 1])

    def _halfplanes(self):
        """Unit outward normals ``n`` and offsets ``c`` with ``n . p <= c`` inside."""
        if self.unbounded:
            chain = self.lower
            edges = np.diff(chain, axis=0)
            normals = np.column_stack([edges[:, 1], -edges[:, 0]])
            starts = chain[:-1]
            # vertical walls at both ends of the lower chain
            normals = np.vstack([normals, [[-1.0, 0.0], [1.0, 0.0]]])
            starts = np.vstack([starts, chain[0], chain[-1]])
        else:
            v = self.vertices
            edges = np.roll(v, -1, axis=0) - v
            normals = np.column_stack([edges[:, 1], -edges[:, 0]])
            starts = v
        normals = normals / np.linalg.norm(normals, axis=1, keepdims=True)
        return normals, np.einsum("ij,ij->i", normals, starts)

    def outside_distance(self, info, disturbance):
        """Largest half-plane violation; a lower bound on the distance to the region.

        Nonpositive inside.  Infinite disturbance counts as inside an
        unbounded region whenever ``info`` is in range.
        """
        info = np.asarray(info, dtype=float)
        dist = np.asarray(disturbance, dtype=float)
        normals, offsets = self._halfplanes()
        x, y = (v[..., None] for v in np.broadcast_arrays(info, dist))
        nx, ny = normals[:, 0], normals[:, 1]
        # vertical walls have ny == 0 and must ignore an infinite disturbance
        with np.errstate(invalid="ignore"):
            yterm = np.where(ny == 0, 0.0, ny * y)
        proj = nx * x + yterm - offsets
        return proj.max(axis=-1)

    def contains(self, info, disturbance, tol: float = 1e-9):
        """Vectorised membership test; ``tol`` is a Euclidean slack."""
        return self.outside_distance(info, disturbance) <= tol


def convex_hull(points, unbounded: bool = False, pair=None, dim=None) -> HullRegion:
    """Convex hull of finite (info, disturbance) points (Andrew's monotone chain).

    Non-finite rows are dropped; pass ``unbounded=True`` when they stood for
    infinite disturbance.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    pts = pts[np.all(np.isfinite(pts), axis=1)]
    if len(pts) < 3:
        raise DegenerateHullError("need at least three finite points")
    pts = np.unique(pts, axis=0)  # sorted by info, then disturbance
    rows = [tuple(p) for p in pts]
    lower = _chain(rows)
    upper = _chain(rows[::-1])[::-1]
    if len(lower) + len(upper) - 2 < 3:
        raise DegenerateHullError("points are collinear")
    return HullRegion(
        lower=np.array(lower), upper=np.array(upper), unbounded=unbounded, pair=pair, dim=dim
    )
