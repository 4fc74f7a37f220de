"""Planar primitives: points, discs, circular arcs, polyline curves.

All operations here are pure, deterministic, and total unless documented
otherwise; the measure/curvature/capacity modules build on these predicates.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi

# Relative slack for length comparisons that must survive rigid motions:
# distances recomputed after a rotation agree only to a few ulps.
REL_TOL = 1e-9

# A cross product this far below the magnitude of its two summands is
# rounding noise from an exactly collinear triple.
_COLLINEAR_RTOL = 8.0 * np.finfo(float).eps


class Point(NamedTuple):
    x: float
    y: float


def as_point(p) -> Point:
    x, y = float(p[0]), float(p[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError(f"point coordinates must be finite, got ({x}, {y})")
    return Point(x, y)


@dataclass(frozen=True)
class Disc:
    """Closed disc of the given center and radius.

    radius == 0 is tolerated as the degenerate output of
    smallest_enclosing_disc on a single point; every other constructor in
    the package produces positive radii.
    """

    center: Point
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if not (math.isfinite(self.radius) and self.radius >= 0.0):
            raise ValueError(f"radius must be finite and nonnegative, got {self.radius}")

    def contains(self, p) -> bool:
        return math.hypot(p[0] - self.center.x, p[1] - self.center.y) <= self.radius

    def scaled(self, factor: float) -> "Disc":
        """Concentric dilate factor * D."""
        return Disc(self.center, factor * self.radius)


@dataclass(frozen=True)
class CircleArc:
    """Circular arc from start_angle to end_angle (radians, counterclockwise).

    The sweep must lie in (0, 2*pi]; a full circle is sweep == 2*pi.
    """

    center: Point
    radius: float
    start_angle: float = 0.0
    end_angle: float = TWO_PI

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if not (math.isfinite(self.radius) and self.radius > 0.0):
            raise ValueError(f"arc radius must be positive, got {self.radius}")
        if not 0.0 < self.sweep <= TWO_PI + 1e-12:
            raise ValueError(f"arc sweep must lie in (0, 2*pi], got {self.sweep}")

    @property
    def sweep(self) -> float:
        return self.end_angle - self.start_angle

    @property
    def length(self) -> float:
        return self.radius * min(self.sweep, TWO_PI)

    def point_at(self, angle: float) -> Point:
        return Point(
            self.center.x + self.radius * math.cos(angle),
            self.center.y + self.radius * math.sin(angle),
        )


@dataclass(frozen=True)
class ChordArcCurve:
    """Polyline with its arc-length parametrization.

    vertices is an (m, 2) array of distinct consecutive points;
    cumulative_arclength[k] is the length of the polyline up to vertex k.
    """

    vertices: np.ndarray
    cumulative_arclength: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 2:
            raise ValueError("need an (m, 2) array with m >= 2 vertices")
        if not np.all(np.isfinite(v)):
            raise ValueError("vertices must be finite")
        seg = np.hypot(np.diff(v[:, 0]), np.diff(v[:, 1]))
        if np.any(seg == 0.0):
            raise ValueError("consecutive vertices must be distinct")
        s = np.concatenate([[0.0], np.cumsum(seg)])
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "cumulative_arclength", s)

    @classmethod
    def from_vertices(cls, vertices) -> "ChordArcCurve":
        v = np.asarray(vertices, dtype=float)
        return cls(v, np.zeros(len(v)))

    @property
    def length(self) -> float:
        return float(self.cumulative_arclength[-1])


def circumradius_inv_sq(a, b, c) -> float:
    """1/R^2 for the circle through three points.

    Collinear or partially coincident triples return 0 (the straight-line
    convention: the circumscribed radius is infinite).  Computed as
    16*Area^2 / (|ab|^2 |bc|^2 |ca|^2), so degenerate triples vanish
    continuously; an explicit rounding filter sends exactly collinear
    inputs to exact 0.
    """
    ux, uy = b[0] - a[0], b[1] - a[1]
    vx, vy = c[0] - a[0], c[1] - a[1]
    wx, wy = c[0] - b[0], c[1] - b[1]
    d_ab = ux * ux + uy * uy
    d_ac = vx * vx + vy * vy
    d_bc = wx * wx + wy * wy
    denom = d_ab * d_ac * d_bc
    if denom == 0.0:
        return 0.0
    p, q = ux * vy, uy * vx
    cross = p - q
    if abs(cross) <= _COLLINEAR_RTOL * (abs(p) + abs(q)):
        return 0.0
    return 4.0 * cross * cross / denom


def chord_arc_constant(curve: ChordArcCurve) -> float:
    """Max over vertex pairs of arc length / chord length; always >= 1.

    Vertex pairs only: for the polylines this package generates, interior
    maxima agree with vertex maxima up to the discretization scale.  A zero
    chord between distinct parameters (a closed loop) reports math.inf.
    """
    v = curve.vertices
    s = curve.cumulative_arclength
    best = 1.0
    for i in range(len(v) - 1):
        chord = np.hypot(v[i + 1 :, 0] - v[i, 0], v[i + 1 :, 1] - v[i, 1])
        if np.any(chord == 0.0):
            return math.inf
        best = max(best, float(np.max((s[i + 1 :] - s[i]) / chord)))
    return best


def lambda_separated(discs: Sequence[Disc], lam: float) -> bool:
    """True iff the dilates lam*D_j are pairwise disjoint (strictly)."""
    if lam <= 1.0:
        raise ValueError(f"separation factor must exceed 1, got {lam}")
    if len(discs) <= 1:
        return True
    cx = np.array([d.center.x for d in discs])
    cy = np.array([d.center.y for d in discs])
    r = np.array([d.radius for d in discs])
    gap = np.hypot(cx[:, None] - cx[None, :], cy[:, None] - cy[None, :])
    need = lam * (r[:, None] + r[None, :])
    iu = np.triu_indices(len(discs), k=1)
    return bool(np.all(gap[iu] > need[iu]))


def _angular_overlap(a_start: float, a_sweep: float, b_start: float, b_sweep: float) -> float:
    """Measure of the overlap of two angular intervals, mod 2*pi."""
    if a_sweep >= TWO_PI:
        return min(b_sweep, TWO_PI)
    t = (b_start - a_start) % TWO_PI
    total = 0.0
    # window [t, t+b_sweep] against [0, a_sweep], with wraparound
    total += max(0.0, min(t + b_sweep, a_sweep) - t) if t < a_sweep else 0.0
    wrap = t + b_sweep - TWO_PI
    if wrap > 0.0:
        total += min(wrap, a_sweep)
    return total


def circle_disc_intersection_length(arc: CircleArc, b: Disc) -> float:
    """Exact length of the portion of the arc inside the closed disc b."""
    dx = b.center.x - arc.center.x
    dy = b.center.y - arc.center.y
    d = math.hypot(dx, dy)
    rho = arc.radius
    if d + rho <= b.radius:
        return arc.length
    if d >= b.radius + rho or d + b.radius <= rho:
        return 0.0
    # law of cosines on the triangle of the two centers and a crossing point
    cos_half = (d * d + rho * rho - b.radius * b.radius) / (2.0 * d * rho)
    half = math.acos(min(1.0, max(-1.0, cos_half)))
    phi = math.atan2(dy, dx)
    return rho * _angular_overlap(arc.start_angle, min(arc.sweep, TWO_PI), phi - half, 2.0 * half)


def _in_disc(c, p) -> bool:
    return c is not None and math.hypot(p[0] - c[0], p[1] - c[1]) <= c[2] * (1.0 + 1e-14)


def _diameter_disc(a, b):
    cx, cy = (a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0
    r = max(math.hypot(cx - a[0], cy - a[1]), math.hypot(cx - b[0], cy - b[1]))
    return (cx, cy, r)


def _circumdisc(a, b, c):
    ox = (min(a[0], b[0], c[0]) + max(a[0], b[0], c[0])) / 2.0
    oy = (min(a[1], b[1], c[1]) + max(a[1], b[1], c[1])) / 2.0
    ax, ay = a[0] - ox, a[1] - oy
    bx, by = b[0] - ox, b[1] - oy
    cx, cy = c[0] - ox, c[1] - oy
    d = (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by)) * 2.0
    if d == 0.0:
        return None
    x = ox + ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) + (cx * cx + cy * cy) * (ay - by)) / d
    y = oy + ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) + (cx * cx + cy * cy) * (bx - ax)) / d
    r = max(math.hypot(x - a[0], y - a[1]), math.hypot(x - b[0], y - b[1]), math.hypot(x - c[0], y - c[1]))
    return (x, y, r)


def _cross3(p, q, r) -> float:
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def _disc_two_boundary(points, p, q):
    circ = _diameter_disc(p, q)
    left = None
    right = None
    for r in points:
        if _in_disc(circ, r):
            continue
        cross = _cross3(p, q, r)
        c = _circumdisc(p, q, r)
        if c is None:
            continue
        d = _cross3(p, q, (c[0], c[1]))
        if cross > 0.0 and (left is None or d > _cross3(p, q, (left[0], left[1]))):
            left = c
        elif cross < 0.0 and (right is None or d < _cross3(p, q, (right[0], right[1]))):
            right = c
    if left is None and right is None:
        return circ
    if left is None:
        return right
    if right is None:
        return left
    return left if left[2] <= right[2] else right


def _disc_one_boundary(points, p):
    c = (p[0], p[1], 0.0)
    for i, q in enumerate(points):
        if not _in_disc(c, q):
            c = _diameter_disc(p, q) if c[2] == 0.0 else _disc_two_boundary(points[: i + 1], p, q)
    return c


def smallest_enclosing_disc(points, seed: int = 0) -> Disc:
    """Smallest disc containing all points.

    Randomized incremental construction (Welzl-style move-to-front),
    expected linear time; deterministic for a fixed input order and seed.
    A single point yields a radius-0 disc, which callers treat as the
    zero-capacity sentinel.
    """
    pts = [(float(p[0]), float(p[1])) for p in points]
    if not pts:
        raise ValueError("need at least one point")
    rng = random.Random(seed)
    shuffled = list(pts)
    rng.shuffle(shuffled)
    c = None
    for i, p in enumerate(shuffled):
        if c is None or not _in_disc(c, p):
            c = _disc_one_boundary(shuffled[: i + 1], p)
    return Disc(Point(c[0], c[1]), c[2])


def ad_regularity_estimate(
    arcs: Sequence[CircleArc], sample_centers: Sequence, radii: Sequence[float]
) -> tuple[float, float]:
    """Empirical one-dimensional regularity constants of a union of arcs.

    For every sampled center x and radius r, measures
    H1(union of arcs intersected with D(x, r)) / r exactly, and returns the
    (min, max) over all samples.
    """
    centers = [as_point(p) for p in sample_centers]
    rr = [float(r) for r in radii]
    if not centers or not rr:
        raise ValueError("need at least one sample center and one radius")
    if any(r <= 0 for r in rr):
        raise ValueError("radii must be positive")
    ratios = []
    for x in centers:
        for r in rr:
            b = Disc(x, r)
            total = sum(circle_disc_intersection_length(arc, b) for arc in arcs)
            ratios.append(total / r)
    return (min(ratios), max(ratios))
