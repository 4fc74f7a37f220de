"""Finite atomic measures on the plane.

A DiscreteMeasure is a positive combination of point masses standing in for
a continuum measure sampled at mesh scale resolution_h.  Measures are
immutable after construction; every operation returns a new value.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .geometry import REL_TOL, CircleArc, Disc, Point, as_point


@dataclass(frozen=True)
class DiscreteMeasure:
    points: np.ndarray  # (n, 2)
    weights: np.ndarray  # (n,), all > 0
    resolution_h: float
    label: str | None = None

    def __post_init__(self):
        pts = np.array(self.points, dtype=float).reshape(-1, 2)
        w = np.array(self.weights, dtype=float).reshape(-1)
        if len(pts) != len(w):
            raise ValueError("points and weights must have equal length")
        if not np.all(np.isfinite(pts)):
            raise ValueError("atom positions must be finite")
        if not (np.all(np.isfinite(w)) and np.all(w > 0.0)):
            raise ValueError("atom weights must be finite and positive")
        h = float(self.resolution_h)
        if not (math.isfinite(h) and h > 0.0):
            raise ValueError(f"resolution_h must be a positive real, got {h}")
        pts.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "resolution_h", h)

    def __len__(self) -> int:
        return len(self.weights)

    @property
    def is_empty(self) -> bool:
        return len(self.weights) == 0


@dataclass(frozen=True)
class GrowthReport:
    """Largest certified mass(D)/radius ratio with the disc that attains it."""

    growth_constant: float
    witness_disc: Disc


def total_mass(mu: DiscreteMeasure) -> float:
    return float(np.sum(mu.weights))


def restrict(mu: DiscreteMeasure, b: Disc) -> DiscreteMeasure:
    """Atoms inside the closed disc, weights unchanged; may be empty."""
    d = np.hypot(mu.points[:, 0] - b.center.x, mu.points[:, 1] - b.center.y)
    keep = d <= b.radius
    return DiscreteMeasure(mu.points[keep], mu.weights[keep], mu.resolution_h, mu.label)


def scale(mu: DiscreteMeasure, t: float) -> DiscreteMeasure:
    """Multiply all weights by t > 0."""
    if not t > 0.0:
        raise ValueError(f"scale factor must be positive, got {t}")
    return DiscreteMeasure(mu.points, mu.weights * t, mu.resolution_h, mu.label)


def add(mu: DiscreteMeasure, nu: DiscreteMeasure) -> DiscreteMeasure:
    """Union of the atom lists; the mesh scale is the finer of the two."""
    if mu.is_empty:
        return nu
    if nu.is_empty:
        return mu
    return DiscreteMeasure(
        np.vstack([mu.points, nu.points]),
        np.concatenate([mu.weights, nu.weights]),
        min(mu.resolution_h, nu.resolution_h),
        mu.label if mu.label == nu.label else None,
    )


def sum_measures(parts) -> DiscreteMeasure:
    parts = list(parts)
    if not parts:
        raise ValueError("need at least one measure")
    out = parts[0]
    for p in parts[1:]:
        out = add(out, p)
    return out


def growth_constant(mu: DiscreteMeasure) -> GrowthReport:
    """Certified linear-growth constant of the measure at scales >= resolution_h.

    Maximizes mass(D(p, r))/r over candidate centers p in the support and
    radii r = max(h, |p - q|) for support points q.  Any disc D(x, r) with
    r >= h that meets the support contains an atom p, and D(p, 2r) covers
    D(x, r), so the reported constant is within a factor 2 of the true
    supremum over such discs.  Boundary atoms count (closed discs), with a
    relative slack so rigid motions of the support cannot flip ties.
    """
    n = len(mu)
    if n == 0:
        raise ValueError("growth constant of the empty measure is undefined")
    pts, w, h = mu.points, mu.weights, mu.resolution_h
    best = -math.inf
    best_center = 0
    best_radius = h
    for i in range(n):
        d = np.hypot(pts[:, 0] - pts[i, 0], pts[:, 1] - pts[i, 1])
        order = np.argsort(d, kind="stable")
        d_sorted = d[order]
        cum = np.cumsum(w[order])
        radii = np.maximum(h, d_sorted)
        hi = np.searchsorted(d_sorted, radii * (1.0 + REL_TOL), side="right")
        ratios = cum[hi - 1] / radii
        k = int(np.argmax(ratios))
        if ratios[k] > best:
            best = float(ratios[k])
            best_center = i
            best_radius = float(radii[k])
    witness = Disc(Point(pts[best_center, 0], pts[best_center, 1]), best_radius)
    return GrowthReport(best, witness)


def arc_length_measure(obj, n_atoms: int, label: str | None = None) -> DiscreteMeasure:
    """Length measure of a circular arc or a segment, as n equal atoms.

    Each atom carries weight length/n.  Circle arcs are sampled at angles
    start + k*sweep/n; segments are sampled endpoint-inclusive, so the
    convex hull of the atoms is the segment itself.
    """
    if n_atoms < 1:
        raise ValueError("need at least one atom")
    if isinstance(obj, CircleArc):
        angles = obj.start_angle + np.arange(n_atoms) * (min(obj.sweep, 2.0 * math.pi) / n_atoms)
        pts = np.column_stack(
            [obj.center.x + obj.radius * np.cos(angles), obj.center.y + obj.radius * np.sin(angles)]
        )
        length = obj.length
        spacing = length / n_atoms
    else:
        a, b = (as_point(obj[0]), as_point(obj[1]))
        length = math.hypot(b.x - a.x, b.y - a.y)
        if length == 0.0:
            raise ValueError("segment endpoints coincide")
        if n_atoms == 1:
            pts = np.array([[(a.x + b.x) / 2.0, (a.y + b.y) / 2.0]])
            spacing = length
        else:
            pts = np.column_stack([np.linspace(a.x, b.x, n_atoms), np.linspace(a.y, b.y, n_atoms)])
            spacing = length / (n_atoms - 1)
    weights = np.full(n_atoms, length / n_atoms)
    return DiscreteMeasure(pts, weights, resolution_h=spacing, label=label)


def support_diameter(mu: DiscreteMeasure) -> float:
    """Largest pairwise distance between atoms (0 for fewer than 2 atoms)."""
    if len(mu) < 2:
        return 0.0
    pts = mu.points
    d = np.hypot(pts[:, 0, None] - pts[None, :, 0], pts[:, 1, None] - pts[None, :, 1])
    return float(d.max())


def to_json_dict(mu: DiscreteMeasure) -> dict:
    return {
        "label": mu.label,
        "resolution_h": mu.resolution_h,
        "atoms": [[float(x), float(y), float(w)] for (x, y), w in zip(mu.points, mu.weights)],
    }


def measure_to_json(mu: DiscreteMeasure) -> str:
    return json.dumps(to_json_dict(mu))


def measure_from_json(doc: str | dict) -> DiscreteMeasure:
    data = json.loads(doc) if isinstance(doc, str) else doc
    atoms = data["atoms"]
    pts = np.array([[a[0], a[1]] for a in atoms], dtype=float).reshape(-1, 2)
    w = np.array([a[2] for a in atoms], dtype=float)
    return DiscreteMeasure(pts, w, data["resolution_h"], data.get("label"))
