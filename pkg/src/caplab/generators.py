"""Set and measure families used throughout the experiments.

Corner Cantor iterates, bead chains of separated discs on the real line,
the small-circle families that stand in for a disc's capacity, the two
staircase counterexample families, the grid-of-discs configuration, and
the circle-to-line transfer constructions.  Everything is deterministic
for a fixed seed and serializes through the measures module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .capacity import ModelCapacity, exact_capacity_model
from .geometry import (
    TWO_PI,
    ChordArcCurve,
    CircleArc,
    Disc,
    Point,
    as_point,
    chord_arc_constant,
    lambda_separated,
)
from .measures import DiscreteMeasure, arc_length_measure, scale, sum_measures

MAX_CANTOR_DEPTH = 8
MAX_STAIRCASE_DEPTH = 12


@dataclass(frozen=True)
class CantorSet:
    n: int
    squares: np.ndarray  # (4^n, 2) square centers
    side: float  # 4^-n
    measure: DiscreteMeasure


def cantor_corner(n: int) -> CantorSet:
    """Generation n of the corner quarter-Cantor iteration of the unit square.

    Each square of side s spawns four side-s/4 squares at its corners; the
    measure puts one atom of mass 4^-n at the center of each generation-n
    square, so the total mass is 1 at every depth.
    """
    if not 0 <= n <= MAX_CANTOR_DEPTH:
        raise ValueError(f"generation must lie in [0, {MAX_CANTOR_DEPTH}], got {n}")
    corners = np.zeros((1, 2))
    side = 1.0
    for _ in range(n):
        child = side / 4.0
        off = 3.0 * child
        offsets = np.array([[0.0, 0.0], [off, 0.0], [0.0, off], [off, off]])
        corners = (corners[:, None, :] + offsets[None, :, :]).reshape(-1, 2)
        side = child
    centers = corners + side / 2.0
    weights = np.full(len(centers), 4.0 ** (-n))
    mu = DiscreteMeasure(centers, weights, resolution_h=4.0 ** (-n), label=f"cantor_corner_{n}")
    return CantorSet(n, centers, side, mu)


@dataclass(frozen=True)
class BeadChain:
    """Separated discs strung along a curve, each carrying one part."""

    curve: ChordArcCurve
    discs: list[Disc]
    lam: float
    parts: list[DiscreteMeasure]
    part_capacities: list[ModelCapacity] | None  # exact/proxy value per part when the shape admits one
    part_shape: str


def bead_chain_on_line(
    radii: Sequence[float],
    lam: float,
    part_shape: str = "segment",
    seed: int = 0,
    atoms_per_part: int = 16,
    mass_fraction: float = 1.0,
) -> BeadChain:
    """Chain of lam-separated discs with centers on the real axis.

    Consecutive center gaps exceed lam*(r_j + r_{j+1}) by a seeded random
    slack, which keeps every dilate disjoint.  Parts are placed inside
    their discs with mass at most mass_fraction * radius:

    - "segment": horizontal segment of length r_j through the center
      (length measure, capacity known exactly as length/4),
    - "circle": circle of radius r_j/4, weights scaled down to mass r_j
      (capacity proxy: length/4, comparable only),
    - "point_cloud": uniform random atoms in the half-radius disc with
      total mass r_j/2.
    """
    radii = [float(r) for r in radii]
    if not radii or any(r <= 0 for r in radii):
        raise ValueError("radii must be positive")
    if lam <= 1.0:
        raise ValueError(f"separation factor must exceed 1, got {lam}")
    if not 0.0 < mass_fraction <= 1.0:
        raise ValueError("mass_fraction must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    xs = [0.0]
    for r_prev, r_next in zip(radii, radii[1:]):
        slack = 1.05 + 0.45 * rng.random()
        xs.append(xs[-1] + lam * (r_prev + r_next) * slack)
    discs = [Disc(Point(x, 0.0), r) for x, r in zip(xs, radii)]

    if part_shape not in ("segment", "circle", "point_cloud"):
        raise ValueError(f"unknown part shape {part_shape!r}")
    parts: list[DiscreteMeasure] = []
    caps: list[ModelCapacity] | None = [] if part_shape != "point_cloud" else None
    for j, (x, r) in enumerate(zip(xs, radii)):
        label = f"bead_{j}"
        if part_shape == "segment":
            ell = mass_fraction * r
            mu = arc_length_measure(((x - ell / 2.0, 0.0), (x + ell / 2.0, 0.0)), atoms_per_part, label)
            caps.append(exact_capacity_model("segment", ell))
        elif part_shape == "circle":
            arc = CircleArc(Point(x, 0.0), r / 4.0)
            mu = arc_length_measure(arc, atoms_per_part, label)
            target = mass_fraction * r
            if target < arc.length:
                mu = scale(mu, target / arc.length)
            caps.append(exact_capacity_model("circle", r / 4.0))
        else:
            rad = r / 2.0
            u = rng.random(atoms_per_part)
            theta = rng.random(atoms_per_part) * TWO_PI
            rr = rad * np.sqrt(u)
            pts = np.column_stack([x + rr * np.cos(theta), rr * np.sin(theta)])
            mass = mass_fraction * r / 2.0
            w = np.full(atoms_per_part, mass / atoms_per_part)
            mu = DiscreteMeasure(pts, w, resolution_h=rad / math.sqrt(atoms_per_part), label=label)
        parts.append(mu)
    if len(xs) >= 2:
        curve = ChordArcCurve.from_vertices(np.column_stack([xs, np.zeros(len(xs))]))
    else:
        curve = ChordArcCurve.from_vertices([[xs[0] - radii[0], 0.0], [xs[0] + radii[0], 0.0]])
    chain = BeadChain(curve, discs, lam, parts, caps, part_shape)
    assert lambda_separated(discs, lam)
    return chain


class CoveringResult(NamedTuple):
    n: int
    margin: float  # smallest clearance found by the adversarial search


def _covering_clearance(lam: float, n: int, budget: int, seed: int) -> float:
    """Adversarial search for a disc crossing the annulus without swallowing a circle.

    Unit disc D at the origin; the family is one circle of radius
    a = min(1, lam' - 1)/1000 at the center plus n circles of the same
    radius tangent to the boundary of lam'*D from within, equally spaced.
    Admissible discs B intersect D and the complement of lam*D; the
    clearance of B is max over circles of R_B - |c_B - center| - a, which
    is >= 0 exactly when some circle sits inside B.  Returns the smallest
    clearance found over a grid plus seeded random refinement.
    """
    lamp = (1.0 + lam) / 2.0
    a = min(1.0, lamp - 1.0) / 1000.0
    ring = lamp - a
    angles = np.arange(n) * (TWO_PI / max(n, 1))
    cx = np.concatenate([[0.0], ring * np.cos(angles)]) if n > 0 else np.array([0.0])
    cy = np.concatenate([[0.0], ring * np.sin(angles)]) if n > 0 else np.array([0.0])

    def clearance(bx, by, br):
        d = np.hypot(bx[:, None] - cx[None, :], by[:, None] - cy[None, :])
        return (br[:, None] - d - a).max(axis=1)

    # the configuration is symmetric under rotation by one ring step and
    # under reflection, so candidate centers only need half a step of angle
    half_step = math.pi / n if n > 0 else math.pi
    worst = math.inf
    worst_b = None
    grid_budget = budget // 2
    n_theta = max(8, int(round((grid_budget / 64) ** (1.0 / 3.0))))
    thetas = np.linspace(0.0, half_step, n_theta)
    qs = np.linspace(0.0, lam + 1.0, 32)
    rs = np.geomspace(max((lam - 1.0) / 2.0 * 0.9, 1e-6), 50.0 * lam, 32)
    tq, tt, tr = np.meshgrid(qs, thetas, rs, indexing="ij")
    bx = (tq * np.cos(tt)).ravel()
    by = (tq * np.sin(tt)).ravel()
    br = tr.ravel()
    q = np.hypot(bx, by)
    admissible = (q < 1.0 + br) & (q + br > lam)
    if np.any(admissible):
        cl = clearance(bx[admissible], by[admissible], br[admissible])
        k = int(np.argmin(cl))
        worst = float(cl[k])
        worst_b = (bx[admissible][k], by[admissible][k], br[admissible][k])

    rng = np.random.default_rng(seed)
    remaining = budget - int(admissible.sum())
    chunk = 20_000
    while remaining > 0:
        m = min(chunk, remaining)
        remaining -= m
        if worst_b is not None and rng.random() < 0.5:
            # local refinement around the current worst disc
            sx = worst_b[0] + 0.05 * lam * rng.standard_normal(m)
            sy = worst_b[1] + 0.05 * lam * rng.standard_normal(m)
            sr = worst_b[2] * np.exp(0.05 * rng.standard_normal(m))
        else:
            ang = rng.random(m) * half_step
            rad = rng.random(m) * (lam + 1.0)
            sx = rad * np.cos(ang)
            sy = rad * np.sin(ang)
            sr = np.exp(rng.uniform(math.log(max((lam - 1.0) / 2.0 * 0.9, 1e-6)), math.log(50.0 * lam), m))
        q = np.hypot(sx, sy)
        ok = (q < 1.0 + sr) & (q + sr > lam)
        if not np.any(ok):
            continue
        cl = clearance(sx[ok], sy[ok], sr[ok])
        k = int(np.argmin(cl))
        if float(cl[k]) < worst:
            worst = float(cl[k])
            worst_b = (sx[ok][k], sy[ok][k], sr[ok][k])
    return worst


@lru_cache(maxsize=None)
def covering_number(lam: float, search_budget: int = 120_000, seed: int = 0, max_n: int = 512) -> CoveringResult:
    """Smallest ring count n for which the adversarial search certifies coverage.

    Certifies, up to search resolution, that every disc crossing from the
    unit disc to the complement of its lam-dilate contains one of the n+1
    small circles.  Raises if no n up to max_n stabilizes.
    """
    if lam <= 1.0:
        raise ValueError(f"separation factor must exceed 1, got {lam}")
    for n in range(1, max_n + 1):
        margin = _covering_clearance(lam, n, search_budget, seed)
        if margin >= -1e-12:
            return CoveringResult(n, margin)
    raise RuntimeError(
        f"covering search did not stabilize below n = {max_n} for lam = {lam}; "
        f"last margin deficit suggests enlarging the budget ({search_budget})"
    )


def lj_circles(d: Disc, lam: float, target_gamma: float, search_budget: int = 120_000, seed: int = 0) -> list[CircleArc]:
    """Family of small circles whose total length encodes a capacity target.

    One circle at the disc center plus n ring circles tangent internally to
    the lam' = (1+lam)/2 dilate, all of equal radius chosen so the total
    length is a_lam * (n+1) * target_gamma with a_lam = min(1, lam'-1)/1000.
    The ring count n is the cached covering number for lam.
    """
    if lam <= 1.0:
        raise ValueError(f"separation factor must exceed 1, got {lam}")
    if not 0.0 < target_gamma <= d.radius:
        raise ValueError(f"target capacity must lie in (0, radius], got {target_gamma}")
    n = covering_number(lam, search_budget, seed).n
    lamp = (1.0 + lam) / 2.0
    rho = min(1.0, lamp - 1.0) / 1000.0 * target_gamma / TWO_PI
    ring = lamp * d.radius - rho
    if ring <= rho:
        raise ValueError("infeasible geometry: ring circles collide with the center circle")
    circles = [CircleArc(d.center, rho)]
    for k in range(n):
        ang = TWO_PI * k / n
        circles.append(CircleArc(Point(d.center.x + ring * math.cos(ang), d.center.y + ring * math.sin(ang)), rho))
    # postconditions: pairwise disjoint, all inside lam'*D
    centers = np.array([[c.center.x, c.center.y] for c in circles])
    gaps = np.hypot(centers[:, None, 0] - centers[None, :, 0], centers[:, None, 1] - centers[None, :, 1])
    iu = np.triu_indices(len(circles), k=1)
    if not np.all(gaps[iu] > 2.0 * rho):
        raise ValueError("infeasible geometry: circles intersect at this target capacity")
    return circles


def _square_cloud(x0: float, y0: float, side: float, mass: float, per_side: int, label: str) -> DiscreteMeasure:
    g = per_side
    coords = (np.arange(g) + 0.5) * (side / g)
    xx, yy = np.meshgrid(x0 + coords, y0 + coords, indexing="ij")
    pts = np.column_stack([xx.ravel(), yy.ravel()])
    w = np.full(g * g, mass / (g * g))
    return DiscreteMeasure(pts, w, resolution_h=side / g, label=label)


def _cantor_children(x0: float, y0: float, side: float, steps: int) -> tuple[np.ndarray, float]:
    corners = np.array([[x0, y0]])
    s = side
    for _ in range(steps):
        child = s / 4.0
        off = 3.0 * child
        offsets = np.array([[0.0, 0.0], [off, 0.0], [0.0, off], [off, off]])
        corners = (corners[:, None, :] + offsets[None, :, :]).reshape(-1, 2)
        s = child
    return corners, s


@dataclass(frozen=True)
class StaircaseFamily:
    """Output of the deep-staircase constructions.

    parts holds one measure per emitted set; chain_squares records the
    nested squares (corner_x, corner_y, side) the construction descends
    through, including the final square that carries no parts of its own.
    """

    parts: list[DiscreteMeasure]
    measure: DiscreteMeasure
    chain_squares: list[tuple[float, float, float]]
    part_squares: list[tuple[float, float, float]]
    part_levels: list[int]


def david_semmes_ex1(nk: Sequence[int], mass_const: float = 0.25, atoms_per_side: int = 2) -> StaircaseFamily:
    """Staircase family: keep one corner square per stage, emit the siblings.

    Stage i runs nk[i+1] - nk[i] corner-Cantor steps inside the current
    square, keeps the lower-left child as the next chain square, and emits
    every other child as a part with a uniform atom cloud of mass
    mass_const * side.  The unit square itself is emitted first with mass
    mass_const, matching its side length 1.
    """
    nk = list(nk)
    if len(nk) < 2 or nk[0] != 0 or any(b <= a for a, b in zip(nk, nk[1:])):
        raise ValueError("stage depths must be strictly increasing from 0")
    if nk[-1] > MAX_STAIRCASE_DEPTH:
        raise ValueError(f"depth overflow: {nk[-1]} exceeds {MAX_STAIRCASE_DEPTH}")
    parts = [_square_cloud(0.0, 0.0, 1.0, mass_const, atoms_per_side, "stair_0")]
    part_squares = [(0.0, 0.0, 1.0)]
    part_levels = [0]
    chain = [(0.0, 0.0, 1.0)]
    x0, y0, side = 0.0, 0.0, 1.0
    for prev, depth in zip(nk, nk[1:]):
        corners, child = _cantor_children(x0, y0, side, depth - prev)
        # lower-left child continues the chain: it shares the parent corner
        keep = int(np.argmin(corners[:, 0] + corners[:, 1]))
        for idx, (cx, cy) in enumerate(corners):
            if idx == keep:
                continue
            parts.append(
                _square_cloud(cx, cy, child, mass_const * child, atoms_per_side, f"stair_{depth}_{idx}")
            )
            part_squares.append((float(cx), float(cy), child))
            part_levels.append(depth)
        x0, y0, side = float(corners[keep, 0]), float(corners[keep, 1]), child
        chain.append((x0, y0, side))
    return StaircaseFamily(parts, sum_measures(parts), chain, part_squares, part_levels)


def ex2_with_discs(
    nk: Sequence[int],
    mass_const: float = 0.25,
    disc_const: float = 0.25,
    atoms_per_side: int = 2,
    atoms_per_circle: int = 8,
) -> StaircaseFamily:
    """Staircase squares (without the unit square) plus concentric circle parts.

    Every square of generation m alive during stage i gets a circle of
    radius 4^-m / 10 concentric with it, carrying a boundary length measure
    scaled to mass disc_const * 2^-m * 4^-m; stage 0 covers generations
    0..nk[1] inclusive and later stages cover (nk[i], nk[i+1]].  The square
    parts are the emitted staircase siblings with mass mass_const * side.
    """
    base = david_semmes_ex1(nk, mass_const, atoms_per_side)
    parts = list(base.parts[1:])  # the unit square is not a part here
    part_squares = list(base.part_squares[1:])
    part_levels = list(base.part_levels[1:])
    nk = list(nk)
    for i, (start, stop) in enumerate(zip(nk, nk[1:])):
        x0, y0, side = base.chain_squares[i]
        gens = range(start, stop + 1) if i == 0 else range(start + 1, stop + 1)
        for m in gens:
            corners, child = _cantor_children(x0, y0, side, m - start)
            radius = child / 10.0
            mass = disc_const * (2.0 ** (-m)) * (4.0 ** (-m))
            for idx, (cx, cy) in enumerate(corners):
                circle = CircleArc(Point(cx + child / 2.0, cy + child / 2.0), radius)
                mu = arc_length_measure(circle, atoms_per_circle, f"stair_disc_{m}_{idx}")
                parts.append(scale(mu, mass / circle.length))
                part_squares.append((float(cx), float(cy), child))
                part_levels.append(m)
    return StaircaseFamily(parts, sum_measures(parts), base.chain_squares, part_squares, part_levels)


def grid_prop53(ell: float, n: int, atoms_per_circle: int = 16) -> tuple[list[DiscreteMeasure], list[Disc]]:
    """n x n grid of small discs in a side-ell square, with doubled dilates.

    Boundary length measures on circles of radius ell/n^2 at the grid
    points ell*i/(n-1); the returned discs are the 2-dilates.  The grid
    spacing dominates the disc size for n >= 4, so the small discs are
    pairwise disjoint.
    """
    if n < 4:
        raise ValueError(f"grid needs n >= 4, got {n}")
    if ell <= 0.0:
        raise ValueError(f"square side must be positive, got {ell}")
    radius = ell / (n * n)
    step = ell / (n - 1)
    parts = []
    discs = []
    for i in range(n):
        for j in range(n):
            center = Point(i * step, j * step)
            circle = CircleArc(center, radius)
            parts.append(arc_length_measure(circle, atoms_per_circle, f"grid_{i}_{j}"))
            discs.append(Disc(center, 2.0 * radius))
    return parts, discs


_MOBIUS_POLE_TOL = 1e-9


def mobius_transfer(points: Sequence) -> list[Point]:
    """Image of the points under z -> i(1+z)/(1-z), the circle-to-line map."""
    out = []
    for p in points:
        z = complex(*as_point(p))
        if abs(z - 1.0) < _MOBIUS_POLE_TOL:
            raise ValueError(f"point {p} is too close to the pole at 1")
        w = 1j * (1.0 + z) / (1.0 - z)
        out.append(Point(w.real, w.imag))
    return out


class EnvelopeResult(NamedTuple):
    curve: ChordArcCurve
    chord_arc: float


def chordarc_envelope(discs: Sequence[Disc], lam: float, samples_per_arc: int = 48) -> EnvelopeResult:
    """Tent curve through disc centers replacing arcs of the unit semicircle.

    For each disc, the arc of the upper unit semicircle between its two
    crossings with the boundary of the (1+lam)/2 dilate is replaced by the
    two segments joining the crossings to the disc center.  Requires the
    discs to be lam-separated and their crossing zones to stay inside the
    open semicircle.
    """
    if not discs:
        raise ValueError("need at least one disc")
    if not lambda_separated(list(discs), lam):
        raise ValueError("discs are not lam-separated")
    lamp = (1.0 + lam) / 2.0
    zones = []
    for d in discs:
        dist = math.hypot(d.center.x, d.center.y)
        if dist == 0.0:
            raise ValueError("a disc concentric with the circle has no crossing zone")
        rr = lamp * d.radius
        cos_half = (1.0 + dist * dist - rr * rr) / (2.0 * dist)
        if abs(cos_half) >= 1.0:
            raise ValueError(f"disc at {d.center} does not cross the unit circle")
        half = math.acos(cos_half)
        phi = math.atan2(d.center.y, d.center.x)
        lo, hi = phi - half, phi + half
        if not (0.0 < lo and hi < math.pi):
            raise ValueError(f"crossing zone of disc at {d.center} leaves the open semicircle")
        zones.append((lo, hi, d.center))
    zones.sort(key=lambda z: z[0])
    for (_, hi, _), (lo, _, _) in zip(zones, zones[1:]):
        if hi >= lo:
            raise ValueError("crossing zones overlap; the tent curve is not defined")

    def arc_points(a: float, b: float) -> np.ndarray:
        count = max(2, int(math.ceil((b - a) / math.pi * samples_per_arc)) + 1)
        t = np.linspace(a, b, count)
        return np.column_stack([np.cos(t), np.sin(t)])

    vertices = []
    cursor = 0.0
    for lo, hi, center in zones:
        vertices.append(arc_points(cursor, lo))
        vertices.append(np.array([[center.x, center.y]]))
        cursor = hi
    vertices.append(arc_points(cursor, math.pi))
    stacked = np.vstack(vertices)
    keep = np.ones(len(stacked), dtype=bool)
    keep[1:] = np.hypot(np.diff(stacked[:, 0]), np.diff(stacked[:, 1])) > 0.0
    curve = ChordArcCurve.from_vertices(stacked[keep])
    return EnvelopeResult(curve, chord_arc_constant(curve))
