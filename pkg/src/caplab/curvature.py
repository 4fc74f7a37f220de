"""Triple-interaction curvature of discrete measures.

The central quantity is the triple sum over ordered atom triples of
w_i * w_j * w_k / R^2, where R is the circumscribed radius of the three
atom positions and collinear triples contribute 0.  Exact evaluation is
cubic in the atom count; a seeded Monte-Carlo estimator covers supports
where the cubic kernel is out of budget.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .measures import DiscreteMeasure, total_mass

# Default cap on n^3 for the exact kernels; about a minute of dense numpy.
TRIPLE_BUDGET = 2_000_000_000

_COLLINEAR_RTOL = 8.0 * np.finfo(float).eps


@dataclass(frozen=True)
class CurvatureReport:
    value: float
    estimator: str  # "exact" | "monte_carlo"
    epsilon: float = 0.0
    samples: int = 0
    std_error: float = 0.0

    def __post_init__(self):
        if self.estimator not in ("exact", "monte_carlo"):
            raise ValueError(f"unknown estimator {self.estimator!r}")
        if self.estimator == "exact" and self.std_error != 0.0:
            raise ValueError("exact reports carry no standard error")

    def to_json_dict(self) -> dict:
        return {
            "value": self.value,
            "estimator": self.estimator,
            "epsilon": self.epsilon,
            "samples": self.samples,
            "std_error": self.std_error,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


def _pair_sq_dists(pts: np.ndarray) -> np.ndarray:
    diff = pts[:, None, :] - pts[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _check_budget(n: int, budget: int) -> None:
    if n**3 > budget:
        raise ValueError(
            f"exact evaluation needs {n}^3 = {n**3} triple evaluations, over the "
            f"budget of {budget}; use c2_monte_carlo for supports this large"
        )


def _triple_sum(pts: np.ndarray, w: np.ndarray, eps: float) -> float:
    """Ordered-triple sum of w_i w_j w_k / R^2 over distinct indices.

    Triples with a pairwise distance <= eps are dropped (eps = 0 keeps
    everything nondegenerate).  The reduction is a serial loop over the
    smallest index with numpy's pairwise summation inside, so results are
    reproducible bit for bit.
    """
    n = len(w)
    if n < 3:
        return 0.0
    d2 = _pair_sq_dists(pts)
    eps2 = eps * eps
    partials = np.zeros(n - 2)
    for i in range(n - 2):
        ux = pts[i + 1 :, 0] - pts[i, 0]
        uy = pts[i + 1 :, 1] - pts[i, 1]
        di = d2[i, i + 1 :]
        djk = d2[i + 1 :, i + 1 :]
        p = ux[:, None] * uy[None, :]
        q = uy[:, None] * ux[None, :]
        cross = p - q
        noise = _COLLINEAR_RTOL * (np.abs(p) + np.abs(q))
        denom = di[:, None] * di[None, :] * djk
        good = (np.abs(cross) > noise) & (denom > 0.0)
        if eps2 > 0.0:
            good &= (di[:, None] > eps2) & (di[None, :] > eps2) & (djk > eps2)
        num = 4.0 * cross * cross
        grid = np.where(good, num, 0.0) / np.where(good, denom, 1.0)
        ww = w[i + 1 :]
        grid *= ww[:, None]
        grid *= ww[None, :]
        partials[i] = w[i] * grid.sum()
    # each partial covers ordered pairs (j, k) and (k, j) above i, hence *3
    return float(3.0 * partials.sum())


def c2_exact(mu: DiscreteMeasure, budget: int = TRIPLE_BUDGET) -> CurvatureReport:
    """Exact curvature of the measure (all ordered atom triples)."""
    _check_budget(len(mu), budget)
    return CurvatureReport(_triple_sum(mu.points, mu.weights, 0.0), "exact")


def c2_truncated(mu: DiscreteMeasure, epsilon: float, budget: int = TRIPLE_BUDGET) -> CurvatureReport:
    """Curvature restricted to triples with all pairwise distances > epsilon."""
    if epsilon < 0.0:
        raise ValueError(f"epsilon must be nonnegative, got {epsilon}")
    _check_budget(len(mu), budget)
    return CurvatureReport(_triple_sum(mu.points, mu.weights, epsilon), "exact", epsilon=epsilon)


def _kernel_batch(a: np.ndarray, b: np.ndarray, c: np.ndarray, eps: float) -> np.ndarray:
    """Vectorized 1/R^2 over stacked point triples, with the eps cutoff."""
    ux, uy = b[:, 0] - a[:, 0], b[:, 1] - a[:, 1]
    vx, vy = c[:, 0] - a[:, 0], c[:, 1] - a[:, 1]
    wx, wy = c[:, 0] - b[:, 0], c[:, 1] - b[:, 1]
    d_ab = ux * ux + uy * uy
    d_ac = vx * vx + vy * vy
    d_bc = wx * wx + wy * wy
    p = ux * vy
    q = uy * vx
    cross = p - q
    denom = d_ab * d_ac * d_bc
    good = (np.abs(cross) > _COLLINEAR_RTOL * (np.abs(p) + np.abs(q))) & (denom > 0.0)
    if eps > 0.0:
        eps2 = eps * eps
        good &= (d_ab > eps2) & (d_ac > eps2) & (d_bc > eps2)
    return np.where(good, 4.0 * cross * cross, 0.0) / np.where(good, denom, 1.0)


def c2_monte_carlo(
    mu: DiscreteMeasure,
    samples: int,
    seed: int,
    epsilon: float = 0.0,
    batch: int = 1_000_000,
) -> CurvatureReport:
    """Unbiased Monte-Carlo estimate of the curvature triple sum.

    Index triples are drawn i.i.d. proportionally to the weights, so the
    mean of mass^3 / R^2 estimates the full ordered sum (repeated indices
    contribute 0 exactly as in the exact kernel).  Deterministic for a
    fixed seed.
    """
    if mu.is_empty:
        raise ValueError("cannot sample from the empty measure")
    if samples < 1_000:
        raise ValueError(f"need at least 1000 samples, got {samples}")
    pts, w = mu.points, mu.weights
    mass = total_mass(mu)
    prob = w / mass
    rng = np.random.default_rng(seed)
    scale3 = mass**3
    count = 0
    acc = 0.0
    acc_sq = 0.0
    while count < samples:
        m = min(batch, samples - count)
        idx = rng.choice(len(w), size=(m, 3), p=prob)
        vals = scale3 * _kernel_batch(pts[idx[:, 0]], pts[idx[:, 1]], pts[idx[:, 2]], epsilon)
        acc += float(vals.sum())
        acc_sq += float((vals * vals).sum())
        count += m
    mean = acc / samples
    var = max(0.0, (acc_sq - samples * mean * mean) / (samples - 1))
    sem = math.sqrt(var / samples)
    return CurvatureReport(mean, "monte_carlo", epsilon=epsilon, samples=samples, std_error=sem)


def c2_atom_gradients(mu: DiscreteMeasure, budget: int = TRIPLE_BUDGET) -> np.ndarray:
    """Exact gradient d(c2)/d(w_i) of the curvature in the atom weights.

    The ordered sum is trilinear, so the derivative in w_i is three times
    the pair sum over (j, k) of w_j w_k / R^2(p_i, p_j, p_k).
    """
    n = len(mu)
    _check_budget(n, budget)
    pts, w = mu.points, mu.weights
    if n < 3:
        return np.zeros(n)
    d2 = _pair_sq_dists(pts)
    grad = np.zeros(n)
    for i in range(n):
        ux = pts[:, 0] - pts[i, 0]
        uy = pts[:, 1] - pts[i, 1]
        di = d2[i]
        p = ux[:, None] * uy[None, :]
        q = uy[:, None] * ux[None, :]
        cross = p - q
        noise = _COLLINEAR_RTOL * (np.abs(p) + np.abs(q))
        denom = di[:, None] * di[None, :] * d2
        good = (np.abs(cross) > noise) & (denom > 0.0)
        grid = np.where(good, 4.0 * cross * cross, 0.0) / np.where(good, denom, 1.0)
        grid *= w[:, None]
        grid *= w[None, :]
        grad[i] = 3.0 * grid.sum()
    return grad


def c2_atom_gradients_sampled(mu: DiscreteMeasure, samples: int, rng: np.random.Generator) -> np.ndarray:
    """Monte-Carlo estimate of c2_atom_gradients for large supports.

    Samples pairs (j, k) proportionally to the weights and averages the
    kernel against every atom i, sharing the same pair sample across atoms.
    """
    pts, w = mu.points, mu.weights
    n = len(w)
    if n < 3:
        return np.zeros(n)
    mass = total_mass(mu)
    prob = w / mass
    idx = rng.choice(n, size=(samples, 2), p=prob)
    b = pts[idx[:, 0]]
    c = pts[idx[:, 1]]
    grad = np.zeros(n)
    for i in range(n):
        a = np.broadcast_to(pts[i], (samples, 2))
        grad[i] = _kernel_batch(a, b, c, 0.0).mean()
    return 3.0 * mass * mass * grad
