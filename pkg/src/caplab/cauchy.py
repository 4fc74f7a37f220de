"""Truncated Cauchy transform of a discrete measure as a dense matrix.

The kernel 1/(xi - z) is evaluated between atom pairs whose distance lies
in the annulus (epsilon, 1/epsilon); the matrix acts on the weighted
square-summable space with inner product <f, g> = sum w_i f_i conj(g_i).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .measures import DiscreteMeasure, support_diameter


@dataclass(frozen=True)
class CauchyMatrix:
    measure: DiscreteMeasure
    epsilon: float
    entries: np.ndarray  # complex (n, n), zero diagonal

    def __len__(self) -> int:
        return len(self.measure)


def build_cauchy_matrix(mu: DiscreteMeasure, epsilon: float) -> CauchyMatrix:
    """Matrix K with K[i, j] = w_j / (p_j - p_i) for epsilon < |p_j - p_i| < 1/epsilon."""
    if not epsilon > 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    z = mu.points[:, 0] + 1j * mu.points[:, 1]
    diff = z[None, :] - z[:, None]
    dist = np.abs(diff)
    keep = (dist > epsilon) & (dist < 1.0 / epsilon)
    entries = np.zeros_like(diff)
    np.divide(mu.weights[None, :], diff, out=entries, where=keep)
    entries.setflags(write=False)
    return CauchyMatrix(mu, float(epsilon), entries)


def apply(k: CauchyMatrix, f: np.ndarray) -> np.ndarray:
    """Matrix-vector action (Kf)[i] = sum_j K[i, j] f[j]."""
    f = np.asarray(f)
    if f.shape != (len(k),):
        raise ValueError(f"vector length {f.shape} does not match atom count {len(k)}")
    return k.entries @ f


def energy_of_one(k: CauchyMatrix) -> float:
    """Weighted squared norm of the transform of the constant function 1."""
    if len(k) == 0:
        return 0.0
    out = k.entries @ np.ones(len(k), dtype=complex)
    return float(np.sum(k.measure.weights * (out.real**2 + out.imag**2)))


def operator_norm(
    k: CauchyMatrix,
    tol: float = 1e-10,
    max_iter: int = 2000,
    seed: int = 0,
    restarts: int = 3,
) -> float:
    """Largest singular value of K with respect to the weighted inner product.

    Power iteration on the weighted adjoint composition, converged when
    successive Rayleigh quotients agree to a relative tol.  Runs a few
    seeded restarts and keeps the max, so a start vector orthogonal to the
    top singular vector cannot silently truncate the result.
    """
    if not tol > 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    n = len(k)
    if n == 0:
        raise ValueError("operator norm of the empty measure is undefined")
    m = k.entries
    if not m.any():
        return 0.0
    w = k.measure.weights
    kh = m.conj().T
    rng = np.random.default_rng(seed)
    best = 0.0
    for _ in range(restarts):
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        rho_prev = math.inf
        rho = 0.0
        converged = False
        for _ in range(max_iter):
            kv = m @ v
            num = float(np.sum(w * (kv.real**2 + kv.imag**2)))
            den = float(np.sum(w * (v.real**2 + v.imag**2)))
            if den == 0.0 or num == 0.0:
                rho = 0.0
                converged = True
                break
            rho = num / den
            if abs(rho - rho_prev) <= tol * rho:
                converged = True
                break
            rho_prev = rho
            v = (kh @ (w * kv)) / w
            v /= math.sqrt(float(np.sum(w * (v.real**2 + v.imag**2))))
        if not converged:
            warnings.warn(
                f"power iteration hit max_iter={max_iter} before reaching tol={tol}",
                RuntimeWarning,
                stacklevel=2,
            )
        best = max(best, math.sqrt(rho))
    return best


def epsilon_decade_grid(mu: DiscreteMeasure) -> list[float]:
    """Truncation grid {h, 10h, ...} capped at the support diameter.

    A discrete measure cannot resolve scales below its mesh, so the grid
    starts at resolution_h; values at or beyond the diameter are replaced
    by the diameter itself.
    """
    h = mu.resolution_h
    diam = support_diameter(mu)
    if diam <= h:
        return [h]
    grid = []
    e = h
    while e < diam:
        grid.append(e)
        e *= 10.0
    grid.append(diam)
    return grid
