"""Seeded experiments checking the package's inequalities and scaling laws.

Every experiment is a pure function of its parameters and seed, returns an
ExperimentResult whose records reproduce bit for bit, and serializes to
JSON (full records) and CSV (one row per record) with the content hash
embedded in the file names.  Fitted constants are frozen here after a
one-off calibration run and asserted on disjoint inputs, so no experiment
can trivially satisfy its own band.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .capacity import lower_bound_curvature, upper_bound
from .cauchy import build_cauchy_matrix, energy_of_one, epsilon_decade_grid, operator_norm
from .curvature import TRIPLE_BUDGET, c2_exact, c2_monte_carlo, c2_truncated
from .generators import BeadChain, StaircaseFamily, bead_chain_on_line, cantor_corner, david_semmes_ex1
from .geometry import CircleArc, Disc, Point
from .measures import (
    DiscreteMeasure,
    arc_length_measure,
    growth_constant,
    restrict,
    sum_measures,
    total_mass,
)

# ---------------------------------------------------------------------------
# Frozen constants.  Calibrated once on the calibration corpus / calibration
# configurations and then fixed; the acceptance suite asserts them on
# disjoint evaluation inputs.

# Energy identity: |energy_of_one - c2_eps/6| <= KAPPA * growth^2 * mass.
# Calibration maximum was 0.36 (ratios converge near 0.40 under mesh
# refinement), frozen with headroom.
ENERGY_RESIDUAL_KAPPA = 0.6

# Staircase energy probe: energy * 4^{N_k} / gap_k stays above this floor
# (calibration minimum 0.0122 at two atoms per square side).
NORMALIZED_ENERGY_FLOOR = 0.008

# Staircase control runs (constant gaps): max/min of the norm lower bounds
# (calibration ratio 1.04).
CONTROL_NORM_BAND = 1.3

# Declared constant for certified violations of mass(B) <= C0 * gamma(B & E);
# empirical ratios against the certified upper bound sit near 2 on the
# calibration families.
MAINC_C0_DECLARED = 8.0

# Almost-additivity floor for the asserted (non-exploratory) separation range
# lam >= 1.1; calibration ratios sit above 0.3.
ALMADD_RATIO_FLOOR = 0.1


@dataclass
class ExperimentResult:
    name: str
    parameters: dict
    records: list[dict]
    summary: dict
    passed: bool | None  # None: exploratory run with no pass/fail semantics
    seed: int

    def payload(self) -> dict:
        return {
            "name": self.name,
            "parameters": self.parameters,
            "records": self.records,
            "summary": self.summary,
            "passed": self.passed,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.payload(), sort_keys=True)

    def content_hash(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()

    def write(self, out_dir) -> tuple[Path, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        stem = f"{self.name}_seed{self.seed}_{self.content_hash()[:12]}"
        json_path = out / f"{stem}.json"
        csv_path = out / f"{stem}.csv"
        json_path.write_text(self.to_json() + "\n")
        with open(csv_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            if self.records:
                keys = list(self.records[0].keys())
                writer.writerow(keys)
                for rec in self.records:
                    writer.writerow([_csv_cell(rec.get(k)) for k in keys])
        return json_path, csv_path


def _csv_cell(v):
    if isinstance(v, float):
        return repr(v)
    return v


# ---------------------------------------------------------------------------
# Chain tail bound


def marcinkiewicz_sums(radii: np.ndarray, masses: np.ndarray) -> tuple[float, float]:
    """The two ordered tail sums S1 = sum_j m_j sum_{k>j} m_k^2/(r_j+...+r_k)^2.

    S2 is the same sum after reversing the chain.  Both stay below the total
    mass whenever every part mass is at most its radius.
    """
    radii = np.asarray(radii, dtype=float)
    masses = np.asarray(masses, dtype=float)

    def one_sided(r, m):
        prefix = np.concatenate([[0.0], np.cumsum(r)])
        # denom[j, k] = r_j + ... + r_k for k >= j
        denom = prefix[None, 1:] - prefix[:-1, None]
        with np.errstate(divide="ignore"):
            grid = m[:, None] * (m[None, :] ** 2) / denom**2
        return float(np.sum(np.triu(grid, k=1)))

    return one_sided(radii, masses), one_sided(radii[::-1], masses[::-1])


def marcinkiewicz_check(chain: BeadChain) -> ExperimentResult:
    """Checks both ordered tail sums of the chain against the total mass."""
    radii = np.array([d.radius for d in chain.discs])
    masses = np.array([total_mass(p) for p in chain.parts])
    s1, s2 = marcinkiewicz_sums(radii, masses)
    total = float(masses.sum())
    rec = {"n_beads": len(radii), "s1": s1, "s2": s2, "total_mass": total, "lam": chain.lam}
    passed = s1 <= total and s2 <= total
    return ExperimentResult(
        "marcinkiewicz_check",
        {"n_beads": len(radii)},
        [rec],
        {"s1_over_mass": s1 / total, "s2_over_mass": s2 / total},
        passed,
        seed=0,
    )


def marcinkiewicz_random_trials(trials: int, seed: int, max_beads: int = 200) -> ExperimentResult:
    """Random radii in [0.1, 10] and masses below the radii; counts violations."""
    rng = np.random.default_rng(seed)
    records = []
    violations = 0
    worst = 0.0
    for t in range(trials):
        n = int(rng.integers(2, max_beads + 1))
        radii = 0.1 + 9.9 * rng.random(n)
        masses = radii * rng.random(n)
        s1, s2 = marcinkiewicz_sums(radii, masses)
        total = float(masses.sum())
        ratio = max(s1, s2) / total
        worst = max(worst, ratio)
        if ratio > 1.0:
            violations += 1
            records.append({"trial": t, "n_beads": n, "s1": s1, "s2": s2, "total_mass": total})
    records.append({"trial": -1, "n_beads": 0, "s1": 0.0, "s2": 0.0, "total_mass": 0.0})
    return ExperimentResult(
        "marcinkiewicz_random",
        {"trials": trials, "max_beads": max_beads},
        records,
        {"violations": violations, "worst_ratio": worst},
        violations == 0,
        seed,
    )


# ---------------------------------------------------------------------------
# Curvature almost-superadditivity over a chain


def main_lemma_check(
    chain: BeadChain,
    budget: int = TRIPLE_BUDGET,
    mc_samples: int = 500_000,
    seed: int = 0,
) -> ExperimentResult:
    """Cross-part curvature per unit mass of a chain; nonnegative and bounded.

    rho = (c2(total) - sum_j c2(part_j)) / mass counts only triples spanning
    several parts, each contributing a nonnegative kernel value, so rho < 0
    certifies a bug rather than a failed inequality.
    """
    radii = [d.radius for d in chain.discs]
    for p, r in zip(chain.parts, radii):
        if total_mass(p) > r * (1.0 + 1e-12):
            raise ValueError("chain violates the mass <= radius hypothesis")
    mu = sum_measures(chain.parts)
    n = len(mu)
    if n**3 <= budget:
        rep = c2_exact(mu, budget)
    else:
        rep = c2_monte_carlo(mu, mc_samples, seed)
    parts_sum = float(sum(c2_exact(p).value for p in chain.parts))
    mass = total_mass(mu)
    rho = (rep.value - parts_sum) / mass
    slack = 3.0 * rep.std_error / mass + 1e-12 * max(1.0, rep.value / mass)
    rec = {
        "n_beads": len(chain.parts),
        "atoms": n,
        "lam": chain.lam,
        "c2_total": rep.value,
        "c2_parts_sum": parts_sum,
        "mass": mass,
        "rho": rho,
        "estimator": rep.estimator,
        "std_error": rep.std_error,
    }
    return ExperimentResult(
        "main_lemma_check",
        {"n_beads": len(chain.parts), "lam": chain.lam},
        [rec],
        {"rho": rho},
        rho >= -slack,
        seed,
    )


def main_lemma_profile(
    sizes: Sequence[int],
    trials: int,
    lam: float = 2.0,
    atoms_per_part: int = 8,
    radius_range: tuple[float, float] = (0.5, 2.0),
    band: float = 2.5,
    seed: int = 0,
) -> ExperimentResult:
    """rho(N) across chain sizes and seeds, with the boundedness band check.

    Per trial, rho must be nonnegative for every size and its maximum may
    not exceed band times the value at the smallest size.
    """
    sizes = sorted(sizes)
    records = []
    passed = True
    for t in range(trials):
        rng = np.random.default_rng(seed + 7919 * t)
        rhos = {}
        for n_beads in sizes:
            radii = radius_range[0] + (radius_range[1] - radius_range[0]) * rng.random(n_beads)
            chain = bead_chain_on_line(
                radii, lam, "point_cloud", seed=seed + 104729 * t + n_beads, atoms_per_part=atoms_per_part
            )
            res = main_lemma_check(chain, seed=seed)
            rho = res.summary["rho"]
            rhos[n_beads] = rho
            records.append({"trial": t, "n_beads": n_beads, "rho": rho})
            passed = passed and res.passed
        ratio = max(rhos.values()) / rhos[sizes[0]]
        records.append({"trial": t, "n_beads": -1, "rho": ratio})
        passed = passed and ratio <= band
    return ExperimentResult(
        "main_lemma_profile",
        {"sizes": list(sizes), "trials": trials, "lam": lam, "band": band},
        records,
        {"trials": trials},
        passed,
        seed,
    )


# ---------------------------------------------------------------------------
# Good-index selection (tail-sum threshold keeps most of the capacity)


def good_index_core(
    centers: np.ndarray, radii: np.ndarray, gammas: np.ndarray, lam: float
) -> tuple[np.ndarray, float, np.ndarray]:
    """Interaction loads g_i, the fitted load constant, and the kept-index mask.

    g_i sums r_j * gamma_j over the squared distances between the dilated
    discs lam' D; the fitted constant is sum g_i gamma_i / sum gamma_j, and
    indices with g_i at most ten times it are kept.  By that choice the
    dropped indices carry at most a tenth of the capacity sum.
    """
    lamp = (1.0 + lam) / 2.0
    cx = centers[:, 0]
    cy = centers[:, 1]
    dist = np.hypot(cx[:, None] - cx[None, :], cy[:, None] - cy[None, :]) - lamp * (
        radii[:, None] + radii[None, :]
    )
    if np.any(dist[~np.eye(len(radii), dtype=bool)] <= 0.0):
        raise ValueError("dilated discs touch; the chain is not separated enough")
    with np.errstate(divide="ignore"):
        terms = (radii[None, :] * gammas[None, :]) / dist**2
    np.fill_diagonal(terms, 0.0)
    g = terms.sum(axis=1)
    gamma_sum = float(gammas.sum())
    fitted = float(np.sum(g * gammas)) / gamma_sum if gamma_sum > 0 else 0.0
    kept = g <= 10.0 * fitted
    return g, fitted, kept


def good_index_selection(chain: BeadChain, gammas: Sequence[float] | None = None) -> ExperimentResult:
    """Mass-retention check of the interaction-load threshold on a chain."""
    if gammas is None:
        if chain.part_capacities is None:
            raise ValueError("chain has no exact part capacities; pass gammas explicitly")
        gammas = [c.value for c in chain.part_capacities]
    centers = np.array([[d.center.x, d.center.y] for d in chain.discs])
    radii = np.array([d.radius for d in chain.discs])
    gam = np.asarray(gammas, dtype=float)
    g, fitted, kept = good_index_core(centers, radii, gam, chain.lam)
    retention = float(gam[kept].sum() / gam.sum())
    rec = {
        "n_beads": len(radii),
        "lam": chain.lam,
        "fitted_load": fitted,
        "kept": int(kept.sum()),
        "retention": retention,
    }
    return ExperimentResult(
        "good_index_selection",
        {"n_beads": len(radii), "lam": chain.lam},
        [rec],
        {"retention": retention},
        retention >= 0.9,
        seed=0,
    )


def good_index_random_trials(trials: int, seed: int, max_beads: int = 50) -> ExperimentResult:
    """Random separated chains; retention must reach 9/10 every time."""
    rng = np.random.default_rng(seed)
    records = []
    violations = 0
    worst = 1.0
    for t in range(trials):
        n = int(rng.integers(1, max_beads + 1))
        lam = 1.2 + 1.8 * rng.random()
        radii = np.exp(rng.uniform(math.log(0.1), math.log(10.0), n))
        xs = np.zeros(n)
        for j in range(1, n):
            xs[j] = xs[j - 1] + lam * (radii[j - 1] + radii[j]) * (1.05 + rng.random())
        gammas = radii * (0.1 + 0.9 * rng.random(n))
        centers = np.column_stack([xs, np.zeros(n)])
        _, fitted, kept = good_index_core(centers, radii, gammas, lam)
        retention = float(gammas[kept].sum() / gammas.sum())
        worst = min(worst, retention)
        if retention < 0.9:
            violations += 1
            records.append({"trial": t, "n_beads": n, "lam": lam, "retention": retention})
    records.append({"trial": -1, "n_beads": 0, "lam": 0.0, "retention": worst})
    return ExperimentResult(
        "good_index_random",
        {"trials": trials, "max_beads": max_beads},
        records,
        {"violations": violations, "worst_retention": worst},
        violations == 0,
        seed,
    )


# ---------------------------------------------------------------------------
# Mass-versus-capacity profile over sampled discs


def _disc_sampler(
    measure: DiscreteMeasure,
    seed: int,
    max_centers: int = 10_000,
    radii_per_decade: int = 20,
    max_discs: int = 300,
) -> list[Disc]:
    """Centers at atoms plus pairwise midpoints, radii on a geometric grid."""
    pts = measure.points
    n = len(pts)
    rng = np.random.default_rng(seed)
    centers = [tuple(p) for p in pts]
    if n >= 2:
        k = min(n * (n - 1) // 2, max(0, max_centers - n))
        ii = rng.integers(0, n, size=2 * k)
        jj = rng.integers(0, n, size=2 * k)
        mids = (pts[ii] + pts[jj]) / 2.0
        centers.extend(tuple(m) for m, a, b in zip(mids, ii, jj) if a != b)
        centers = centers[:max_centers]
    h = measure.resolution_h
    from .measures import support_diameter

    diam = max(support_diameter(measure), 2.0 * h)
    decades = math.log10(diam / h)
    n_radii = max(2, int(math.ceil(decades * radii_per_decade)))
    radii = np.geomspace(h, diam, n_radii)
    discs = [Disc(Point(*c), float(r)) for c in centers for r in radii]
    if len(discs) > max_discs:
        idx = rng.choice(len(discs), size=max_discs, replace=False)
        discs = [discs[i] for i in sorted(idx)]
    return discs


def mainc_check(
    parts: Sequence[DiscreteMeasure],
    measure: DiscreteMeasure | None = None,
    seed: int = 0,
    c0_declared: float = MAINC_C0_DECLARED,
    lb_iterations: int = 20,
    max_discs: int = 120,
) -> ExperimentResult:
    """Mass-versus-capacity comparison over sampled discs.

    For each sampled disc B, compares mass(B) against the capacity bounds
    of the restricted sample: the empirical constant is the worst
    mass/lower-bound ratio, while a violation is certified only when the
    mass exceeds c0_declared times the certified upper bound.
    """
    parts = list(parts)
    mu = sum_measures(parts) if measure is None else measure
    discs = _disc_sampler(mu, seed, max_discs=max_discs)
    records = []
    empirical = 0.0
    violations = 0
    for bi, b in enumerate(discs):
        cloud = restrict(mu, b)
        mass_b = total_mass(cloud)
        if len(cloud) == 0:
            continue
        low, _ = lower_bound_curvature(cloud, iterations=lb_iterations, seed=seed)
        up = upper_bound(cloud, seed)
        ratio = mass_b / low if low > 0.0 else math.inf
        empirical = max(empirical, ratio)
        certified = up > 0.0 and mass_b > c0_declared * up
        if certified:
            violations += 1
        records.append(
            {
                "disc": bi,
                "radius": b.radius,
                "mass": mass_b,
                "gamma_lower": low,
                "gamma_upper": up,
                "ratio": ratio,
                "certified_violation": certified,
            }
        )
    return ExperimentResult(
        "mainc_check",
        {"n_parts": len(parts), "c0_declared": c0_declared, "max_discs": max_discs},
        records,
        {"empirical_c0": empirical, "violations": violations},
        violations == 0,
        seed,
    )


# ---------------------------------------------------------------------------
# Almost additivity of the capacity over a chain


def almost_additivity_check(
    chains: Sequence[BeadChain],
    lb_iterations: int = 30,
    seed: int = 0,
    exploratory_below: float = 1.1,
) -> ExperimentResult:
    """Union lower bound against the exact part-capacity sum, per chain.

    Chains with separation below exploratory_below are recorded but never
    asserted (the tight-separation regime is an open exploration); others
    must keep the ratio above the frozen floor.
    """
    records = []
    asserted = []
    for chain in chains:
        if chain.part_capacities is None:
            raise ValueError("almost additivity needs parts with exact or proxy capacities")
        gamma_sum = float(sum(c.value for c in chain.part_capacities))
        union = sum_measures(chain.parts)
        low, _ = lower_bound_curvature(union, iterations=lb_iterations, seed=seed)
        ratio = low / gamma_sum
        exploratory = chain.lam < exploratory_below
        records.append(
            {
                "lam": chain.lam,
                "n_beads": len(chain.parts),
                "gamma_sum": gamma_sum,
                "union_lower": low,
                "ratio": ratio,
                "exploratory": exploratory,
                "proxy_capacities": any(c.comparable_only for c in chain.part_capacities),
            }
        )
        if not exploratory:
            asserted.append(ratio)
    passed = None if not asserted else all(r >= ALMADD_RATIO_FLOOR for r in asserted)
    summary = {"min_asserted_ratio": min(asserted) if asserted else None, "floor": ALMADD_RATIO_FLOOR}
    return ExperimentResult(
        "almost_additivity_check",
        {"n_chains": len(records), "exploratory_below": exploratory_below},
        records,
        summary,
        passed,
        seed,
    )


# ---------------------------------------------------------------------------
# Staircase operator-norm divergence


def _restrict_square(mu: DiscreteMeasure, square: tuple[float, float, float]) -> DiscreteMeasure:
    x0, y0, side = square
    m = (
        (mu.points[:, 0] >= x0)
        & (mu.points[:, 0] <= x0 + side)
        & (mu.points[:, 1] >= y0)
        & (mu.points[:, 1] <= y0 + side)
    )
    return DiscreteMeasure(mu.points[m], mu.weights[m], mu.resolution_h, mu.label)


def opnorm_divergence(gaps: Sequence[int], atoms_per_side: int = 2, seed: int = 0) -> ExperimentResult:
    """Energy of the chain-square indicators under the truncated transform.

    Builds the staircase family for the given stage gaps (without the
    unit-square cloud, which only does capacity bookkeeping and would
    drown the top-level energy at this resolution), and for each chain
    square reports the energy, the normalized energy
    energy * 4^{N_k} / gap_k, and the operator-norm lower bound
    sqrt(energy/mass).  Increasing gaps must push the norm bound strictly
    upward; constant gaps must stay inside the frozen band.
    """
    gaps = [int(g) for g in gaps]
    if not gaps or any(g < 1 for g in gaps):
        raise ValueError("need positive stage gaps")
    nk = [0]
    for g in gaps:
        nk.append(nk[-1] + g)
    family = david_semmes_ex1(nk, atoms_per_side=atoms_per_side)
    stair = sum_measures(family.parts[1:])
    eps = (4.0 ** (-nk[-1]) / atoms_per_side) / 2.0
    records = []
    norm_bounds = []
    normalized = []
    for k, gap in enumerate(gaps):
        muk = _restrict_square(stair, family.chain_squares[k])
        energy = energy_of_one(build_cauchy_matrix(muk, eps))
        mass = total_mass(muk)
        nb = math.sqrt(energy / mass)
        nv = energy * 4.0 ** nk[k] / gap
        norm_bounds.append(nb)
        normalized.append(nv)
        records.append(
            {
                "k": k,
                "depth": nk[k],
                "gap": gap,
                "atoms": len(muk),
                "mass": mass,
                "energy": energy,
                "normalized_energy": nv,
                "norm_lower_bound": nb,
            }
        )
    increasing_gaps = all(b > a for a, b in zip(gaps, gaps[1:]))
    floor_ok = all(v >= NORMALIZED_ENERGY_FLOOR for v in normalized)
    if increasing_gaps:
        passed = floor_ok and all(b > a for a, b in zip(norm_bounds, norm_bounds[1:]))
    else:
        passed = floor_ok and max(norm_bounds) <= CONTROL_NORM_BAND * min(norm_bounds)
    return ExperimentResult(
        "opnorm_divergence",
        {"gaps": gaps, "atoms_per_side": atoms_per_side, "floor": NORMALIZED_ENERGY_FLOOR},
        records,
        {
            "norm_bounds": norm_bounds,
            "normalized_energies": normalized,
            "increasing_gaps": increasing_gaps,
        },
        passed,
        seed,
    )


# ---------------------------------------------------------------------------
# Uniform boundedness of the transform over a family


def cauchy_independence_check(
    parts: Sequence[DiscreteMeasure],
    eps_grid: Sequence[float] | None = None,
    tol: float = 1e-8,
    seed: int = 0,
) -> ExperimentResult:
    """Largest part norm, the total norm, and their ratio (report only)."""
    parts = list(parts)
    if not parts:
        raise ValueError("need at least one part")
    total = sum_measures(parts)
    grid = list(eps_grid) if eps_grid is not None else epsilon_decade_grid(total)
    part_norms = []
    for p in parts:
        part_norms.append(max(operator_norm(build_cauchy_matrix(p, e), tol, seed=seed) for e in grid))
    total_norm = max(operator_norm(build_cauchy_matrix(total, e), tol, seed=seed) for e in grid)
    max_part = max(part_norms)
    ratio = total_norm / max_part if max_part > 0.0 else math.inf
    records = [
        {"part": i, "norm": v, "atoms": len(p)} for i, (v, p) in enumerate(zip(part_norms, parts))
    ]
    records.append({"part": -1, "norm": total_norm, "atoms": len(total)})
    return ExperimentResult(
        "cauchy_independence_check",
        {"n_parts": len(parts), "eps_grid": [float(e) for e in grid]},
        records,
        {"max_part_norm": max_part, "total_norm": total_norm, "independence_ratio": ratio},
        None,
        seed,
    )


# ---------------------------------------------------------------------------
# Energy identity with the frozen residual constant


def calibration_corpus() -> list[tuple[str, DiscreteMeasure]]:
    """Measures the residual constant was fitted on."""
    chain = bead_chain_on_line([1.0] * 5, 2.0, "segment", seed=1, atoms_per_part=12)
    return [
        ("segment4_64", arc_length_measure(((-2.0, 0.0), (2.0, 0.0)), 64)),
        ("segment1_32", arc_length_measure(((0.0, 0.0), (1.0, 0.0)), 32)),
        ("circle1_64", arc_length_measure(CircleArc(Point(0.0, 0.0), 1.0), 64)),
        ("circle05_32", arc_length_measure(CircleArc(Point(0.5, 0.5), 0.5), 32)),
        ("cantor2", cantor_corner(2).measure),
        ("cantor3", cantor_corner(3).measure),
        ("beads5_segment", sum_measures(chain.parts)),
    ]


def evaluation_corpus() -> list[tuple[str, DiscreteMeasure]]:
    """Disjoint measures the frozen constant is asserted on."""
    tilt = 0.5
    chain_a = bead_chain_on_line([0.5, 1.5, 1.0, 2.0, 0.8, 1.2], 1.5, "circle", seed=7, atoms_per_part=10)
    chain_b = bead_chain_on_line([1.0] * 8, 3.0, "segment", seed=9, atoms_per_part=8)
    return [
        ("cantor4", cantor_corner(4).measure),
        (
            "segment2_48_rotated",
            arc_length_measure(((0.0, 0.0), (2.0 * math.cos(tilt), 2.0 * math.sin(tilt))), 48),
        ),
        ("circle2_96", arc_length_measure(CircleArc(Point(-1.0, 3.0), 2.0), 96)),
        ("beads6_circle", sum_measures(chain_a.parts)),
        ("beads8_segment_lam3", sum_measures(chain_b.parts)),
        ("segment4_128", arc_length_measure(((-2.0, 0.0), (2.0, 0.0)), 128)),
    ]


def energy_identity_check(
    corpus: Sequence[tuple[str, DiscreteMeasure]] | None = None,
    kappa: float = ENERGY_RESIDUAL_KAPPA,
    seed: int = 0,
) -> ExperimentResult:
    """Residual of energy = c2_eps/6 + O(mass) against the frozen constant.

    For every measure and every epsilon in its decade grid, the residual
    |energy - c2_eps/6| must stay below kappa * growth^2 * mass.
    """
    corpus = evaluation_corpus() if corpus is None else list(corpus)
    records = []
    failures = 0
    worst = 0.0
    for name, mu in corpus:
        g = growth_constant(mu).growth_constant
        mass = total_mass(mu)
        budget_bound = kappa * g * g * mass
        for eps in epsilon_decade_grid(mu):
            energy = energy_of_one(build_cauchy_matrix(mu, eps))
            c2e = c2_truncated(mu, eps).value
            residual = abs(energy - c2e / 6.0)
            ratio = residual / budget_bound
            worst = max(worst, ratio)
            ok = residual <= budget_bound
            if not ok:
                failures += 1
            records.append(
                {
                    "measure": name,
                    "epsilon": eps,
                    "energy": energy,
                    "c2_eps_over_6": c2e / 6.0,
                    "residual": residual,
                    "allowed": budget_bound,
                    "ok": ok,
                }
            )
    return ExperimentResult(
        "energy_identity_check",
        {"kappa": kappa, "measures": [name for name, _ in corpus]},
        records,
        {"failures": failures, "worst_ratio": worst},
        failures == 0,
        seed,
    )


def calibrate_energy_residual(corpus: Sequence[tuple[str, DiscreteMeasure]]) -> float:
    """Raw maximum of residual / (growth^2 * mass) over a corpus; used once
    to freeze ENERGY_RESIDUAL_KAPPA."""
    worst = 0.0
    for _, mu in corpus:
        g = growth_constant(mu).growth_constant
        mass = total_mass(mu)
        for eps in epsilon_decade_grid(mu):
            energy = energy_of_one(build_cauchy_matrix(mu, eps))
            c2e = c2_truncated(mu, eps).value
            worst = max(worst, abs(energy - c2e / 6.0) / (g * g * mass))
    return worst


# ---------------------------------------------------------------------------
# Cantor scaling


def cantor_scaling(
    n_values: Sequence[int] = (2, 3, 4, 5),
    lb_iterations: int = 8,
    budget: int = TRIPLE_BUDGET,
    mc_samples: int = 10_000_000,
    band: float = 3.0,
    seed: int = 0,
) -> ExperimentResult:
    """Curvature growth and capacity decay of the corner Cantor iterates.

    c2(mu_n)/n and lower_bound(E_n)*sqrt(n) must each stay inside a
    max/min band of the given ratio across the generations.
    """
    records = []
    c2_over_n = []
    bound_sqrt = []
    for n in n_values:
        cs = cantor_corner(n)
        atoms = len(cs.measure)
        if atoms**3 <= budget:
            rep = c2_exact(cs.measure, budget)
        else:
            rep = c2_monte_carlo(cs.measure, mc_samples, seed)
        low, _ = lower_bound_curvature(cs.measure, iterations=lb_iterations, seed=seed, checkpoint_every=4)
        c2_over_n.append(rep.value / n)
        bound_sqrt.append(low * math.sqrt(n))
        records.append(
            {
                "n": n,
                "atoms": atoms,
                "c2": rep.value,
                "c2_over_n": rep.value / n,
                "lower_bound": low,
                "bound_times_sqrt_n": low * math.sqrt(n),
                "estimator": rep.estimator,
            }
        )
    ratio_c2 = max(c2_over_n) / min(c2_over_n)
    ratio_bound = max(bound_sqrt) / min(bound_sqrt)
    passed = ratio_c2 <= band and ratio_bound <= band
    return ExperimentResult(
        "cantor_scaling",
        {"n_values": list(n_values), "band": band},
        records,
        {"c2_over_n_band": ratio_c2, "bound_sqrt_band": ratio_bound},
        passed,
        seed,
    )


# ---------------------------------------------------------------------------
# Registry for the command-line runner


@dataclass(frozen=True)
class ExperimentSpec:
    runner: Callable[[dict, int], ExperimentResult]
    description: str
    default_params: dict = field(default_factory=dict)


def _run_cantor_scaling(params: dict, seed: int) -> ExperimentResult:
    return cantor_scaling(seed=seed, **params)


def _run_marcinkiewicz(params: dict, seed: int) -> ExperimentResult:
    return marcinkiewicz_random_trials(params.get("trials", 1000), seed, params.get("max_beads", 200))


def _run_main_lemma(params: dict, seed: int) -> ExperimentResult:
    return main_lemma_profile(
        params.get("sizes", [10, 20, 40, 80]),
        params.get("trials", 5),
        lam=params.get("lam", 2.0),
        atoms_per_part=params.get("atoms_per_part", 8),
        seed=seed,
    )


def _run_good_index(params: dict, seed: int) -> ExperimentResult:
    return good_index_random_trials(params.get("trials", 1000), seed, params.get("max_beads", 50))


def _run_almost_additivity(params: dict, seed: int) -> ExperimentResult:
    lams = params.get("lams", [1.1, 1.5, 2.0, 4.0])
    exploratory = params.get("exploratory_lams", [1.01, 1.001])
    n_beads = params.get("n_beads", 20)
    chains = [
        bead_chain_on_line(
            [1.0] * n_beads,
            lam,
            params.get("part_shape", "segment"),
            seed=seed,
            atoms_per_part=params.get("atoms_per_part", 8),
        )
        for lam in sorted(lams + exploratory, reverse=True)
    ]
    return almost_additivity_check(chains, lb_iterations=params.get("lb_iterations", 30), seed=seed)


def _run_opnorm_divergence(params: dict, seed: int) -> ExperimentResult:
    return opnorm_divergence(params.get("gaps", [2, 3, 4]), params.get("atoms_per_side", 2), seed)


def _run_energy_identity(params: dict, seed: int) -> ExperimentResult:
    corpus = calibration_corpus() if params.get("corpus") == "calibration" else evaluation_corpus()
    return energy_identity_check(corpus, params.get("kappa", ENERGY_RESIDUAL_KAPPA), seed)


def _run_cauchy_independence(params: dict, seed: int) -> ExperimentResult:
    chain = bead_chain_on_line(
        params.get("radii", [1.0] * 6),
        params.get("lam", 2.0),
        params.get("part_shape", "segment"),
        seed=seed,
        atoms_per_part=params.get("atoms_per_part", 10),
    )
    return cauchy_independence_check(chain.parts, seed=seed)


def _run_mainc(params: dict, seed: int) -> ExperimentResult:
    chain = bead_chain_on_line(
        params.get("radii", [1.0] * 5),
        params.get("lam", 2.0),
        "segment",
        seed=seed,
        atoms_per_part=params.get("atoms_per_part", 12),
    )
    return mainc_check(
        chain.parts,
        seed=seed,
        lb_iterations=params.get("lb_iterations", 20),
        max_discs=params.get("max_discs", 120),
    )


EXPERIMENTS: dict[str, ExperimentSpec] = {
    "cantor_scaling": ExperimentSpec(
        _run_cantor_scaling,
        "corner Cantor iterates: c2(mu_n)/n and capacity lower bound * sqrt(n) "
        "stay in fixed bands across generations",
        {"n_values": [2, 3, 4, 5]},
    ),
    "marcinkiewicz_check": ExperimentSpec(
        _run_marcinkiewicz,
        "chain tail bound: S = sum_j m_j sum_{k>j} m_k^2/(r_j+...+r_k)^2 "
        "never exceeds the total mass when every m_j <= r_j",
        {"trials": 1000},
    ),
    "main_lemma_check": ExperimentSpec(
        _run_main_lemma,
        "cross-part curvature per unit mass of separated chains: "
        "c2(total) - sum c2(parts) stays nonnegative and bounded by C * mass",
        {"sizes": [10, 20, 40, 80], "trials": 5},
    ),
    "good_index_selection": ExperimentSpec(
        _run_good_index,
        "interaction-load threshold keeps at least 9/10 of the capacity sum "
        "on random separated chains",
        {"trials": 1000},
    ),
    "almost_additivity_check": ExperimentSpec(
        _run_almost_additivity,
        "union capacity lower bound against the exact part-capacity sum "
        "across separation factors, with an exploratory near-touching sweep",
        {"lams": [1.1, 1.5, 2.0, 4.0]},
    ),
    "opnorm_divergence": ExperimentSpec(
        _run_opnorm_divergence,
        "staircase family: indicator energies certify an operator-norm lower "
        "bound that grows with the stage gaps",
        {"gaps": [2, 3, 4]},
    ),
    "energy_identity_check": ExperimentSpec(
        _run_energy_identity,
        "weighted energy of the transform of 1 equals one sixth of the "
        "truncated curvature up to the frozen growth^2 * mass residual",
        {"corpus": "evaluation"},
    ),
    "cauchy_independence_check": ExperimentSpec(
        _run_cauchy_independence,
        "largest per-part operator norm against the norm of the summed "
        "measure: the empirical independence ratio",
        {},
    ),
    "mainc_check": ExperimentSpec(
        _run_mainc,
        "sampled-disc comparison of mass(B) against capacity bounds of the "
        "restriction; violations only certified through the upper bound",
        {},
    ),
}
