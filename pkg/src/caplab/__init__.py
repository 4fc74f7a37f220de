"""Desk-scale laboratory for curvature, truncated Cauchy operators, and
capacity bounds of planar measures."""

from .capacity import (
    CapacityBounds,
    ModelCapacity,
    capacity_bounds,
    capacity_profile,
    exact_capacity_model,
    lower_bound_curvature,
    lower_bound_opnorm,
    upper_bound,
)
from .cauchy import (
    CauchyMatrix,
    apply,
    build_cauchy_matrix,
    energy_of_one,
    epsilon_decade_grid,
    operator_norm,
)
from .curvature import (
    CurvatureReport,
    TRIPLE_BUDGET,
    c2_exact,
    c2_monte_carlo,
    c2_truncated,
)
from .generators import (
    BeadChain,
    CantorSet,
    StaircaseFamily,
    bead_chain_on_line,
    cantor_corner,
    chordarc_envelope,
    covering_number,
    david_semmes_ex1,
    ex2_with_discs,
    grid_prop53,
    lj_circles,
    mobius_transfer,
)
from .geometry import (
    ChordArcCurve,
    CircleArc,
    Disc,
    Point,
    ad_regularity_estimate,
    chord_arc_constant,
    circle_disc_intersection_length,
    circumradius_inv_sq,
    lambda_separated,
    smallest_enclosing_disc,
)
from .measures import (
    DiscreteMeasure,
    GrowthReport,
    add,
    arc_length_measure,
    growth_constant,
    measure_from_json,
    measure_to_json,
    restrict,
    scale,
    total_mass,
)

__version__ = "0.1.0"
