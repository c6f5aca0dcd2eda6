"""Rotation-invariant 3xN bipartite states on the two-parameter plane.

The family couples a spin-1 probe to a spin-s partner through the two
rotation-scalar couplings.  This package builds the states, maps the physical
triangle and its partial-transpose geometry, evaluates the directional
overlap distribution, certifies separability with a nearest-separable-state
search, and covers the two-qutrit slice with its second, conjugate line.
"""

from .geometry import (
    LIMIT_EDGES,
    VERTEX_S,
    VERTEX_V,
    VERTEX_W,
    Classification,
    Kind,
    RegionTriangle,
    area_fraction,
    classify,
    edge_lines,
    is_ppt,
    limit_triangle,
    line_distance,
    pt_image,
    region_triangle,
    sample_sv_segment,
    triangle_area,
)
from .isostate import (
    FIDUCIAL_CAP,
    PHYSICAL_TOL,
    RELATIVE_RANK_BOUNDS,
    BlockSpectrum,
    IsoState,
    Point,
    as_point,
    block_spectrum,
    edge_relative_rank_bounds,
    entropy,
    fiducial_spin,
    invariant_state,
    is_physical,
    positivity_conditions,
    purity,
    relative_rank,
    state_rank,
)
from .operators import (
    block_projectors,
    check_two_s,
    heisenberg_coupling,
    is_hermitian,
    partial_transpose,
    quadrupole_coupling,
    quadrupole_tensor,
    spin_matrices,
)
from .qrep import (
    Direction,
    angle_between,
    as_direction,
    coherent_state,
    q_density,
    q_expectation,
    q_min,
    q_positive,
    unit_vector,
)
from .qutrit import (
    CONJ_WERNER_ALPHA_RANGE,
    QUTRIT_VERTICES,
    WERNER_ALPHA_RANGE,
    WERNER_SEPARABLE_ALPHA,
    Su3Generators,
    conjugate_coupling,
    conjugate_werner_state,
    exchange_coupling,
    gell_mann_matrices,
    qutrit_report,
    spin_conjugation,
    su3_generators,
    su3_line_distance,
    swap_expectation,
    swap_operator,
    werner_state,
)
from .separability import (
    SEPARABLE_THRESHOLD,
    DistanceResult,
    FractionScan,
    GlhvResult,
    PointRecord,
    SeparabilityVerdict,
    SeparableEnsemble,
    SolverConfig,
    derive_seed,
    glhv_spin,
    grid_axes,
    is_separable,
    max_product_overlap,
    nearest_separable,
    reoptimize_weights,
    scan_point,
    separable_fraction_scan,
    simplex_projection,
)

__version__ = "0.1.0"

__all__ = [
    "BlockSpectrum",
    "Classification",
    "CONJ_WERNER_ALPHA_RANGE",
    "Direction",
    "DistanceResult",
    "FIDUCIAL_CAP",
    "FractionScan",
    "GlhvResult",
    "IsoState",
    "Kind",
    "LIMIT_EDGES",
    "PHYSICAL_TOL",
    "Point",
    "PointRecord",
    "QUTRIT_VERTICES",
    "RELATIVE_RANK_BOUNDS",
    "RegionTriangle",
    "SEPARABLE_THRESHOLD",
    "SeparabilityVerdict",
    "SeparableEnsemble",
    "SolverConfig",
    "Su3Generators",
    "VERTEX_S",
    "VERTEX_V",
    "VERTEX_W",
    "WERNER_ALPHA_RANGE",
    "WERNER_SEPARABLE_ALPHA",
    "angle_between",
    "area_fraction",
    "as_direction",
    "as_point",
    "block_projectors",
    "block_spectrum",
    "check_two_s",
    "classify",
    "coherent_state",
    "conjugate_coupling",
    "conjugate_werner_state",
    "derive_seed",
    "edge_lines",
    "edge_relative_rank_bounds",
    "entropy",
    "exchange_coupling",
    "fiducial_spin",
    "gell_mann_matrices",
    "glhv_spin",
    "grid_axes",
    "heisenberg_coupling",
    "invariant_state",
    "is_hermitian",
    "is_physical",
    "is_ppt",
    "is_separable",
    "limit_triangle",
    "line_distance",
    "max_product_overlap",
    "nearest_separable",
    "partial_transpose",
    "positivity_conditions",
    "pt_image",
    "purity",
    "q_density",
    "q_expectation",
    "q_min",
    "q_positive",
    "quadrupole_coupling",
    "quadrupole_tensor",
    "qutrit_report",
    "region_triangle",
    "relative_rank",
    "reoptimize_weights",
    "sample_sv_segment",
    "scan_point",
    "separable_fraction_scan",
    "simplex_projection",
    "spin_conjugation",
    "spin_matrices",
    "state_rank",
    "su3_generators",
    "su3_line_distance",
    "swap_expectation",
    "swap_operator",
    "triangle_area",
    "unit_vector",
    "werner_state",
]
