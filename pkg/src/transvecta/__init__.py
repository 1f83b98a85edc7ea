"""Generalized shear dynamics on the plane and the torus.

The library studies the pair of maps

    h(x, y) = (x + sigma_inv(y), y)        v(x, y) = (x, sigma(x) + y)

for an odd increasing homeomorphism sigma of the line: the four-cell
partition and its Euclidean algorithms, the free-monoid coding of points,
sigma-continued fractions for the power profiles, exact nested-radical
certification of the square-profile orbit, the curve family carrying the
invariant measure, counting and density experiments, and the torus variant.
The ``transvecta`` console script exposes each area as a subcommand.
"""

from .cfrac import DigitExpansion, digits, golden_quartic_residual, golden_slope, s_ab, slope_point
from .curves import (
    AWordResult,
    NonConvergence,
    WordSpec,
    a_of_word,
    h_sigma_step,
    k_of_word,
    kernel_invariance_check,
    push_h,
    push_v,
)
from .euclid import (
    AccelStep,
    DiagonalOrAxisError,
    EuclidStep,
    RegionLabel,
    accel_step,
    classify,
    contraction_ratio,
    euclid_step,
    pingpong_check,
    u_step,
)
from .experiments import (
    CoverageReport,
    DiscretenessReport,
    MertensReport,
    NdCoverageReport,
    coverage_grid,
    density_coverage,
    discreteness_probe,
    mertens_count,
    mertens_points,
    orbit_coverage_nd,
)
from .sigma import Point2, SigmaMap, flow_scale, h, h_ij, h_inv, iterate, norm1, v, v_ij, v_inv
from .torus import (
    CircleMap,
    RationalTranslationWarning,
    TorusMapPair,
    TrigPoly,
    birkhoff_product_test,
    invariance_histogram_test,
    torus_h,
    torus_h_inv,
    torus_v,
    torus_v_inv,
)
from .tower import (
    InvariantViolation,
    OrbitState,
    TowerContext,
    TowerElement,
    floor_ratio,
    is_square,
    m0_identity_check,
    m0_orbit,
    orbit_verify,
    sqrt_exact,
)
from .words import (
    AxisHit,
    ROTATION_WORD,
    U_WORD,
    encode,
    eval_word,
    invert_word,
    matrix_of_word,
    morphism_check,
    rational_lines,
    words_of_length,
)

__version__ = "0.1.0"

__all__ = [
    "AWordResult",
    "AccelStep",
    "AxisHit",
    "CircleMap",
    "CoverageReport",
    "DiagonalOrAxisError",
    "DigitExpansion",
    "DiscretenessReport",
    "EuclidStep",
    "InvariantViolation",
    "MertensReport",
    "NdCoverageReport",
    "NonConvergence",
    "OrbitState",
    "Point2",
    "RationalTranslationWarning",
    "RegionLabel",
    "ROTATION_WORD",
    "SigmaMap",
    "TorusMapPair",
    "TowerContext",
    "TowerElement",
    "TrigPoly",
    "U_WORD",
    "WordSpec",
    "a_of_word",
    "accel_step",
    "birkhoff_product_test",
    "classify",
    "contraction_ratio",
    "coverage_grid",
    "density_coverage",
    "digits",
    "discreteness_probe",
    "encode",
    "euclid_step",
    "eval_word",
    "flow_scale",
    "floor_ratio",
    "golden_quartic_residual",
    "golden_slope",
    "h",
    "h_ij",
    "h_inv",
    "h_sigma_step",
    "invariance_histogram_test",
    "invert_word",
    "is_square",
    "iterate",
    "k_of_word",
    "kernel_invariance_check",
    "m0_identity_check",
    "m0_orbit",
    "matrix_of_word",
    "mertens_count",
    "mertens_points",
    "morphism_check",
    "norm1",
    "orbit_coverage_nd",
    "orbit_verify",
    "pingpong_check",
    "push_h",
    "push_v",
    "rational_lines",
    "s_ab",
    "slope_point",
    "sqrt_exact",
    "torus_h",
    "torus_h_inv",
    "torus_v",
    "torus_v_inv",
    "u_step",
    "v",
    "v_ij",
    "v_inv",
    "words_of_length",
]
