"""Certified Picard/Dyson-series evolutions in finite-dimensional algebras."""

from .algebra import (
    Algebra,
    Element,
    complexify,
    diagonal_algebra,
    embed,
    exp,
    im_part,
    invert,
    make_algebra,
    matrix_algebra,
    mul,
    mul_n,
    power,
    re_part,
    sym_mul,
    truncated_poly_algebra,
    upper_triangular_algebra,
)
from .curves import PolyCurve, SampledCurve, curve_norm, integrate, lipschitz_bound, make_curve
from .picard import (
    EvolutionResult,
    PicardState,
    dyson_term,
    evol,
    evolve,
    evolve_real_via_complexification,
    gateaux,
    initial_state,
    inverse_evolution,
    picard_iterates,
    picard_step,
    remainder_bound,
    tau,
)
from .seminorms import (
    MuNormEstimate,
    Seminorm,
    StarCertificate,
    certify_star,
    complexify_seminorm,
    eval_seminorm,
    lrr_opnorm,
    make_seminorm,
    matrix_opnorm,
    max_coeff,
    mu_norm,
    polarization_bound,
    weighted_coeff,
)

__version__ = "0.1.0"
