"""Numerical toolkit for Orlicz-space geometry.

Young-function calculus with exact conjugation, Luxemburg gauge and Orlicz
norms of finitely supported elements, generalized Mazur maps with Hoelder
certificates, convexity/smoothness moduli, and the explicit proper affine
isometric action of a free group on a nested Orlicz sequence space.
"""

from ._kernels import BACKEND_NAME
from .errors import (
    DegenerateInputError,
    DomainError,
    NotInClassError,
    OrliczgeoError,
    ParseError,
    PreconditionError,
    SearchExhaustedError,
    UnsupportedVariantError,
)
from .young import (
    GrowthReport,
    IndicatorBand,
    Interpolated,
    KClassIndices,
    Linear,
    PiecewiseLinearConvex,
    Power,
    ScaledBy,
    ScaledPower,
    YoungFunction,
    almost_invariance_bound,
    check_delta2,
    check_nabla2,
    conjugate,
    format_young,
    interpolate,
    k_class_indices,
    parse_young,
)
from .spaces import (
    CocycleVector,
    SparseVector,
    StepFunction,
    gauge_norm,
    holder_bound,
    nested_gauge_norm,
    normalization_residual,
    orlicz_norm,
    vector_from_json,
    vector_to_json,
)
from .mazur import (
    HolderCertificate,
    WeightedComposition,
    conjugate_isometry,
    holder_certificate,
    mazur_map,
    sandwich_check,
    scalar_bound,
)
from .geometry import (
    AffineAction,
    ModulusEstimate,
    convexity_modulus_estimate,
    fixed_point_search,
    lp_modulus,
    rao_ren_check,
    smoothness_modulus_estimate,
)
from .hyperbolic import (
    HyperbolicData,
    apply_action,
    choose_p,
    cocycle,
    cocycle_norm,
    hyperbolic_data,
    mineyev_f,
    properness_bound,
)

__version__ = "0.1.0"
