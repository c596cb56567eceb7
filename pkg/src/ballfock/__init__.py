"""Hyperbolic geometry of the complex unit ball and truncated Fock-space models."""

from .ball import (
    BallError,
    FormError,
    MoebiusMap,
    apply,
    as_point,
    comparability_bounds,
    comparability_factor,
    compose,
    involution_at,
    inverse,
    pseudo_distance,
    rigidity_check,
    sharp_comparability_bounds,
)
from .fock import (
    FockOperator,
    NcPoly,
    TruncatedFockBasis,
    creation,
    eval_scalar,
    op_norm,
    poly_to_operator,
    popescu_apply,
    row_norm,
)
from .functions import BallFunction, LinearForm, Precomposed, Product, Scaled, extremal_distance
from .groups import (
    BlaschkeReport,
    GroupElement,
    GroupPresentation,
    Orbit,
    blaschke_report,
    dual_action_eval,
    enumerate_elements,
    orbit_of_origin,
    stabilizer_check,
)
from .spectral import (
    Membership,
    ergodicity_certificate,
    quotient_automorphism_check,
    reduce_dimension,
    spectral_membership,
    vanishing_witness,
)

__version__ = "0.1.0"
