"""Idempotent ⊞ algebra on R and R^n, limit hulls and B-form separation."""

from .errors import DomainError, InvariantViolation
from .hull import (
    BreakPoint,
    IntermediateSequence,
    PiecewiseHull,
    closure_probe,
    co_infinity,
    combination_set_sample,
    four_term_membership,
    four_term_witness,
    gamma,
    hull_membership,
    intermediate_sequence,
    path_eval,
    sample_hull,
    segment_membership,
    sign_conflict_set,
)
from .oracle import (
    SignedLogReal,
    co_p_sample,
    convergence_rows,
    gamma_p,
    hausdorff_distance,
    holder_sum,
    intermediate_point_p,
)
from .scalar import (
    EXACT,
    Tolerance,
    boxplus,
    lambda_map,
    nary_boxplus,
    residual_index_set,
    smile,
    smile_fold,
    xi,
)
from .separation import (
    BForm,
    GeneratedBSet,
    bform_eval,
    regularization_gap,
    search_separator,
    sublevel_check,
    verify_separator,
)
from .vector import (
    as_vec,
    boxdot,
    inner_product_infty,
    is_copositive,
    orthant_of,
    psi_K,
    semilattice_leq,
    vec_boxplus,
    vec_nary_boxplus,
)

__version__ = "0.1.0"
