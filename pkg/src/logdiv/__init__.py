"""Boundary divisors and rational class groups of genus-zero logarithmic
mapping spaces to (P^r | H), computed combinatorially and exactly."""

from .class_group import ClassGroupReport, PullbackConvention, class_group_report, relation_matrix
from .enumeration import DivisorCatalog, count_maximal_contact, enumerate_divisor_types, oracle_enumerate
from .exact import RationalMatrix, binomial_ext, lcm_list, partitions_pk, rank, surjections
from .rocket_calculus import RocketData, bp_free_bound, multidegree_check, weights
from .stable_curves import CurveBoundaryDivisor, appendix_basis, boundary_divisors, verify_wdvv_span, wdvv_relation
from .tropical import (
    CombinatorialType,
    TangencyProfile,
    canonical_key,
    classify_role,
    classify_shape,
    cone_dimension,
    stabilize,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "ClassGroupReport",
    "CombinatorialType",
    "CurveBoundaryDivisor",
    "DivisorCatalog",
    "PullbackConvention",
    "RationalMatrix",
    "RocketData",
    "TangencyProfile",
    "appendix_basis",
    "binomial_ext",
    "boundary_divisors",
    "bp_free_bound",
    "canonical_key",
    "class_group_report",
    "classify_role",
    "classify_shape",
    "cone_dimension",
    "count_maximal_contact",
    "enumerate_divisor_types",
    "lcm_list",
    "multidegree_check",
    "oracle_enumerate",
    "partitions_pk",
    "rank",
    "relation_matrix",
    "stabilize",
    "surjections",
    "validate",
    "verify_wdvv_span",
    "wdvv_relation",
    "weights",
]
