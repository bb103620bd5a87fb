"""Verdicts for candidate level-set functions: family construction, exact
transnormality/Laplace residuals, the coefficient recursion, the orthogonal
split check, equivalence matching, and the randomized completeness probe."""

from .families import (
    KIND_CHK,
    KIND_DISTANCE,
    KIND_GENERAL64,
    KIND_HOROSPHERE,
    KIND_SPHERELIKE,
    KIND_TUBE,
    KINDS,
    FamilySpec,
    bracket_split_condition,
    chk_real_tube,
    distance_like,
    family_polynomial,
    general64_from_indices,
    generalized_64,
    horosphere,
    mutant_candidates,
    spherelike,
    spherelike_numerator,
    splitting_sign_matrix,
    tube,
)
from .matcher import FamilyMatch, match_main_theorem_family
from .residuals import (
    LaplaceFit,
    RecursionResult,
    SplitCheckReport,
    TransnormalFit,
    VerificationReport,
    eigenvalue_slope,
    laplace_recursion,
    laplace_residual,
    prop64_check,
    transnormal_residual,
    verify_candidate,
    verify_family,
)
from .sweep import SweepHit, SweepResult, run_sweep, sample_candidate

__all__ = [
    "KIND_CHK",
    "KIND_DISTANCE",
    "KIND_GENERAL64",
    "KIND_HOROSPHERE",
    "KIND_SPHERELIKE",
    "KIND_TUBE",
    "KINDS",
    "FamilySpec",
    "FamilyMatch",
    "LaplaceFit",
    "RecursionResult",
    "SplitCheckReport",
    "SweepHit",
    "SweepResult",
    "TransnormalFit",
    "VerificationReport",
    "bracket_split_condition",
    "chk_real_tube",
    "distance_like",
    "eigenvalue_slope",
    "family_polynomial",
    "general64_from_indices",
    "generalized_64",
    "horosphere",
    "laplace_recursion",
    "laplace_residual",
    "match_main_theorem_family",
    "mutant_candidates",
    "prop64_check",
    "run_sweep",
    "sample_candidate",
    "spherelike",
    "spherelike_numerator",
    "splitting_sign_matrix",
    "transnormal_residual",
    "tube",
    "verify_candidate",
    "verify_family",
]
