"""drlab: a verification laboratory for solvable half-space geometries.

Builds H-type algebra data from real Clifford modules, realizes candidate
level-set functions as exact polynomials over the half-space coordinates,
decides transnormality and the Laplace condition as polynomial identities,
and cross-checks the resulting geometry (geodesic distance law, focal sets,
tube mean curvature) with independent numeric oracles.
"""

from .clifford import (
    CliffordModule,
    build_clifford_module,
    invariant_splitting,
    irreducible_dimension,
    module_from_json_dict,
    module_to_json_dict,
    verify_clifford_relations,
)
from .htype import (
    AlgebraElement,
    SpaceSignature,
    bracket_solvable,
    bracket_vv,
    build_space,
    verify_lie_axioms,
)
from .model import (
    GeodesicPath,
    ModelPoint,
    TangentVector,
    geodesic_flow,
    group_inverse,
    group_multiply,
    identity_point,
    left_invariant_frame,
    left_translate,
    left_translate_diff,
    metric_at,
)
from .poly import Poly, PolyFraction, apply_Di, compose_affine

__version__ = "0.1.0"

__all__ = [
    "AlgebraElement",
    "CliffordModule",
    "GeodesicPath",
    "ModelPoint",
    "Poly",
    "PolyFraction",
    "SpaceSignature",
    "TangentVector",
    "apply_Di",
    "bracket_solvable",
    "bracket_vv",
    "build_clifford_module",
    "build_space",
    "compose_affine",
    "geodesic_flow",
    "group_inverse",
    "group_multiply",
    "identity_point",
    "invariant_splitting",
    "irreducible_dimension",
    "left_invariant_frame",
    "left_translate",
    "left_translate_diff",
    "metric_at",
    "module_from_json_dict",
    "module_to_json_dict",
    "verify_clifford_relations",
    "verify_lie_axioms",
]
