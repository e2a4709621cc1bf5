"""Exact computation engine for rooted cluster algebras."""

from .colimits import (
    Filtration,
    FiniteSeedOracle,
    PathQuiverOracle,
    TriangulationOracle,
    build_filtration,
    check_only_coefficients,
    fan_oracle,
    inclusion_morphism,
    materialize_ball,
    mediating_morphism,
    nest_oracle,
    split_fountain_oracle,
    stable_mutation,
    triangulation_filtration,
)
from .disc import (
    Arc,
    ArcFamily,
    FiniteTriangulation,
    InfiniteTriangulation,
    arcs_cross,
    classify_arc,
    exchangeable_arcs,
    flip_arc,
    limit_arcs,
    seed_from_triangulation,
    triangulation_components,
    validate_triangulation,
)
from .morphisms import (
    ClusterMap,
    IdealReport,
    VerificationReport,
    biadmissible_descendant,
    check_cm1_cm2,
    check_cm3,
    check_ideal_witness,
    check_no_specialization_conditions,
    compose,
    enumerate_biadmissible,
    identity_map,
    image_seed,
    morphism_from_similarity,
)
from .laurent import (
    LaurentPoly,
    VarId,
    format_poly,
    lp_add,
    lp_exact_div,
    lp_has_nonnegative_coefficients,
    lp_mul,
    parse_poly,
)
from .seeds import (
    Seed,
    check_skew_symmetrizable,
    check_similar,
    connected_components,
    coproduct,
    enumerate_cluster_variables,
    enumerate_seeds,
    exchangeably_connected_components,
    full_subseed,
    is_admissible,
    mutate_seed,
    mutate_sequence,
    opposite_seed,
    seed_symmetrizer,
    verify_similarity_bijection,
)

__all__ = [
    "Arc",
    "ArcFamily",
    "ClusterMap",
    "Filtration",
    "FiniteSeedOracle",
    "FiniteTriangulation",
    "IdealReport",
    "InfiniteTriangulation",
    "LaurentPoly",
    "PathQuiverOracle",
    "Seed",
    "TriangulationOracle",
    "VarId",
    "VerificationReport",
    "arcs_cross",
    "biadmissible_descendant",
    "build_filtration",
    "check_cm1_cm2",
    "check_cm3",
    "check_ideal_witness",
    "check_no_specialization_conditions",
    "check_only_coefficients",
    "check_similar",
    "check_skew_symmetrizable",
    "classify_arc",
    "compose",
    "connected_components",
    "coproduct",
    "enumerate_biadmissible",
    "enumerate_cluster_variables",
    "enumerate_seeds",
    "exchangeable_arcs",
    "exchangeably_connected_components",
    "fan_oracle",
    "flip_arc",
    "format_poly",
    "full_subseed",
    "identity_map",
    "image_seed",
    "inclusion_morphism",
    "is_admissible",
    "limit_arcs",
    "lp_add",
    "lp_exact_div",
    "lp_has_nonnegative_coefficients",
    "lp_mul",
    "materialize_ball",
    "mediating_morphism",
    "morphism_from_similarity",
    "mutate_seed",
    "mutate_sequence",
    "nest_oracle",
    "opposite_seed",
    "parse_poly",
    "seed_from_triangulation",
    "seed_symmetrizer",
    "split_fountain_oracle",
    "stable_mutation",
    "triangulation_components",
    "triangulation_filtration",
    "validate_triangulation",
    "verify_similarity_bijection",
]
