"""Truncated moment problems on free and commutative semigroups:
kernel feasibility tests and constructive synthesis of representing
operator tuples."""

from ._backend import BACKEND as JACOBI_BACKEND
from .errors import (
    BadKind,
    DepthTooSmall,
    DimensionMismatch,
    EmbedNotIsometric,
    GammaZeroNotIdentity,
    InfeasibleMoments,
    MomtError,
    NonConvergence,
    NotAdmissible,
    NotAdmissiblePair,
    NotHomogeneous,
    NotPSD,
    NotSquare,
    NotStarFeasible,
    NotVectorValued,
    NotWellDefined,
    RelationsFail,
    SigmaTooLarge,
    ToeplitzNotPSD,
    ZeroLambda,
)
from .words import (
    AdmissibleSet,
    FreePolynomial,
    LambdaSpec,
    Word,
    all_commutators,
    commutator_polynomial,
    empty_word,
    full_truncation,
    generator,
    ideal_span_basis,
    is_admissible_pair,
    is_downward_closed,
    multiindex_product,
    multiindex_to_word,
    sigma_pi,
    suffix_closure,
    word_product,
    words_up_to,
)
from .linalg import (
    DEFAULT_TOL,
    EigDecomposition,
    QuotientSpace,
    build_quotient,
    hermitian_eig,
    induced_operator,
    is_psd,
    orth_projector,
    pinv_psd,
    psd_sqrt,
    row_defect,
)
from .kernels import (
    FeasibilityReport,
    MomentMap,
    build_k1,
    build_k2,
    build_k3_k4,
    build_toeplitz_kernel,
    build_vector_primed,
    check_moment_dominance,
    check_star_equality,
    check_toeplitz_psd,
)
from .gns import (
    CpModel,
    SynthesisCertificate,
    shift_matrix,
    synthesize_cp_model,
    synthesize_row_contraction,
    synthesize_star_representation,
    verify_certificate,
)
from .commutative import (
    CommutativeMomentMap,
    lambda_commutation_residual,
    lift_moments,
    solve_commutative_poisson,
    solve_trig_moment,
)
from .quotient import (
    QuotientInstance,
    check_ideal_relations,
    relation_residual,
    solve_quotient_poisson,
    solve_quotient_trig,
)
from .poisson import (
    FockTruncation,
    INSTANCE_KINDS,
    RowTuple,
    SplitMix64,
    default_radius,
    defect_operator,
    generate_instance,
    poisson_kernel,
    poisson_moment,
    truncation_error_bound,
)
from .serialize import (
    InstanceFile,
    canonical_json,
    certificate_to_json,
    instance_from_json,
    instance_to_json,
    report_to_json,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissibleSet",
    "BadKind",
    "CommutativeMomentMap",
    "CpModel",
    "DEFAULT_TOL",
    "DepthTooSmall",
    "DimensionMismatch",
    "EigDecomposition",
    "EmbedNotIsometric",
    "FeasibilityReport",
    "FockTruncation",
    "FreePolynomial",
    "GammaZeroNotIdentity",
    "INSTANCE_KINDS",
    "InfeasibleMoments",
    "InstanceFile",
    "JACOBI_BACKEND",
    "LambdaSpec",
    "MomentMap",
    "MomtError",
    "NonConvergence",
    "NotAdmissible",
    "NotAdmissiblePair",
    "NotHomogeneous",
    "NotPSD",
    "NotSquare",
    "NotStarFeasible",
    "NotVectorValued",
    "NotWellDefined",
    "QuotientInstance",
    "QuotientSpace",
    "RelationsFail",
    "RowTuple",
    "SigmaTooLarge",
    "SplitMix64",
    "SynthesisCertificate",
    "ToeplitzNotPSD",
    "Word",
    "ZeroLambda",
    "all_commutators",
    "build_k1",
    "build_k2",
    "build_k3_k4",
    "build_quotient",
    "build_toeplitz_kernel",
    "build_vector_primed",
    "canonical_json",
    "certificate_to_json",
    "check_ideal_relations",
    "check_moment_dominance",
    "check_star_equality",
    "check_toeplitz_psd",
    "commutator_polynomial",
    "default_radius",
    "defect_operator",
    "empty_word",
    "full_truncation",
    "generate_instance",
    "generator",
    "hermitian_eig",
    "ideal_span_basis",
    "induced_operator",
    "instance_from_json",
    "instance_to_json",
    "is_admissible_pair",
    "is_downward_closed",
    "is_psd",
    "lambda_commutation_residual",
    "lift_moments",
    "multiindex_product",
    "multiindex_to_word",
    "orth_projector",
    "pinv_psd",
    "poisson_kernel",
    "poisson_moment",
    "psd_sqrt",
    "relation_residual",
    "report_to_json",
    "row_defect",
    "shift_matrix",
    "sigma_pi",
    "solve_commutative_poisson",
    "solve_quotient_poisson",
    "solve_quotient_trig",
    "solve_trig_moment",
    "suffix_closure",
    "synthesize_cp_model",
    "synthesize_row_contraction",
    "synthesize_star_representation",
    "truncation_error_bound",
    "verify_certificate",
    "word_product",
    "words_up_to",
]
