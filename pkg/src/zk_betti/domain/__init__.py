"""zk-betti Domain Package."""

from .errors import (
    ZkBettiError,
    ComplexError,
    FieldError,
    GuardExceeded,
    InvariantViolation,
)

from .linalg import (
    FieldKind,
    FieldSpec,
    IntegerMatrix,
    DEFAULT_FIELD,
    rank,
    rank_mod_p,
    rank_rational,
)

from .simplicial import (
    HomologyMethod,
    SimplicialComplex,
    build_complex,
    build_skeleton,
    full_subcomplex,
    boundary_matrix,
    reduced_betti,
    reduced_betti_numbers,
    reduced_euler_characteristic,
    check_complex,
    load_complex,
    dump_complex,
)

from .hochster import (
    BigradedTable,
    bigraded_betti,
    betti_number,
    zk_betti_numbers,
    minimal_non_faces,
    tor_via_taylor,
    structural_violations,
    MAX_TABLE_VERTICES,
    MAX_TAYLOR_GENERATORS,
)

from .sampler import (
    sample_lm,
    sample_stream,
)

from .limit_polys import (
    IntPolynomial,
    limit_poly_f,
    limit_poly_g,
    exact_variance_poly,
    exact_cov_poly,
    eval_poly,
    expected_statistic_variance,
    MAX_ENUMERATED_SIMPLICES,
)

from .experiments import (
    SampleStats,
    estimate_bigraded,
    run_convergence,
    run_variance_scaling,
    run_covariance_check,
    run_structural_audit,
)

from .models import (
    LMParams,
    ExperimentConfig,
    CovarianceConfig,
)

__all__ = [
    "ZkBettiError",
    "ComplexError",
    "FieldError",
    "GuardExceeded",
    "InvariantViolation",
    "FieldKind",
    "FieldSpec",
    "IntegerMatrix",
    "DEFAULT_FIELD",
    "rank",
    "rank_mod_p",
    "rank_rational",
    "HomologyMethod",
    "SimplicialComplex",
    "build_complex",
    "build_skeleton",
    "full_subcomplex",
    "boundary_matrix",
    "reduced_betti",
    "reduced_betti_numbers",
    "reduced_euler_characteristic",
    "check_complex",
    "load_complex",
    "dump_complex",
    "BigradedTable",
    "bigraded_betti",
    "betti_number",
    "zk_betti_numbers",
    "minimal_non_faces",
    "tor_via_taylor",
    "structural_violations",
    "MAX_TABLE_VERTICES",
    "MAX_TAYLOR_GENERATORS",
    "sample_lm",
    "sample_stream",
    "IntPolynomial",
    "limit_poly_f",
    "limit_poly_g",
    "exact_variance_poly",
    "exact_cov_poly",
    "eval_poly",
    "expected_statistic_variance",
    "MAX_ENUMERATED_SIMPLICES",
    "SampleStats",
    "estimate_bigraded",
    "run_convergence",
    "run_variance_scaling",
    "run_covariance_check",
    "run_structural_audit",
    "LMParams",
    "ExperimentConfig",
    "CovarianceConfig",
]
