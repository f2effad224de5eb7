"""Exactness certificates for semidefinite relaxations of sparse ridge
regression, with brute-force/continuous oracles and a Gaussian-ensemble
support-recovery harness."""

from .certificates import (
    CertOutcome,
    CertStatus,
    DclCertificate,
    KktReport,
    PwgCertificate,
    canonical_duals,
    certificate_bracket,
    check_dcl,
    check_pwg,
    kkt_variables,
    psd_margin,
    psd_margin_subgradient,
    pwg_witness_to_dcl,
    verify_dcl_certificate,
    verify_kkt,
)
from .ensemble import (
    EnsembleConfig,
    RecoveryCurve,
    TrialRecord,
    aggregate_curves,
    evaluate_trial,
    generate_instance,
    run_sweep,
)
from .linalg import (
    RestrictedRidgeSolution,
    correlation_scores,
    max_eig_sym,
    ridge_kernel_solve,
    ridge_restricted_solve,
    ridge_value_kernel,
    smw_residuals,
)
from .oracles import (
    BruteForceResult,
    PwgValueResult,
    brute_force_l0,
    project_capped_simplex,
    pwg_value,
)
from .problem import DEFAULT_REL_TOL, ProblemInstance, normalize_support
from .rng import SplitMix64, seed_derive

__version__ = "0.1.0"

__all__ = [
    "CertOutcome",
    "CertStatus",
    "DclCertificate",
    "EnsembleConfig",
    "KktReport",
    "ProblemInstance",
    "PwgCertificate",
    "BruteForceResult",
    "PwgValueResult",
    "RecoveryCurve",
    "RestrictedRidgeSolution",
    "SplitMix64",
    "TrialRecord",
    "DEFAULT_REL_TOL",
    "aggregate_curves",
    "brute_force_l0",
    "canonical_duals",
    "certificate_bracket",
    "check_dcl",
    "check_pwg",
    "correlation_scores",
    "evaluate_trial",
    "generate_instance",
    "kkt_variables",
    "max_eig_sym",
    "normalize_support",
    "project_capped_simplex",
    "psd_margin",
    "psd_margin_subgradient",
    "pwg_value",
    "pwg_witness_to_dcl",
    "ridge_kernel_solve",
    "ridge_restricted_solve",
    "ridge_value_kernel",
    "run_sweep",
    "seed_derive",
    "smw_residuals",
    "verify_dcl_certificate",
    "verify_kkt",
]
