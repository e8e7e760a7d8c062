"""Numerical toolkit for linearized stability of Caputo fractional systems
of order alpha in (1, 2): Mittag-Leffler evaluation, sector-based spectral
classification, fractional solvers, contraction-constant construction, and
the audit refuting exponential Mittag-Leffler decay bounds.
"""

from .errors import (
    Blowup,
    ContractionFailed,
    DivergedIterate,
    FracstabError,
    HypothesisFailed,
    IllConditioned,
    NonConvergence,
    OutsideSector,
    SectorViolation,
    StepTooLarge,
    Unstabilized,
)
from .flaw_audit import AuditReport, audit, audit_algebraic_lower, audit_exp_comparison
from .matrix_ml import SpectralBlock, SpectralDecomposition, decompose, gamma_scale, ml_apply
from .mittag_leffler import (
    MLParams,
    MLResult,
    eval_asymptotic,
    eval_series,
    evaluate,
    ml_derivative,
    ml_values,
    ml_values_accurate,
)
from .perron import (
    PerronConstants,
    PerronOperator,
    algebraic_tail_fit,
    build_constants,
    contraction_distances,
    iterate_perron,
    kernel_integral_signed,
    kernel_integral_sup,
)
from .solvers import solve_pc, solve_voc
from .stability import FractionalOrder, SectorReport, classify, sector_test
from .systems import (
    InitialData,
    PolynomialMap,
    SystemSpec,
    Trajectory,
    lipschitz_bound,
)

__all__ = [
    "AuditReport",
    "Blowup",
    "ContractionFailed",
    "DivergedIterate",
    "FracstabError",
    "FractionalOrder",
    "HypothesisFailed",
    "IllConditioned",
    "InitialData",
    "MLParams",
    "MLResult",
    "NonConvergence",
    "OutsideSector",
    "PerronConstants",
    "PerronOperator",
    "PolynomialMap",
    "SectorReport",
    "SectorViolation",
    "SpectralBlock",
    "SpectralDecomposition",
    "StepTooLarge",
    "SystemSpec",
    "Trajectory",
    "Unstabilized",
    "algebraic_tail_fit",
    "audit",
    "audit_algebraic_lower",
    "audit_exp_comparison",
    "build_constants",
    "classify",
    "contraction_distances",
    "decompose",
    "eval_asymptotic",
    "eval_series",
    "evaluate",
    "gamma_scale",
    "iterate_perron",
    "kernel_integral_signed",
    "kernel_integral_sup",
    "lipschitz_bound",
    "ml_apply",
    "ml_derivative",
    "ml_values",
    "ml_values_accurate",
    "sector_test",
    "solve_pc",
    "solve_voc",
]
