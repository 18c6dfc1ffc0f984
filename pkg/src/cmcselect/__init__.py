"""Best-subset variable selection for Gaussian linear models.

The selector picks the sparsest subset whose likelihood-ratio statistic
against the full model stays below an F-quantile threshold; BIC, Mallows
Cp, and adjusted R-squared are included for comparison, along with a
reproducible Monte Carlo harness for their error rates.
"""

from .criteria import (
    CmcConfig,
    RatePair,
    SelectionReport,
    adjr2_select,
    alpha_schedule,
    bic_select,
    classify,
    cmc_select,
    cp_select,
    kappa,
    lambda_stat,
)
from .datasets import (
    FETCH_INSTRUCTION,
    PROSTATE_ENV,
    PROSTATE_PREDICTORS,
    PROSTATE_RESPONSE,
    PROSTATE_ROWS,
    load_prostate,
    locate_prostate,
)
from .errors import (
    CmcError,
    ConfigError,
    ConstantColumnError,
    DegenerateFitError,
    DimensionMismatchError,
    DomainError,
    InconsistentStatisticError,
    InfeasibleCandidatesError,
    InputError,
    LimitExceededError,
    MissingResponseError,
    NumericalError,
    ParseError,
    RankDeficientError,
    TooFewRowsError,
)
from .fdist import FParams, f_cdf, f_quantile, reg_inc_beta
from .linalg import (
    Dataset,
    FitSummary,
    Mask,
    as_mask,
    fit_subset,
    full_mask,
    full_model_variance,
    standardize,
)
from .simulate import (
    MonteCarloResult,
    Scenario,
    gen_correlated_design,
    gen_response,
    gen_weak_design,
    labels_for,
    rho_to_w,
    run_monte_carlo,
)
from .subsets import CandidateSet, PerSizeBest, SizeEntry, best_per_size, enumerate_fits

__version__ = "0.1.0"

__all__ = [
    "CandidateSet",
    "CmcConfig",
    "CmcError",
    "ConfigError",
    "ConstantColumnError",
    "Dataset",
    "DegenerateFitError",
    "DimensionMismatchError",
    "DomainError",
    "FParams",
    "FitSummary",
    "InconsistentStatisticError",
    "InfeasibleCandidatesError",
    "InputError",
    "LimitExceededError",
    "Mask",
    "MissingResponseError",
    "MonteCarloResult",
    "NumericalError",
    "ParseError",
    "PerSizeBest",
    "RankDeficientError",
    "RatePair",
    "Scenario",
    "SelectionReport",
    "SizeEntry",
    "TooFewRowsError",
    "adjr2_select",
    "alpha_schedule",
    "as_mask",
    "best_per_size",
    "bic_select",
    "classify",
    "cmc_select",
    "cp_select",
    "enumerate_fits",
    "f_cdf",
    "f_quantile",
    "fit_subset",
    "full_mask",
    "full_model_variance",
    "gen_correlated_design",
    "gen_response",
    "gen_weak_design",
    "labels_for",
    "kappa",
    "lambda_stat",
    "load_prostate",
    "locate_prostate",
    "FETCH_INSTRUCTION",
    "PROSTATE_ENV",
    "PROSTATE_PREDICTORS",
    "PROSTATE_RESPONSE",
    "PROSTATE_ROWS",
    "reg_inc_beta",
    "rho_to_w",
    "run_monte_carlo",
    "standardize",
]
