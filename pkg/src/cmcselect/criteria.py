"""Model-selection criteria: the constrained-minimum selector and its rivals.

The selector treats model choice as a constrained optimization: among all
candidate subsets, pick the smallest one whose likelihood-ratio statistic

    lambda(M) = (RSS_M - RSS_full) / sigma2_hat

stays within the threshold kappa = q * F(1 - alpha; q, n - q), breaking
ties by lowest RSS.  Raising alpha tightens kappa and enlarges the chosen
model.  BIC, Mallows Cp (AIC-equivalent here), and adjusted R-squared are
provided for comparison; all four need only the per-size minimum-RSS
table, since each is monotone in RSS at fixed size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import (
    DegenerateFitError,
    DomainError,
    InconsistentStatisticError,
    InfeasibleCandidatesError,
    TooFewRowsError,
)
from .fdist import FParams, f_cdf, f_quantile
from .linalg import Dataset, FitSummary, Mask, fit_subset, full_mask
from .subsets import CandidateSet, PerSizeBest, best_per_size

# submodel RSS may undershoot the full-model RSS by at most this relative slack
_LAMBDA_SLACK = 1e-9


@dataclass(frozen=True)
class CmcConfig:
    """Selector settings: alpha level (default 0.9), candidate set, engine flag."""

    alpha: float = 0.9
    candidates: CandidateSet = field(default_factory=CandidateSet.all_subsets)
    prune: bool = True

    def __post_init__(self) -> None:
        if not (isinstance(self.alpha, (int, float)) and 0.0 <= self.alpha <= 1.0):
            raise DomainError(f"alpha must lie in [0, 1], got {self.alpha!r}")


@dataclass(frozen=True)
class RatePair:
    """(false inactive rate, false active rate), both in [0, 1]."""

    fir: float
    far: float

    def __iter__(self):
        yield self.fir
        yield self.far


@dataclass(frozen=True, eq=False)
class SelectionReport:
    """Outcome of one criterion on one dataset.

    scores maps model size to the criterion value at that size's best
    subset (the lambda statistic for cmc); lambda_ and kappa are None for
    the non-cmc criteria.
    """

    criterion: str
    alpha: float | None
    chosen: Mask
    fit: FitSummary
    lambda_: float | None
    kappa: float | None
    scores: Mapping[int, float]
    per_size: PerSizeBest


def lambda_stat(fit: FitSummary, rss_full: float, sigma2: float) -> float:
    """Likelihood-ratio statistic of a submodel fit against the full model.

    Tiny negative values from rounding clamp to zero; a submodel RSS
    genuinely below the full-model RSS is a consistency violation.
    """
    if sigma2 <= 0.0:
        raise DegenerateFitError(f"sigma2 must be positive, got {sigma2}")
    if fit.rss < rss_full - _LAMBDA_SLACK * rss_full:
        raise InconsistentStatisticError(
            f"submodel rss {fit.rss} fell below full-model rss {rss_full}"
        )
    return max(0.0, (fit.rss - rss_full) / sigma2)


def kappa(alpha: float, q: int, n: int) -> float:
    """Threshold q * F(1 - alpha; q, n - q); 0 at alpha=1, +inf at alpha=0."""
    if not (0.0 <= alpha <= 1.0):
        raise DomainError(f"alpha must lie in [0, 1], got {alpha!r}")
    if n <= q:
        raise DomainError(f"threshold needs n > q, got n={n}, q={q}")
    if alpha == 1.0:
        return 0.0
    if alpha == 0.0:
        return math.inf
    return q * f_quantile(1.0 - alpha, FParams(q, n - q))


def alpha_schedule(n: int, delta: float, q: int) -> float:
    """The decaying alpha level with 1 - alpha_n = P(F(q, n-q) <= n**delta)."""
    if n <= q:
        raise DomainError(f"schedule needs n > q, got n={n}, q={q}")
    if not (delta > 0.0 and math.isfinite(delta)):
        raise DomainError(f"delta must be positive and finite, got {delta!r}")
    return 1.0 - f_cdf(float(n) ** delta, FParams(q, n - q))


def classify(chosen, truth, p: int) -> RatePair:
    """Misclassification rates of a chosen mask against the true active set."""
    chosen = set(chosen)
    truth = set(truth)
    fir = len(truth - chosen) / len(truth) if truth else 0.0
    far = len(chosen - truth) / (p - len(truth)) if p > len(truth) else 0.0
    return RatePair(fir=fir, far=far)


def _sigma2_from_full(data: Dataset, rss_full: float) -> float:
    if data.n <= data.q:
        raise TooFewRowsError(f"criteria need n > q, got n={data.n}, q={data.q}")
    ynorm2 = float(data.y @ data.y)
    if rss_full <= 1e-12 * ynorm2:
        raise DegenerateFitError("full-model residual sum of squares is numerically zero")
    return rss_full / (data.n - data.q)


def _full_fit_stats(data: Dataset) -> tuple[float, float]:
    rss_full = fit_subset(data, full_mask(data.p)).rss
    return rss_full, _sigma2_from_full(data, rss_full)


def _cmc_over_per_size(
    per_size: PerSizeBest, rss_full: float, sigma2: float, kap: float
) -> tuple[int, dict[int, float]]:
    """Smallest size whose best subset is feasible; returns (size, per-size lambdas)."""
    lambdas: dict[int, float] = {}
    chosen_size = -1
    for s in sorted(per_size.entries):
        rss = per_size.entries[s].rss
        if rss < rss_full - _LAMBDA_SLACK * rss_full:
            raise InconsistentStatisticError(
                f"size-{s} rss {rss} fell below full-model rss {rss_full}"
            )
        lam = max(0.0, (rss - rss_full) / sigma2)
        lambdas[s] = lam
        if chosen_size < 0 and lam <= kap:
            chosen_size = s
    if chosen_size < 0:
        raise InfeasibleCandidatesError(
            "no candidate model satisfies lambda <= kappa; "
            "explicit candidate lists must include an adequate model"
        )
    return chosen_size, lambdas


def cmc_select(data: Dataset, config: CmcConfig = CmcConfig()) -> SelectionReport:
    """Constrained-minimum selection at the configured alpha level.

    Returns the per-size best model at the smallest size whose lambda
    statistic is at or below kappa.  alpha=1 yields the full model,
    alpha=0 the intercept-only model.

    Parameters
    ----------
    data : Dataset
    config : CmcConfig

    Returns
    -------
    SelectionReport
        With lambda_, kappa, and the per-size lambda table filled in.
    """
    rss_full, sigma2 = _full_fit_stats(data)
    kap = kappa(config.alpha, data.q, data.n)
    per_size = best_per_size(data, config.candidates, prune=config.prune)
    size, lambdas = _cmc_over_per_size(per_size, rss_full, sigma2, kap)
    chosen = per_size.entries[size].mask
    return SelectionReport(
        criterion="cmc",
        alpha=config.alpha,
        chosen=chosen,
        fit=fit_subset(data, chosen),
        lambda_=lambdas[size],
        kappa=kap,
        scores=lambdas,
        per_size=per_size,
    )


def _pick_by_score(per_size: PerSizeBest, scores: dict[int, float], minimize: bool) -> int:
    best_size = -1
    best_val = math.inf if minimize else -math.inf
    for s in sorted(scores):
        v = scores[s]
        better = v < best_val if minimize else v > best_val
        if better:
            best_val = v
            best_size = s
        elif v == best_val and best_size >= 0:
            # exact score tie across sizes: fall back to the mask rule
            if per_size.entries[s].mask < per_size.entries[best_size].mask:
                best_size = s
    return best_size


def _ic_over_per_size(
    per_size: PerSizeBest, n: int, sigma2: float, tss: float, criterion: str
) -> tuple[int, dict[int, float]]:
    """Best size under an information criterion; returns (size, per-size scores)."""
    if not per_size.entries:
        raise InfeasibleCandidatesError("candidate set produced no usable model")
    scores: dict[int, float] = {}
    for s, entry in per_size.entries.items():
        k = s + 1
        if criterion == "bic":
            if entry.rss <= 0.0:
                raise DegenerateFitError("zero residual sum of squares; BIC undefined")
            scores[s] = n * math.log(entry.rss / n) + k * math.log(n)
        elif criterion == "cp_aic":
            scores[s] = entry.rss / sigma2 - n + 2.0 * k
        else:
            if tss <= 0.0:
                raise DegenerateFitError("constant response; adjusted R-squared undefined")
            scores[s] = 1.0 - (entry.rss / (n - k)) / (tss / (n - 1))
    size = _pick_by_score(per_size, scores, minimize=criterion != "adjr2")
    return size, scores


def _ic_select(
    data: Dataset,
    cands: CandidateSet,
    prune: bool,
    criterion: str,
) -> SelectionReport:
    rss_full, sigma2 = _full_fit_stats(data)
    per_size = best_per_size(data, cands, prune=prune)
    tss = float(np.square(data.y - data.y.mean()).sum())
    size, scores = _ic_over_per_size(per_size, data.n, sigma2, tss, criterion)
    chosen = per_size.entries[size].mask
    return SelectionReport(
        criterion=criterion,
        alpha=None,
        chosen=chosen,
        fit=fit_subset(data, chosen),
        lambda_=None,
        kappa=None,
        scores=scores,
        per_size=per_size,
    )


def bic_select(data: Dataset, cands: CandidateSet | None = None, prune: bool = True) -> SelectionReport:
    """Minimize n*ln(RSS/n) + k*ln(n) with k = size + 1."""
    return _ic_select(data, cands or CandidateSet.all_subsets(), prune, "bic")


def cp_select(data: Dataset, cands: CandidateSet | None = None, prune: bool = True) -> SelectionReport:
    """Minimize RSS/sigma2_hat - n + 2k (Mallows Cp, equivalent to AIC here)."""
    return _ic_select(data, cands or CandidateSet.all_subsets(), prune, "cp_aic")


def adjr2_select(data: Dataset, cands: CandidateSet | None = None, prune: bool = True) -> SelectionReport:
    """Maximize 1 - (RSS/(n-k)) / (TSS/(n-1))."""
    return _ic_select(data, cands or CandidateSet.all_subsets(), prune, "adjr2")
