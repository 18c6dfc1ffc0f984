"""Least-squares fitting of predictor subsets with an always-present intercept.

Every model is identified by a mask of predictor indices; the intercept is
implicit and never part of the mask.  Fits go through a Householder QR of
the selected columns, and coefficient vectors come back dense (length p+1,
exact zeros at excluded positions) so downstream consumers never need to
know which columns were dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConstantColumnError,
    DegenerateFitError,
    DimensionMismatchError,
    RankDeficientError,
    TooFewRowsError,
)

Mask = tuple[int, ...]

EMPTY_MASK: Mask = ()

# relative floor on the QR diagonal below which columns count as collinear
RANK_TOL = 1e-10

# relative floor on the full-model RSS below which lambda statistics are undefined
DEGENERATE_TOL = 1e-12


def as_mask(indices, p: int) -> Mask:
    """Canonical mask: sorted, deduplicated predictor indices in [0, p)."""
    mask = tuple(sorted(set(int(i) for i in indices)))
    if mask and not (0 <= mask[0] and mask[-1] < p):
        raise DimensionMismatchError(f"mask indices {mask} out of range for p={p}")
    return mask


def full_mask(p: int) -> Mask:
    """The mask selecting every predictor."""
    return tuple(range(p))


@dataclass(frozen=True, eq=False)
class Dataset:
    """An immutable design matrix, response vector, and predictor names.

    Parameters
    ----------
    X : (n, p) array_like
        Predictor values; the intercept column is implicit, so the
        effective design has q = p+1 columns.
    y : (n,) array_like
        Response values.
    names : sequence of p unique strings, optional
        Defaults to x1..xp.
    """

    X: np.ndarray
    y: np.ndarray
    names: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        X = np.array(self.X, dtype=np.float64)
        y = np.array(self.y, dtype=np.float64)
        if X.ndim != 2:
            raise DimensionMismatchError(f"X must be 2-dimensional, got shape {X.shape}")
        if y.ndim != 1 or y.shape[0] != X.shape[0]:
            raise DimensionMismatchError(
                f"y must be a length-{X.shape[0]} vector, got shape {y.shape}"
            )
        if not np.all(np.isfinite(X)) or not np.all(np.isfinite(y)):
            raise DimensionMismatchError("X and y entries must all be finite")
        n, p = X.shape
        if n <= p:
            raise TooFewRowsError(f"need n > p for the full-model fit, got n={n}, p={p}")
        names = tuple(self.names) if self.names else tuple(f"x{i+1}" for i in range(p))
        if len(names) != p or len(set(names)) != p:
            raise DimensionMismatchError(f"names must be {p} unique labels, got {names!r}")
        X.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "names", names)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    @property
    def q(self) -> int:
        return self.X.shape[1] + 1


@dataclass(frozen=True, eq=False)
class FitSummary:
    """Least-squares result for one mask.

    beta has length q = p+1 with the intercept first and exact zeros at
    every excluded predictor position.
    """

    mask: Mask
    beta: np.ndarray
    rss: float
    df_resid: int

    def __post_init__(self) -> None:
        beta = np.array(self.beta, dtype=np.float64)
        beta.flags.writeable = False
        object.__setattr__(self, "beta", beta)


def fit_subset(data: Dataset, mask) -> FitSummary:
    """Exact least squares over the selected columns plus intercept.

    Parameters
    ----------
    data : Dataset
    mask : iterable of predictor indices

    Returns
    -------
    FitSummary

    Raises
    ------
    RankDeficientError
        If the selected columns plus intercept are collinear beyond
        RANK_TOL (relative, on the QR diagonal).
    """
    mask = as_mask(mask, data.p)
    n = data.n
    k = len(mask)
    if k + 1 > n:
        raise DimensionMismatchError(f"mask of size {k} needs n > {k}, got n={n}")
    A = np.empty((n, k + 1))
    A[:, 0] = 1.0
    if k:
        A[:, 1:] = data.X[:, mask]
    Q, R = np.linalg.qr(A)
    diag = np.abs(np.diag(R))
    if diag.min() <= RANK_TOL * diag.max():
        raise RankDeficientError(f"columns for mask {mask} are collinear beyond tolerance")
    coef = np.linalg.solve(R, Q.T @ data.y)
    resid = data.y - A @ coef
    rss = float(resid @ resid)
    beta = np.zeros(data.q)
    beta[0] = coef[0]
    if k:
        beta[np.asarray(mask) + 1] = coef[1:]
    return FitSummary(mask=mask, beta=beta, rss=rss, df_resid=n - (k + 1))


def full_model_variance(data: Dataset) -> float:
    """Residual mean square of the full model, the sigma-hat-squared all criteria share.

    Raises
    ------
    TooFewRowsError
        If n <= q (no residual degrees of freedom).
    DegenerateFitError
        If the full-model RSS is zero up to DEGENERATE_TOL relative to ||y||^2.
    """
    if data.n <= data.q:
        raise TooFewRowsError(f"variance estimate needs n > q, got n={data.n}, q={data.q}")
    rss_full = fit_subset(data, full_mask(data.p)).rss
    ynorm2 = float(data.y @ data.y)
    if rss_full <= DEGENERATE_TOL * ynorm2:
        raise DegenerateFitError("full-model residual sum of squares is numerically zero")
    return rss_full / (data.n - data.q)


def standardize(data: Dataset) -> Dataset:
    """Center and scale each predictor to sample mean 0 and sd 1 (n-1 denominator).

    The response is left untouched.  Raises ConstantColumnError for any
    zero-variance column.
    """
    means = data.X.mean(axis=0)
    sds = data.X.std(axis=0, ddof=1)
    bad = np.flatnonzero(sds == 0.0)
    if bad.size:
        raise ConstantColumnError(f"constant predictor column(s): {[data.names[i] for i in bad]}")
    return Dataset(X=(data.X - means) / sds, y=data.y, names=data.names)
