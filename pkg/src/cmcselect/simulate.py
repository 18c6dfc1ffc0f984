"""Monte Carlo harness for the error-rate experiments.

Designs are either weakly correlated (i.i.d. standard normal columns) or
factor-correlated: the first `group_size` active columns share one latent
factor and the first `group_size` inactive columns share another, mixed
with weight w chosen so the within-group correlation is a requested rho.
Each replication draws a fresh design and response from a child generator
keyed by (seed, replication index), runs every requested criterion on the
same data, and classifies the chosen mask against the true active set;
results are merged by replication index, so a run is bit-identical for a
fixed (seed, reps) no matter how many worker processes are used.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .criteria import RatePair, _cmc_over_per_size, _ic_over_per_size, classify, kappa
from .errors import ConfigError, DegenerateFitError, DomainError, RankDeficientError
from .linalg import Dataset
from .subsets import SUBSET_LIMIT_DEFAULT, CandidateSet, best_per_size

CRITERIA = ("adjr2", "cp_aic", "bic", "cmc")

# reference correlated shape (p, p_active, group_size); anything else is an extension
_REFERENCE_CORRELATED = (20, 10, 5)

_MAX_REGEN = 10


@dataclass(frozen=True)
class Scenario:
    """One simulated experiment: design shape, signal, and noise.

    The response is beta0 + active_value * (sum of the first p_active
    columns) + sigma * noise.  rho and group_size matter only for the
    correlated kind.
    """

    kind: str
    n: int
    p: int
    p_active: int
    rho: float = 0.0
    sigma: float = 1.0
    beta0: float = 1.0
    active_value: float = 1.0
    group_size: int = 5

    def __post_init__(self) -> None:
        if self.kind not in ("weak", "correlated"):
            raise ConfigError(f"scenario kind must be 'weak' or 'correlated', got {self.kind!r}")
        if not (self.n >= 1 and self.p >= 1):
            raise ConfigError(f"need n, p >= 1, got n={self.n}, p={self.p}")
        if not (0 <= self.p_active <= self.p):
            raise ConfigError(f"p_active must lie in [0, p], got {self.p_active}")
        if not (0.0 <= self.rho < 1.0):
            raise ConfigError(f"rho must lie in [0, 1), got {self.rho}")
        if not (self.sigma > 0.0 and math.isfinite(self.sigma)):
            raise ConfigError(f"sigma must be positive, got {self.sigma}")
        if self.kind == "correlated":
            cap = min(self.p_active, self.p - self.p_active)
            if not (1 <= self.group_size <= cap):
                raise ConfigError(
                    f"group_size must lie in [1, {cap}] for this shape, got {self.group_size}"
                )

    @property
    def truth(self) -> tuple[int, ...]:
        return tuple(range(self.p_active))

    @property
    def extension(self) -> bool:
        """True when a correlated scenario deviates from the reference (p, p*, group) shape."""
        return (
            self.kind == "correlated"
            and (self.p, self.p_active, self.group_size) != _REFERENCE_CORRELATED
        )


@dataclass(frozen=True)
class MonteCarloResult:
    scenario: Scenario
    reps: int
    seed: int
    labels: tuple[str, ...]
    rates: dict[str, RatePair]
    zero_fraction: dict[str, float]
    regenerated: int


def gen_weak_design(n: int, p: int, rng: np.random.Generator) -> np.ndarray:
    """n x p matrix of i.i.d. standard normals."""
    if n < 1 or p < 1:
        raise DomainError(f"need n, p >= 1, got n={n}, p={p}")
    return rng.standard_normal((n, p))


def rho_to_w(rho: float) -> float:
    """Mixing weight w with within-group correlation w**2 / ((1-w)**2 + w**2) = rho."""
    if not (0.0 <= rho < 1.0):
        raise DomainError(f"rho must lie in [0, 1), got {rho!r}")
    r = math.sqrt(rho / (1.0 - rho))
    return r / (1.0 + r)


def gen_correlated_design(scenario: Scenario, rng: np.random.Generator) -> np.ndarray:
    """Factor-correlated design: one shared factor per correlated group.

    Columns keep the construction's variance (1-w)**2 + w**2; they are
    deliberately not rescaled.
    """
    if scenario.kind != "correlated":
        raise ConfigError(f"scenario kind must be 'correlated', got {scenario.kind!r}")
    n, p, g = scenario.n, scenario.p, scenario.group_size
    w = rho_to_w(scenario.rho)
    Z = rng.standard_normal((n, p))
    factor_a = rng.standard_normal(n)
    factor_b = rng.standard_normal(n)
    X = Z.copy()
    pa = scenario.p_active
    X[:, :g] = (1.0 - w) * Z[:, :g] + w * factor_a[:, None]
    X[:, pa : pa + g] = (1.0 - w) * Z[:, pa : pa + g] + w * factor_b[:, None]
    return X


def gen_response(X: np.ndarray, scenario: Scenario, rng: np.random.Generator) -> np.ndarray:
    """beta0 + active_value * (sum of active columns) + sigma * noise."""
    n, p = X.shape
    if p != scenario.p or n != scenario.n:
        raise ConfigError(f"design shape {X.shape} does not match scenario (n={scenario.n}, p={scenario.p})")
    signal = X[:, : scenario.p_active].sum(axis=1) * scenario.active_value
    return scenario.beta0 + signal + scenario.sigma * rng.standard_normal(n)


def labels_for(criteria, alphas) -> tuple[str, ...]:
    """Flat result labels: cmc expands to one label per alpha."""
    out: list[str] = []
    for c in criteria:
        if c == "cmc":
            out.extend(f"cmc_{a:g}" for a in alphas)
        else:
            out.append(c)
    return tuple(out)


def _gen_design(scenario: Scenario, rng: np.random.Generator) -> np.ndarray:
    if scenario.kind == "weak":
        return gen_weak_design(scenario.n, scenario.p, rng)
    return gen_correlated_design(scenario, rng)


def _replicate(args) -> tuple[int, list[float], list[float], int]:
    """One replication: fresh data, every criterion, classification rates."""
    scenario, criteria, alphas, seed, rep, prune, limit = args
    rng = np.random.default_rng([seed, rep])
    q = scenario.p + 1
    cands = CandidateSet.best_per_size(limit=limit)
    regen = 0
    while True:
        X = _gen_design(scenario, rng)
        y = gen_response(X, scenario, rng)
        data = Dataset(X=X, y=y)
        try:
            per_size = best_per_size(data, cands, prune=prune)
            full = per_size.get(scenario.p)
            if full is None:
                raise RankDeficientError("full design collinear")
            rss_full = full.rss
            if rss_full <= 1e-12 * float(y @ y):
                raise DegenerateFitError("full-model residual sum of squares is numerically zero")
            break
        except RankDeficientError:
            regen += 1
            if regen > _MAX_REGEN:
                raise
    sigma2 = rss_full / (scenario.n - q)
    tss = float(np.square(y - y.mean()).sum())
    truth = scenario.truth
    firs: list[float] = []
    fars: list[float] = []
    for c in criteria:
        if c == "cmc":
            for a in alphas:
                kap = kappa(a, q, scenario.n)
                size, _ = _cmc_over_per_size(per_size, rss_full, sigma2, kap)
                rates = classify(per_size.entries[size].mask, truth, scenario.p)
                firs.append(rates.fir)
                fars.append(rates.far)
        else:
            size, _ = _ic_over_per_size(per_size, scenario.n, sigma2, tss, c)
            rates = classify(per_size.entries[size].mask, truth, scenario.p)
            firs.append(rates.fir)
            fars.append(rates.far)
    return rep, firs, fars, regen


def run_monte_carlo(
    scenario: Scenario,
    criteria=CRITERIA,
    alphas=(0.9, 0.5, 0.1),
    reps: int = 100,
    seed: int = 1,
    threads: int = 1,
    prune: bool = True,
    limit: int = SUBSET_LIMIT_DEFAULT,
) -> MonteCarloResult:
    """Average classification rates of each criterion over seeded replications.

    Parameters
    ----------
    scenario : Scenario
    criteria : sequence of {"adjr2", "cp_aic", "bic", "cmc"}
    alphas : sequence of floats, one cmc column per value
    reps : int >= 1
    seed : int
        Replication r draws from default_rng([seed, r]); a collinear
        design is redrawn from the same stream (at most 10 times).
    threads : int
        Worker processes; results are identical for any value.
    prune : bool
        Passed through to the subset engine.
    limit : int
        Subset-engine size limit (raise above 25 for p up to ~32).

    Returns
    -------
    MonteCarloResult
    """
    if reps < 1:
        raise ConfigError(f"reps must be >= 1, got {reps}")
    if threads < 1:
        raise ConfigError(f"threads must be >= 1, got {threads}")
    criteria = tuple(criteria)
    alphas = tuple(float(a) for a in alphas)
    for c in criteria:
        if c not in CRITERIA:
            raise ConfigError(f"unknown criterion {c!r}; expected one of {CRITERIA}")
    if "cmc" in criteria and not alphas:
        raise ConfigError("cmc requested but no alphas given")
    for a in alphas:
        if not (0.0 <= a <= 1.0):
            raise ConfigError(f"alpha must lie in [0, 1], got {a}")
    labels = labels_for(criteria, alphas)
    fir = np.empty((reps, len(labels)))
    far = np.empty((reps, len(labels)))
    regenerated = 0
    tasks = ((scenario, criteria, alphas, seed, r, prune, limit) for r in range(reps))
    if threads == 1:
        results = map(_replicate, tasks)
    else:
        pool = ProcessPoolExecutor(max_workers=threads)
        results = pool.map(_replicate, tasks, chunksize=max(1, reps // (threads * 8)))
    try:
        for rep, firs, fars, regen in results:
            fir[rep] = firs
            far[rep] = fars
            regenerated += regen
    finally:
        if threads != 1:
            pool.shutdown()
    mean_fir = fir.mean(axis=0)
    mean_far = far.mean(axis=0)
    zero = ((fir == 0.0) & (far == 0.0)).mean(axis=0)
    rates = {lab: RatePair(float(mean_fir[i]), float(mean_far[i])) for i, lab in enumerate(labels)}
    zero_fraction = {lab: float(zero[i]) for i, lab in enumerate(labels)}
    return MonteCarloResult(
        scenario=scenario,
        reps=reps,
        seed=seed,
        labels=labels,
        rates=rates,
        zero_fraction=zero_fraction,
        regenerated=regenerated,
    )
