"""Deterministic Monte Carlo comparison of the tau estimators.

Every replication draws from its own counter-based Philox stream keyed by
``SeedSequence(base_seed, spawn_key=stream_key + (rep,))``. Replication results
are written into fixed slots and reduced in index order, so results do not
depend on the number of worker threads or on scheduling.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bounds import denuit_bounds, estimate_bounds, exact_tau_a_bounds
from .distributions import (
    DEFAULT_TAIL_TOL,
    FrechetCopula,
    ZipMargin,
    joint_pmf_grid,
    sample_pairs,
)
from .errors import DomainError
from .estimators import estimate
from .oracle import true_tau

__all__ = [
    "SimScenario",
    "SimResult",
    "REPLICATE_COLUMNS",
    "TABLE1_GRID",
    "TABLE2_GRID",
    "replicate_rng",
    "run_replicate",
    "run_scenario",
    "table1_scenarios",
    "table2_scenarios",
    "run_table1",
    "run_table2",
]

REPLICATE_COLUMNS = (
    "tau_hat", "tau_b", "tau_h", "tau_a",
    "bounds_h_lower", "bounds_h_upper", "bounds_a_lower", "bounds_a_upper",
    "flagged",
)

# (lambda_f, lambda_g, pi, rho) in published row order.
TABLE1_GRID = tuple(
    (lf, lg, pi, rho)
    for lf, lg in ((2.0, 2.0), (2.0, 8.0), (8.0, 8.0))
    for pi in (0.2, 0.8)
    for rho in (0.2, 0.5, 0.8)
)
# (lambda_f, lambda_g, pi); samples for averaged bounds use rho = 0.5.
TABLE2_GRID = tuple(
    (lf, lg, pi)
    for lf, lg in ((2.0, 2.0), (2.0, 8.0), (8.0, 8.0))
    for pi in (0.2, 0.8)
)
TABLE2_RHO = 0.5

_TABLE1_KEY = 1
_TABLE2_KEY = 2


@dataclass(frozen=True)
class SimScenario:
    pi_f: float
    pi_g: float
    lambda_f: float
    lambda_g: float
    rho: float
    n: int = 150
    reps: int = 1000
    base_seed: int = 0
    stream_key: tuple[int, ...] = ()
    tail_tol: float = DEFAULT_TAIL_TOL

    def __post_init__(self):
        if self.reps < 1:
            raise DomainError("reps must be at least 1")
        if self.n < 2:
            raise DomainError("n must be at least 2")
        if self.base_seed < 0:
            raise DomainError("base_seed must be non-negative")
        # Validates the margin and copula parameters.
        self.margins()
        self.copula()

    def margins(self) -> tuple[ZipMargin, ZipMargin]:
        return ZipMargin(self.pi_f, self.lambda_f), ZipMargin(self.pi_g, self.lambda_g)

    def copula(self) -> FrechetCopula:
        return FrechetCopula(self.rho)


@dataclass(frozen=True, eq=False)
class SimResult:
    scenario: SimScenario
    true_tau: float
    mean_tau_hat: float
    mse100_tau_hat: float
    mean_tau_b: float
    mse100_tau_b: float
    mean_tau_h: float
    mse100_tau_h: float
    mean_tau_a: float
    mse100_tau_a: float
    mean_bounds_h: tuple[float, float]
    mean_bounds_a: tuple[float, float]
    exact_bounds_a: tuple[float, float]
    n_flagged: int
    replicates: np.ndarray | None = field(default=None, repr=False)


def replicate_rng(base_seed: int, stream_key: tuple[int, ...], rep: int) -> np.random.Generator:
    ss = np.random.SeedSequence(base_seed, spawn_key=tuple(stream_key) + (rep,))
    return np.random.Generator(np.random.Philox(ss))


def run_replicate(s: SimScenario, rep: int) -> np.ndarray:
    """One replication; returns a row laid out as ``REPLICATE_COLUMNS``."""
    fx, fy = s.margins()
    rng = replicate_rng(s.base_seed, s.stream_key, rep)
    sample = sample_pairs(fx, fy, s.copula(), s.n, rng)
    est = estimate(sample)
    bh = denuit_bounds(float(np.mean(sample.x == 0)), float(np.mean(sample.y == 0)))
    ba = estimate_bounds(sample)
    flagged = est.flagged or ba.flagged
    return np.array([
        est.tau_hat, est.tau_b, est.tau_h_hat, est.tau_a_hat,
        bh.lower, bh.upper, ba.lower, ba.upper, float(flagged),
    ])


def run_scenario(
    s: SimScenario, workers: int = 1, keep_replicates: bool = False
) -> SimResult:
    """Replicate a scenario and aggregate means and MSE x 100 against the truth."""
    fx, fy = s.margins()
    truth = true_tau(joint_pmf_grid(fx, fy, s.copula(), s.tail_tol))
    exact = exact_tau_a_bounds(fx, fy, s.tail_tol)

    rows = np.empty((s.reps, len(REPLICATE_COLUMNS)))
    if workers <= 1:
        for i in range(s.reps):
            rows[i] = run_replicate(s, i)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for i, row in zip(range(s.reps), pool.map(lambda r: run_replicate(s, r), range(s.reps))):
                rows[i] = row

    def mean(col):
        return float(np.mean(rows[:, REPLICATE_COLUMNS.index(col)]))

    def mse100(col):
        err = rows[:, REPLICATE_COLUMNS.index(col)] - truth
        return 100.0 * float(np.mean(err * err))

    return SimResult(
        scenario=s,
        true_tau=truth,
        mean_tau_hat=mean("tau_hat"),
        mse100_tau_hat=mse100("tau_hat"),
        mean_tau_b=mean("tau_b"),
        mse100_tau_b=mse100("tau_b"),
        mean_tau_h=mean("tau_h"),
        mse100_tau_h=mse100("tau_h"),
        mean_tau_a=mean("tau_a"),
        mse100_tau_a=mse100("tau_a"),
        mean_bounds_h=(mean("bounds_h_lower"), mean("bounds_h_upper")),
        mean_bounds_a=(mean("bounds_a_lower"), mean("bounds_a_upper")),
        exact_bounds_a=(exact.lower, exact.upper),
        n_flagged=int(rows[:, -1].sum()),
        replicates=rows if keep_replicates else None,
    )


def table1_scenarios(seed: int, reps: int = 1000, n: int = 150) -> list[SimScenario]:
    return [
        SimScenario(pi, pi, lf, lg, rho, n=n, reps=reps, base_seed=seed,
                    stream_key=(_TABLE1_KEY, i))
        for i, (lf, lg, pi, rho) in enumerate(TABLE1_GRID)
    ]


def table2_scenarios(seed: int, reps: int = 1000, n: int = 150) -> list[SimScenario]:
    return [
        SimScenario(pi, pi, lf, lg, TABLE2_RHO, n=n, reps=reps, base_seed=seed,
                    stream_key=(_TABLE2_KEY, i))
        for i, (lf, lg, pi) in enumerate(TABLE2_GRID)
    ]


def run_table1(
    seed: int, reps: int = 1000, n: int = 150, workers: int = 1,
    keep_replicates: bool = False,
) -> list[SimResult]:
    """The 18 estimator-comparison scenarios, in published row order."""
    return [run_scenario(s, workers, keep_replicates) for s in table1_scenarios(seed, reps, n)]


def run_table2(
    seed: int, reps: int = 1000, n: int = 150, workers: int = 1,
    keep_replicates: bool = False,
) -> list[SimResult]:
    """The 6 margin settings used for averaged bound estimates."""
    return [run_scenario(s, workers, keep_replicates) for s in table2_scenarios(seed, reps, n)]
