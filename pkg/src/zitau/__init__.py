"""Kendall's tau for paired counts with excess zeros.

Estimators, attainable bounds, an exact population oracle and a deterministic
Monte Carlo engine for zero-inflated Poisson pairs.
"""

__version__ = "0.1.0"

from .bounds import (
    BoundsReport,
    denuit_bounds,
    estimate_bounds,
    exact_tau_a_bounds,
)
from .distributions import (
    FrechetCopula,
    JointPmfGrid,
    PairedSample,
    ZipMargin,
    joint_pmf_grid,
    lower_fh,
    sample_pairs,
    upper_fh,
)
from .errors import (
    CostGuardError,
    DegenerateError,
    DomainError,
    InsufficientDataError,
    InvalidCdfError,
    PrecisionError,
    ZitauError,
)
from .estimators import EstimateReport, estimate, tau_a_hat, tau_b, tau_h_hat
from .montecarlo import SimResult, SimScenario, run_scenario, run_table1, run_table2
from .oracle import decompose, true_tau
