"""Attainable bounds of Kendall's tau for zero-inflated margins.

Three flavours are provided:

* :func:`denuit_bounds` -- bounds of the unadjusted measure, which depend on
  the two zero probabilities only;
* :func:`exact_tau_a_bounds` -- sharp bounds for known discrete margins,
  attained by the upper and lower Frechet-Hoeffding joint distributions;
* :func:`estimate_bounds` -- a distribution-free plug-in version computed
  from a sample, slightly wider than the sharp bounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from .distributions import (
    DEFAULT_TAIL_TOL,
    PairedSample,
    ZipMargin,
    joint_pmf_grid,
    lower_fh,
    upper_fh,
)
from .errors import DegenerateError, DomainError, InsufficientDataError

__all__ = [
    "BoundsReport",
    "CondPmfs",
    "denuit_bounds",
    "find_threshold_upper",
    "find_threshold_lower",
    "bound_cond_dists",
    "closed_form_tie_upper",
    "closed_form_tie_lower",
    "tie_prob_under_bound",
    "exact_tau_a_bounds",
    "estimate_bounds",
    "empirical_cdf",
]

Which = Literal["upper", "lower"]
Cdf = Callable[[int], float]


@dataclass(frozen=True)
class BoundsReport:
    lower: float
    upper: float
    kind: str
    s_tilde: int | None = None
    t_tilde: int | None = None
    s_tilde_prime: int | None = None
    t_tilde_prime: int | None = None
    pU_t11: float | None = None
    pL_t11: float | None = None
    p1: float | None = None
    p2: float | None = None
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        eps = 1e-12
        if self.lower > self.upper + eps or self.lower < -1 - eps or self.upper > 1 + eps:
            raise DegenerateError(
                f"inconsistent bounds [{self.lower}, {self.upper}] ({self.kind})"
            )

    @property
    def interval(self) -> tuple[float, float]:
        return (self.lower, self.upper)

    @property
    def flagged(self) -> bool:
        return bool(self.warnings)


def _check_prob(name, p):
    if not (0.0 <= p <= 1.0):
        raise DomainError(f"{name} must lie in [0, 1], got {p!r}")


def denuit_bounds(p1: float, p2: float) -> BoundsReport:
    """Bounds of the unadjusted measure from the zero probabilities."""
    _check_prob("p1", p1)
    _check_prob("p2", p2)
    upper = 1.0 - max(p1, p2) ** 2
    gap = 1.0 - p1 - p2
    lower = -2.0 * (1.0 - p1) * (1.0 - p2)
    if gap > 0:
        lower += gap**2
    return BoundsReport(lower, upper, "denuit_tauH", p1=p1, p2=p2)


def find_threshold_upper(F: Cdf, p: float) -> int:
    """Smallest s >= 0 with F(s) > p."""
    if p >= 1.0:
        raise DomainError("threshold level must be < 1")
    s = 0
    while not F(s) > p:
        s += 1
    return s


def find_threshold_lower(F: Cdf, p: float) -> int:
    """Smallest s >= 0 with F(s) + p - 1 > 0."""
    if p <= 0.0:
        raise DomainError("threshold level must be > 0")
    return find_threshold_upper(F, 1.0 - p)


@dataclass(frozen=True)
class CondPmfs:
    """Pmfs (indexed by value) of the four conditional margins.

    ``None`` marks a conditioning event of probability zero.
    """

    x10: np.ndarray | None
    x11: np.ndarray | None
    y01: np.ndarray | None
    y11: np.ndarray | None


def _upper_pair(f: ZipMargin, pf: float, pg: float, m: int):
    """Conditional pmfs of the first coordinate under min(F, G), pf <= pg."""
    F = f.cdf
    s = find_threshold_upper(F, pg)
    pmf = f.pmf_table(m)
    x10 = None
    if pg > pf:
        x10 = np.zeros(m + 1)
        x10[1:s] = pmf[1:s] / (pg - pf)
        x10[s] = (pg - F(s - 1)) / (pg - pf)
    x11 = None
    if pg < 1.0:
        x11 = np.zeros(m + 1)
        x11[s] = (F(s) - pg) / (1.0 - pg)
        x11[s + 1:] = pmf[s + 1:] / (1.0 - pg)
    return x10, x11


def _lower_pair(f: ZipMargin, pf: float, pg: float, m: int):
    """Conditional pmfs of the first coordinate under max(F+G-1, 0)."""
    F = f.cdf
    s = find_threshold_lower(F, pg)
    pmf = f.pmf_table(m)
    x10 = np.zeros(m + 1)
    x10[s] = (F(s) + pg - 1.0) / pg
    x10[s + 1:] = pmf[s + 1:] / pg
    x11 = None
    mass = 1.0 - pf - pg
    if mass > 0:
        x11 = np.zeros(m + 1)
        x11[1:s] = pmf[1:s] / mass
        x11[s] = (1.0 - pg - F(s - 1)) / mass
    return x10, x11


def bound_cond_dists(
    fx: ZipMargin, fy: ZipMargin, which: Which, tail_tol: float = DEFAULT_TAIL_TOL
) -> CondPmfs:
    """Closed-form conditional margins under a Frechet-Hoeffding bound.

    Infinite supports are cut where the margin's tail drops below
    ``tail_tol``.
    """
    p1, p2 = fx.zero_prob(), fy.zero_prob()
    m = max(fx.support_bound(tail_tol), fy.support_bound(tail_tol)) + 1
    if which == "upper":
        if p1 <= p2:
            x10, x11 = _upper_pair(fx, p1, p2, m)
            # Y > 0 forces X > 0 here, so Y | X = 0 has no mass and
            # Y | X > 0, Y > 0 is just Y | Y > 0.
            y01 = None
            y11 = _positive_part(fy, m)
        else:
            y01, y11 = _upper_pair(fy, p2, p1, m)
            x10 = None
            x11 = _positive_part(fx, m)
        return CondPmfs(x10, x11, y01, y11)
    if which == "lower":
        if p1 + p2 > 1.0:
            raise DomainError("lower-bound conditionals require p1 + p2 <= 1")
        x10, x11 = _lower_pair(fx, p1, p2, m)
        y01, y11 = _lower_pair(fy, p2, p1, m)
        return CondPmfs(x10, x11, y01, y11)
    raise DomainError(f"which must be 'upper' or 'lower', got {which!r}")


def _positive_part(f: ZipMargin, m: int):
    p0 = f.zero_prob()
    if p0 >= 1.0:
        return None
    pmf = f.pmf_table(m)
    out = np.zeros(m + 1)
    out[1:] = pmf[1:] / (1.0 - p0)
    return out


def closed_form_tie_upper(f: ZipMargin, pf: float, pg: float) -> float:
    """P(X10 = X11) under min(F, G) when pf < pg < 1."""
    F = f.cdf
    s = find_threshold_upper(F, pg)
    return (pg - F(s - 1)) * (F(s) - pg) / ((pg - pf) * (1.0 - pg))


def closed_form_tie_lower(f: ZipMargin, pf: float, pg: float) -> float:
    """P(X10 = X11) under max(F+G-1, 0) when pf + pg < 1."""
    F = f.cdf
    s = find_threshold_lower(F, pg)
    return (F(s) + pg - 1.0) * (1.0 - pg - F(s - 1)) / (pg * (1.0 - pf - pg))


def tie_prob_under_bound(
    fx: ZipMargin, fy: ZipMargin, which: Which, tail_tol: float = DEFAULT_TAIL_TOL
) -> float:
    """P(X1 = X1' or Y1 = Y1') for two independent both-positive draws.

    The joint law is the chosen Frechet-Hoeffding bound conditioned on
    X > 0 and Y > 0.
    """
    copula = {"upper": upper_fh, "lower": lower_fh}.get(which)
    if copula is None:
        raise DomainError(f"which must be 'upper' or 'lower', got {which!r}")
    g = joint_pmf_grid(fx, fy, copula, tail_tol)
    q = g.probs[1:, 1:]
    mass = float(q.sum())
    if mass <= tail_tol:
        raise DegenerateError("no mass with both coordinates positive")
    q = q / mass
    return float(
        np.sum(q.sum(axis=1) ** 2) + np.sum(q.sum(axis=0) ** 2) - np.sum(q**2)
    )


def _upper_formula(p_big, F, s, tie):
    return (
        (1.0 - p_big**2)
        - (1.0 - p_big) ** 2 * tie
        - 2.0 * (p_big - F(s - 1)) * (F(s) - p_big)
    )


def _lower_formula(p1, p2, F, G, s, t, tie):
    # s (t) is None when p2 (p1) is zero; that correction term then vanishes.
    cx = 0.0 if s is None else (F(s) + p2 - 1.0) * (1.0 - p2 - F(s - 1))
    cy = 0.0 if t is None else (G(t) + p1 - 1.0) * (1.0 - p1 - G(t - 1))
    return p1**2 + p2**2 - 1.0 + (1.0 - p1 - p2) ** 2 * tie + 2.0 * (cx + cy)


def exact_tau_a_bounds(
    fx: ZipMargin, fy: ZipMargin, tail_tol: float = DEFAULT_TAIL_TOL
) -> BoundsReport:
    """Sharp bounds of tau for two known ZIP margins."""
    p1, p2 = fx.zero_prob(), fy.zero_prob()
    F, G = fx.cdf, fy.cdf
    s_t = t_t = s_p = t_p = None
    pU = pL = None

    if max(p1, p2) >= 1.0:
        upper = 0.0
    else:
        pU = tie_prob_under_bound(fx, fy, "upper", tail_tol)
        if p1 <= p2:
            s_t = find_threshold_upper(F, p2)
            upper = _upper_formula(p2, F, s_t, pU)
        else:
            t_t = find_threshold_upper(G, p1)
            upper = _upper_formula(p1, G, t_t, pU)

    if 1.0 - p1 - p2 < 0:
        lower = -2.0 * (1.0 - p1) * (1.0 - p2)
    else:
        s_p = find_threshold_lower(F, p2)
        t_p = find_threshold_lower(G, p1)
        pL = 0.0
        if 1.0 - p1 - p2 > tail_tol:
            pL = tie_prob_under_bound(fx, fy, "lower", tail_tol)
        lower = _lower_formula(p1, p2, F, G, s_p, t_p, pL)

    return BoundsReport(
        lower, upper, "exact_tauA",
        s_tilde=s_t, t_tilde=t_t, s_tilde_prime=s_p, t_tilde_prime=t_p,
        pU_t11=pU, pL_t11=pL, p1=p1, p2=p2,
    )


def empirical_cdf(values: np.ndarray) -> Cdf:
    """Right-continuous empirical cdf of integer data."""
    v = np.sort(np.asarray(values))
    n = v.size

    def F(s):
        return float(np.searchsorted(v, s, side="right")) / n

    return F


def _tied_pairs(v: np.ndarray) -> int:
    """Number of ordered pairs (i != j) with v_i == v_j."""
    _, counts = np.unique(v, return_counts=True)
    return int(np.sum(counts * (counts - 1)))


def estimate_bounds(
    s: PairedSample, fallback: bool = True, tie_normalization: str = "sample"
) -> BoundsReport:
    """Distribution-free estimate of the bounds from one sample.

    Zero probabilities and cdfs are replaced by sample frequencies, and both
    joint tie probabilities by the larger of the two within-margin pair tie
    frequencies on the both-positive rows (a lower bound of the joint tie
    probability, hence slightly wider bounds).

    ``tie_normalization`` selects the denominator of the tie frequency:
    ``"sample"`` divides the number of ordered tied both-positive row pairs
    by n(n-1), all ordered pairs of the sample; ``"subsample"`` divides by
    m(m-1) over the m both-positive rows, the unbiased estimate of the
    conditional tie probability. The default reproduces the published
    averaged bound estimates; ``"subsample"`` gives tighter intervals.

    Without both-positive rows the estimate is undefined. With
    ``fallback=True`` the plug-in Denuit bounds are returned with a warning;
    otherwise :class:`DegenerateError` is raised carrying them as
    ``fallback``.
    """
    if s.n < 2:
        raise InsufficientDataError(f"need at least 2 rows, got {s.n}")
    if tie_normalization not in ("sample", "subsample"):
        raise DomainError(f"unknown tie_normalization {tie_normalization!r}")
    p1 = float(np.mean(s.x == 0))
    p2 = float(np.mean(s.y == 0))
    both = (s.x > 0) & (s.y > 0)
    m = int(both.sum())
    if m == 0:
        rep = denuit_bounds(p1, p2)
        rep = BoundsReport(
            rep.lower, rep.upper, "denuit_tauH", p1=p1, p2=p2,
            warnings=("no both-positive rows: fell back to Denuit bounds",),
        )
        if fallback:
            return rep
        raise DegenerateError("no both-positive rows", fallback=rep)

    warnings = ()
    if tie_normalization == "sample":
        pairs = s.n * (s.n - 1)
    else:
        pairs = m * (m - 1)
    if pairs == 0:
        tie = 0.0
        warnings = ("single both-positive row: tie frequency set to 0",)
    else:
        tie = max(_tied_pairs(s.x[both]), _tied_pairs(s.y[both])) / pairs

    F = empirical_cdf(s.x)
    G = empirical_cdf(s.y)
    s_t = t_t = s_p = t_p = None
    if p1 <= p2:
        s_t = find_threshold_upper(F, p2)
        upper = _upper_formula(p2, F, s_t, tie)
    else:
        t_t = find_threshold_upper(G, p1)
        upper = _upper_formula(p1, G, t_t, tie)

    if 1.0 - p1 - p2 < 0:
        lower = -2.0 * (1.0 - p1) * (1.0 - p2)
    else:
        s_p = find_threshold_lower(F, p2) if p2 > 0 else None
        t_p = find_threshold_lower(G, p1) if p1 > 0 else None
        lower = _lower_formula(p1, p2, F, G, s_p, t_p, tie)

    return BoundsReport(
        lower, upper, "estimated_tauA",
        s_tilde=s_t, t_tilde=t_t, s_tilde_prime=s_p, t_tilde_prime=t_p,
        pU_t11=tie, pL_t11=tie, p1=p1, p2=p2, warnings=warnings,
    )
