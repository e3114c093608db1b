"""Zero-inflated Poisson margins, copulas, joint pmf grids and sampling.

A zero-inflated Poisson (ZIP) margin puts weight ``pi`` on a Poisson(``lam``)
component and the remaining ``1 - pi`` on an extra atom at zero, so that

    F(s) = (1 - pi) + pi * PoissonCdf(lam, s),   s >= 0.

Joint distributions are built from two margins and a copula as
``H(x, y) = C(F(x), G(y))`` and discretised on a finite grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DomainError, InvalidCdfError

__all__ = [
    "ZipMargin",
    "FrechetCopula",
    "JointPmfGrid",
    "PairedSample",
    "poisson_pmf_table",
    "zip_cdf",
    "zip_quantile",
    "frechet_cdf",
    "upper_fh",
    "lower_fh",
    "joint_pmf_grid",
    "sample_pairs",
    "DEFAULT_TAIL_TOL",
    "NEGATIVE_CELL_TOL",
]

DEFAULT_TAIL_TOL = 1e-10
NEGATIVE_CELL_TOL = 1e-12

Copula = Callable[[np.ndarray, np.ndarray], np.ndarray]


def poisson_pmf_table(lam: float, m: int) -> np.ndarray:
    """Poisson(lam) probabilities for k = 0..m.

    Uses pmf(k+1) = pmf(k) * lam / (k+1), accumulated in log space so that
    large means do not underflow the starting term exp(-lam).
    """
    k = np.arange(1, m + 1, dtype=float)
    logp = np.empty(m + 1)
    logp[0] = -lam
    logp[1:] = -lam + np.cumsum(math.log(lam) - np.log(k))
    return np.exp(logp)


@dataclass(frozen=True)
class ZipMargin:
    """Zero-inflated Poisson margin.

    Parameters
    ----------
    pi : float
        Weight of the Poisson component, in [0, 1].
    lam : float
        Poisson mean, > 0.
    """

    pi: float
    lam: float

    def __post_init__(self):
        if not (0.0 <= self.pi <= 1.0):
            raise DomainError(f"pi must lie in [0, 1], got {self.pi!r}")
        if not (self.lam > 0.0 and math.isfinite(self.lam)):
            raise DomainError(f"lam must be a positive finite number, got {self.lam!r}")

    def zero_prob(self) -> float:
        return (1.0 - self.pi) + self.pi * math.exp(-self.lam)

    @cached_property
    def _table_size(self) -> int:
        # Poisson tail beyond this point is far below double precision.
        return int(math.ceil(self.lam + 40.0 * math.sqrt(self.lam) + 40.0))

    @cached_property
    def _cdf_table(self) -> np.ndarray:
        return self.cdf_table(self._table_size)

    def pmf_table(self, m: int) -> np.ndarray:
        """Probabilities P(X = s) for s = 0..m."""
        p = self.pi * poisson_pmf_table(self.lam, m)
        p[0] += 1.0 - self.pi
        return p

    def cdf_table(self, m: int) -> np.ndarray:
        """Cumulative probabilities F(s) for s = 0..m."""
        c = (1.0 - self.pi) + self.pi * np.cumsum(poisson_pmf_table(self.lam, m))
        return np.minimum(c, 1.0)

    def pmf(self, s):
        s_arr = np.asarray(s)
        out = np.zeros(s_arr.shape)
        ok = (s_arr >= 0) & (s_arr == np.floor(s_arr))
        if np.any(ok):
            idx = s_arr[ok].astype(np.int64)
            out[ok] = self.pmf_table(int(idx.max()))[idx]
        return out if s_arr.ndim else float(out)

    def cdf(self, s):
        s_arr = np.asarray(s)
        fl = np.floor(s_arr)
        out = np.zeros(s_arr.shape)
        ok = fl >= 0
        if np.any(ok):
            idx = fl[ok].astype(np.int64)
            top = int(idx.max())
            if top <= self._table_size:
                table = self._cdf_table
            else:
                table = self.cdf_table(top)
            out[ok] = table[idx]
        return out if s_arr.ndim else float(out)

    def survival(self, m: int) -> float:
        """P(X > m)."""
        return self.pi * float(1.0 - np.sum(poisson_pmf_table(self.lam, m)))

    def support_bound(self, tail_tol: float) -> int:
        """Smallest m with P(X > m) <= tail_tol."""
        table = self._cdf_table
        hits = np.nonzero(1.0 - table <= tail_tol)[0]
        if hits.size:
            return int(hits[0])
        return self._table_size

    def quantile(self, u):
        """Generalised inverse min{s >= 0 : F(s) >= u} for u in (0, 1)."""
        u_arr = np.asarray(u, dtype=float)
        if np.any((u_arr <= 0.0) | (u_arr >= 1.0)) or np.any(np.isnan(u_arr)):
            raise DomainError("quantile level must lie strictly inside (0, 1)")
        q = self._quantile(u_arr)
        return q if u_arr.ndim else int(q)

    def _quantile(self, u: np.ndarray) -> np.ndarray:
        table = self._cdf_table
        idx = np.searchsorted(table, u, side="left")
        return np.minimum(idx, table.size - 1).astype(np.int64)


def zip_cdf(m: ZipMargin, s) -> float:
    """F(s) of a ZIP margin; zero for s < 0."""
    return m.cdf(s)


def zip_quantile(m: ZipMargin, u) -> int:
    return m.quantile(u)


def _check_unit(*arrays):
    for a in arrays:
        a = np.asarray(a, dtype=float)
        if np.any((a < 0.0) | (a > 1.0)) or np.any(np.isnan(a)):
            raise DomainError("copula arguments must lie in [0, 1]")


@dataclass(frozen=True)
class FrechetCopula:
    """Mixture of independence and comonotonicity.

    ``C(u, v) = (1 - rho) * u * v + rho * min(u, v)``.
    """

    rho: float

    def __post_init__(self):
        if not (0.0 <= self.rho <= 1.0):
            raise DomainError(f"rho must lie in [0, 1], got {self.rho!r}")

    def cdf(self, u, v):
        _check_unit(u, v)
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        out = (1.0 - self.rho) * u * v + self.rho * np.minimum(u, v)
        return out if out.ndim else float(out)

    __call__ = cdf


def frechet_cdf(c: FrechetCopula, u, v):
    return c.cdf(u, v)


def upper_fh(u, v):
    """Upper Frechet-Hoeffding bound min(u, v)."""
    return np.minimum(u, v)


def lower_fh(u, v):
    """Lower Frechet-Hoeffding bound max(u + v - 1, 0)."""
    return np.maximum(np.asarray(u) + np.asarray(v) - 1.0, 0.0)


@dataclass(frozen=True, eq=False)
class JointPmfGrid:
    """Bivariate pmf p(x, y) on {0..Mx} x {0..My} plus unaccounted tail mass."""

    probs: np.ndarray
    tail_mass: float = 0.0

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 2:
            raise DomainError("probs must be a 2-d array")
        if np.any(p < 0.0):
            raise InvalidCdfError("negative cell in joint pmf grid")
        p = p.copy()
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @property
    def truncation_order(self) -> int:
        return max(self.probs.shape) - 1

    def marginal_x(self) -> np.ndarray:
        return self.probs.sum(axis=1)

    def marginal_y(self) -> np.ndarray:
        return self.probs.sum(axis=0)

    def cdf_grid(self) -> np.ndarray:
        """H(x, y) restricted to the grid (2-d prefix sums)."""
        return self.probs.cumsum(axis=0).cumsum(axis=1)

    @classmethod
    def from_probs(cls, probs, normalize: bool = True) -> "JointPmfGrid":
        p = np.asarray(probs, dtype=float)
        if normalize:
            p = p / p.sum()
        return cls(p, 0.0)


def joint_pmf_grid(
    fx: ZipMargin,
    fy: ZipMargin,
    copula: Copula,
    tail_tol: float = DEFAULT_TAIL_TOL,
) -> JointPmfGrid:
    """Discretise H(x, y) = C(F(x), G(y)) on a square grid.

    The truncation order M is the larger of the two per-margin orders with
    P(X > M), P(Y > M) <= tail_tol / 2. Cells are filled by rectangle
    inclusion-exclusion; rounding noise down to -1e-12 is clamped to zero.
    """
    if not tail_tol > 0:
        raise DomainError("tail_tol must be positive")
    m = max(fx.support_bound(tail_tol / 2.0), fy.support_bound(tail_tol / 2.0), 1)
    fvals = fx.cdf_table(m)
    gvals = fy.cdf_table(m)
    h = np.zeros((m + 2, m + 2))
    h[1:, 1:] = copula(fvals[:, None], gvals[None, :])
    p = h[1:, 1:] - h[:-1, 1:] - h[1:, :-1] + h[:-1, :-1]
    if np.any(p < -NEGATIVE_CELL_TOL):
        worst = float(p.min())
        raise InvalidCdfError(f"bivariate cdf yields negative cell mass {worst:.3e}")
    p = np.maximum(p, 0.0)
    tail = max(0.0, 1.0 - float(h[-1, -1]))
    return JointPmfGrid(p, tail)


@dataclass(frozen=True, eq=False)
class PairedSample:
    """N observed pairs of non-negative integer counts."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x)
        y = np.asarray(self.y)
        if x.ndim != 1 or x.shape != y.shape:
            raise DomainError("x and y must be 1-d arrays of equal length")
        if x.size < 1:
            raise DomainError("a paired sample needs at least one row")
        for name, a in (("x", x), ("y", y)):
            if a.dtype.kind == "f":
                if not np.all(np.isfinite(a)) or np.any(a != np.floor(a)):
                    raise DomainError(f"{name} must hold integer counts")
            elif a.dtype.kind not in "iub":
                raise DomainError(f"{name} must hold integer counts")
            if np.any(a < 0):
                raise DomainError(f"{name} must be non-negative")
        x = x.astype(np.int64)
        y = y.astype(np.int64)
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[int]]) -> "PairedSample":
        arr = np.asarray(list(pairs))
        if arr.size == 0:
            raise DomainError("a paired sample needs at least one row")
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise DomainError("pairs must be a sequence of (x, y) tuples")
        return cls(arr[:, 0], arr[:, 1])

    @property
    def n(self) -> int:
        return int(self.x.size)

    def __len__(self) -> int:
        return self.n

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(self.x.tolist(), self.y.tolist()))

    def swapped(self) -> "PairedSample":
        return PairedSample(self.y, self.x)

    def take(self, idx) -> "PairedSample":
        return PairedSample(self.x[idx], self.y[idx])


def sample_pairs(
    fx: ZipMargin,
    fy: ZipMargin,
    copula: FrechetCopula,
    n: int,
    rng: np.random.Generator | int | None = None,
) -> PairedSample:
    """Draw n pairs from C(F(x), G(y)) with C a Frechet copula.

    Uses the mixture form of the copula: V equals U with probability rho and
    is an independent uniform otherwise, then both are mapped through the
    margin quantile functions.
    """
    if n < 1:
        raise DomainError("n must be at least 1")
    rng = np.random.default_rng(rng)
    u = rng.random(n)
    same = rng.random(n) < copula.rho
    v = np.where(same, u, rng.random(n))
    return PairedSample(fx._quantile(u), fy._quantile(v))
