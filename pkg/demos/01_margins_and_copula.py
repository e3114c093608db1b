# Zero-inflated Poisson margins and the Frechet copula
#
# A zero-inflated Poisson (ZIP) count puts extra mass at zero: with
# probability 1 - pi the count is a structural zero, otherwise it is Poisson.
# Two such counts are tied together with the Frechet copula, a mixture of
# independence and perfect positive dependence.

import numpy as np

from zitau import FrechetCopula, ZipMargin, joint_pmf_grid, sample_pairs

# %% A margin with heavy zero inflation
f = ZipMargin(pi=0.8, lam=2.0)
print("P(X = 0)      :", round(f.zero_prob(), 6))
print("pmf 0..6      :", np.round(f.pmf_table(6), 4))
print("cdf 0..6      :", np.round(f.cdf(np.arange(7)), 4))

# The quantile is the generalised inverse of the cdf, so any u below the
# zero mass maps to 0.
for u in (0.1, 0.31, 0.9, 0.9999):
    print(f"quantile({u}) = {f.quantile(u)}")

# %% The copula interpolates between independence (rho = 0) and
# comonotonicity (rho = 1).
for rho in (0.0, 0.5, 1.0):
    print(f"rho={rho}: C(0.4, 0.6) = {FrechetCopula(rho)(0.4, 0.6):.3f}")

# %% Joint pmf on a truncated grid. The grid is cut where both margins have
# less than tail_tol / 2 mass left; the rest is accounted for in tail_mass.
g = joint_pmf_grid(f, ZipMargin(0.8, 8.0), FrechetCopula(0.5))
print("grid order M  :", g.truncation_order)
print("tail mass     :", f"{g.tail_mass:.2e}")
print("top-left block:\n", np.round(g.probs[:4, :4], 4))

# %% Sampling uses the mixture form of the copula: with probability rho the
# second uniform copies the first, otherwise it is drawn afresh.
s = sample_pairs(f, ZipMargin(0.8, 8.0), FrechetCopula(0.5), 10, np.random.default_rng(1))
print("ten pairs     :", s.pairs)
