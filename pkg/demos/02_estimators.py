# Estimating Kendall's tau on zero-inflated counts
#
# Classical tau-b treats the pile of (0, 0) rows as a block of ties. The
# decomposition estimators split the sample by zero pattern instead, and the
# adjusted version also accounts for ties between the positive values of the
# zero and non-zero groups, which are common with counts.

import numpy as np

from zitau import FrechetCopula, PairedSample, ZipMargin, estimate, joint_pmf_grid, sample_pairs, true_tau

# %% A hand-sized example
s = PairedSample.from_pairs([(0, 0), (1, 1), (2, 2), (0, 3)])
r = estimate(s)
print("pattern freqs p00 p01 p10 p11:", r.stats.p00, r.stats.p01, r.stats.p10, r.stats.p11)
print(f"tau_hat={r.tau_hat:.4f}  tau_b={r.tau_b:.4f}  tau_H={r.tau_h_hat:.4f}  tau_A={r.tau_a_hat:.4f}")

# %% A realistic sample
fx, fy, cop = ZipMargin(0.8, 2.0), ZipMargin(0.8, 2.0), FrechetCopula(0.5)
truth = true_tau(joint_pmf_grid(fx, fy, cop))
s = sample_pairs(fx, fy, cop, 150, np.random.default_rng(2023))
r = estimate(s)
print(f"true tau {truth:.4f}")
print(f"tau_b {r.tau_b:.4f}, tau_H {r.tau_h_hat:.4f}, tau_A {r.tau_a_hat:.4f}")
print("cross-group crossing / tie fractions:", r.cross)

# %% How the both-positive part is estimated matters. tau-b there targets a
# tie-corrected quantity, which leaves tau_A biased even for huge samples;
# the standard (C - D) version targets what the decomposition needs.
big = sample_pairs(fx, fy, cop, 100_000, np.random.default_rng(7))
for method in ("tau_b", "standard"):
    print(f"N=1e5, tau11 via {method:8s}: tau_A = {estimate(big, tau11_method=method).tau_a_hat:.4f}"
          f"  (truth {truth:.4f})")
