# Exact tau of a known joint pmf, and a check of the decomposition
#
# tau = P(concordant) - P(discordant) for two independent draws. Prefix sums
# make this O(M^2) on an M x M grid; a quadruple loop is kept as a reference.

import numpy as np

from zitau import FrechetCopula, JointPmfGrid, ZipMargin, decompose, joint_pmf_grid, true_tau
from zitau.oracle import true_tau_bruteforce

g = JointPmfGrid(np.array([[0.4, 0.1], [0.1, 0.4]]))
print("2x2 grid:", true_tau(g), true_tau_bruteforce(g))

# %% tau grows with the copula weight
fx, fy = ZipMargin(0.8, 2.0), ZipMargin(0.8, 8.0)
for rho in np.linspace(0, 1, 6):
    print(f"rho={rho:.1f}  tau={true_tau(joint_pmf_grid(fx, fy, FrechetCopula(rho))):.4f}")

# %% The pieces of the decomposition reassemble into the direct value.
d = decompose(joint_pmf_grid(fx, fy, FrechetCopula(0.5)))
print(f"direct {d.tau_direct:.12f}\nassembled {d.tau_a_assembled:.12f}")
print(f"p00={d.p00:.4f} p01={d.p01:.4f} p10={d.p10:.4f} p11={d.p11:.4f} tau11={d.tau11:.4f}")
print(f"crossing/tie X: {d.p1_star:.4f}/{d.p1_dagger:.4f}  Y: {d.p2_star:.4f}/{d.p2_dagger:.4f}")
