# How large can tau be for given margins?
#
# With many zeros, tau cannot reach +-1. The unadjusted bounds depend only on
# the two zero probabilities; the sharp bounds for count margins also see the
# ties among positive values and are attained by the two extreme joint laws
# min(F, G) and max(F + G - 1, 0).

import numpy as np

from zitau import (
    FrechetCopula,
    PairedSample,
    ZipMargin,
    denuit_bounds,
    estimate_bounds,
    exact_tau_a_bounds,
    joint_pmf_grid,
    lower_fh,
    sample_pairs,
    true_tau,
    upper_fh,
)

for pi in (0.2, 0.8):
    fx, fy = ZipMargin(pi, 2.0), ZipMargin(pi, 8.0)
    d = denuit_bounds(fx.zero_prob(), fy.zero_prob())
    e = exact_tau_a_bounds(fx, fy)
    print(f"pi={pi}: zero-probability bounds [{d.lower:+.4f}, {d.upper:+.4f}]"
          f"  sharp bounds [{e.lower:+.4f}, {e.upper:+.4f}]")
    # the sharp bounds are attained
    up = true_tau(joint_pmf_grid(fx, fy, upper_fh))
    lo = true_tau(joint_pmf_grid(fx, fy, lower_fh))
    print(f"        tau under the extreme joints       [{lo:+.4f}, {up:+.4f}]")

# %% From data alone: empirical cdfs replace the margins and a tie frequency
# stands in for the unknown joint tie probability.
fx, fy = ZipMargin(0.8, 2.0), ZipMargin(0.8, 2.0)
s = sample_pairs(fx, fy, FrechetCopula(0.5), 150, np.random.default_rng(3))
for norm in ("sample", "subsample"):
    b = estimate_bounds(s, tie_normalization=norm)
    print(f"estimated bounds ({norm:9s}): [{b.lower:+.4f}, {b.upper:+.4f}]")

# %% Without any both-positive row the estimate falls back, with a warning.
b = estimate_bounds(PairedSample.from_pairs([(0, 0), (3, 0), (0, 1)]))
print(b.kind, b.interval, b.warnings)
