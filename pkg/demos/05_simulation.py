# A small Monte Carlo comparison of the estimators
#
# Every replication draws from its own Philox stream keyed by
# (seed, scenario, replication), so results do not depend on the number of
# threads. Pass a larger reps to get closer to the full study
# (`zitau simulate configs/full_study.ini` runs all of it).

from zitau.montecarlo import SimScenario, run_scenario

rows = []
for pi in (0.2, 0.8):
    for rho in (0.2, 0.5, 0.8):
        s = SimScenario(pi, pi, 2.0, 2.0, rho, n=150, reps=200, base_seed=1, stream_key=(0, len(rows)))
        rows.append(run_scenario(s, workers=2))

print(" pi  rho   true | mean H  MSE H | mean A  MSE A | MSE tau_b")
for r in rows:
    s = r.scenario
    print(f"{s.pi_f:.1f}  {s.rho:.1f}  {r.true_tau:.3f} | {r.mean_tau_h:.3f}  {r.mse100_tau_h:5.2f} |"
          f" {r.mean_tau_a:.3f}  {r.mse100_tau_a:5.2f} | {r.mse100_tau_b:6.2f}")
print("(MSE values are multiplied by 100)")
