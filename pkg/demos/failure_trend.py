"""
How often the size gate fires
=============================

The solver reports FAILURE when a residual component is bigger than
ceil(log2 n). That should become rarer as n grows. A few minutes.
"""

from wsat.harness import ExperimentConfig, run_experiment

ns = [200, 400, 800, 1600]
for r in run_experiment(ExperimentConfig(n=ns, k=[2], c=[1.0], trials=100, master_seed=4)):
    print(f"n={r.n:5d}  fail={r.fail_fraction:.2f}  mean largest component={r.mean_max_comp:.1f}")

# A wider gate trades runtime for fewer FAILUREs
(wide,) = run_experiment(ExperimentConfig(n=[400], k=[2], c=[1.0], trials=100, master_seed=4,
                                          gate_mult=2.0))
print(f"n=400 gate x2: fail={wide.fail_fraction:.2f}")
