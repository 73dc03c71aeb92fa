"""
Satisfiability probability against c
====================================

For d=2, d'=1 the weight-k threshold sits at c* = 3. Sweep c across it
and print the fraction of SAT outcomes per cell. Takes about a minute.
"""

from wsat.harness import ExperimentConfig, run_experiment

cs = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 5.0, 6.0]
cfg = ExperimentConfig(n=[2000], k=[2], c=cs, trials=40, master_seed=11)

print(" c     sat   unsat  fail")
for r in run_experiment(cfg):
    print(f"{r.c:4.1f}  {r.n_sat:5d} {r.n_unsat:6d} {r.n_fail:5d}")

# FAILURE is its own category: a component outgrew the size gate.
# Writing a CSV is one more argument:
#   ExperimentConfig(..., out="curve.csv")
