"""
The d' path and the mini variant
================================

Clauses with at least two negations need the d' loop, which guesses
d'-1 TRUE variables and reruns the pipeline on what is left.
The mini variant asks for weight round(k ln n) instead of k.
"""

from wsat import (RandomModelParams, generate, mini_wsat_solve, oracle_solve,
                  wsat_solve_dprime)
from wsat.solver import mini_target

inst = generate(RandomModelParams(n=14, d=3, dprime=2, k=2, c=4.0, seed=3))
out = wsat_solve_dprime(inst)
print("d'=2:", out.status, out.true_vars, "branches:", out.diagnostics["branches"])
print("oracle:", oracle_solve(inst.formula, 2).status)

# Past c = 3 the mini target is out of reach; below it a solution turns up
n = 200
print("mini target:", mini_target(1, n))
for c in (1.5, 3.0):
    out = mini_wsat_solve(generate(RandomModelParams(n=n, d=2, k=1, c=c, seed=0)))
    print(f"c={c}:", out.status, out.true_vars)
