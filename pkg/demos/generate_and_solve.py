"""
Generating and solving one weighted instance
============================================

Draw a random 2-CNF from the base model, solve it for weight 2,
and check the answer against brute force.
"""

from wsat import (RandomModelParams, generate, oracle_solve, serialize_dimacs,
                  verify_assignment, wsat_solve)

# p is derived from c as c ln n / n
params = RandomModelParams(n=200, d=2, k=2, c=1.0, seed=7)
inst = generate(params)
print(f"n={inst.formula.n} m={inst.formula.m} p={params.p:.5f}")

# The instance round-trips through DIMACS with its parameters in comments
print(serialize_dimacs(inst).splitlines()[:8])

out = wsat_solve(inst)
print(out.status, out.true_vars)
print("frozen:", out.diagnostics["frozen"], "largest component:", out.diagnostics["max_component"])

if out.status == "SAT":
    assert verify_assignment(inst.formula, out.witness, 2)

# Brute force is C(200, 2) = 19900 candidates here, cheap enough to compare
print("oracle:", oracle_solve(inst.formula, 2).status)
