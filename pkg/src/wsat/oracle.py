"""Exhaustive ground truth for small instances.

Deliberately naive: no pruning, so the answers are easy to trust.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from .cnf import Assignment, Formula

DEFAULT_BUDGET = 10**7


class OracleRefusal(RuntimeError):
    """The requested enumeration exceeds the configured budget."""


@dataclass(frozen=True)
class OracleResult:
    status: str  # "SAT" or "UNSAT"
    witness: Assignment | None
    enumerated: int

    @property
    def sat(self) -> bool:
        return self.status == "SAT"


def _satisfied_by_true_set(formula: Formula, true_set: frozenset[int]) -> bool:
    for clause in formula.clauses:
        for lit in clause:
            if (lit > 0) == (abs(lit) in true_set):
                break
        else:
            return False
    return True


def oracle_solve(formula: Formula, k: int, budget: int = DEFAULT_BUDGET) -> OracleResult:
    """First weight-``k`` model in lexicographic order of TRUE-sets, or UNSAT."""
    n = formula.n
    if k < 0 or k > n:
        return OracleResult("UNSAT", None, 0)
    total = math.comb(n, k)
    if total > budget:
        raise OracleRefusal(f"C({n},{k}) = {total} exceeds budget {budget}")
    count = 0
    for combo in combinations(range(1, n + 1), k):
        count += 1
        if _satisfied_by_true_set(formula, frozenset(combo)):
            return OracleResult("SAT", Assignment.from_true_set(n, combo), count)
    return OracleResult("UNSAT", None, count)


def oracle_weight_set(formula: Formula, kmax: int, budget: int = DEFAULT_BUDGET) -> set[int]:
    """All weights in ``[0, kmax]`` achieved by some model, by full enumeration."""
    n = formula.n
    if 2**n > budget:
        raise OracleRefusal(f"2^{n} assignments exceed budget {budget}")
    found = set()
    for w in range(0, min(kmax, n) + 1):
        for combo in combinations(range(1, n + 1), w):
            if _satisfied_by_true_set(formula, frozenset(combo)):
                found.add(w)
                break
    return found
