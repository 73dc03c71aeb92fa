"""W-SAT: freeze, reduce, decompose, enumerate components, combine by DP.

Three entry points share one pipeline:

* :func:`wsat_solve` for the base model (every clause has a negated literal),
* :func:`wsat_solve_dprime` for clauses with at least ``d'`` negations, which
  branches over every (d'-1)-set of variables forced TRUE,
* :func:`mini_wsat_solve` for the miniaturised target ``round(k ln n)``.

A SAT answer always carries a verified witness.  UNSAT is only reported when
every step was exact; a component above the size gate yields FAILURE.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

from .cnf import (
    CONFLICT,
    Assignment,
    Clause,
    Formula,
    Instance,
    condition,
    connected_components,
    reduce,
    residual_graph,
    verify_assignment,
)
from .oracle import DEFAULT_BUDGET, OracleRefusal, oracle_solve

SAT, UNSAT, FAILURE = "SAT", "UNSAT", "FAILURE"

# Hard ceiling on brute force per component, whatever the gate multiplier says.
MAX_ENUM_BITS = 24


class SolverContractError(ValueError):
    """Input violates a solver precondition."""


@dataclass(frozen=True)
class FrozenWitness:
    """Disjoint positive bodies, each completing a clause whose negated part is ``S + {x}``."""

    variable: int
    bodies: tuple[tuple[int, ...], ...]
    on: tuple[int, ...] = ()

    def clauses(self) -> list[Clause]:
        neg = sorted((*self.on, self.variable))
        out = []
        for body in self.bodies:
            lits = [-v for v in neg] + list(body)
            out.append(tuple(sorted(lits, key=abs)))
        return out


@dataclass(frozen=True)
class WeightSet:
    component: tuple[int, ...]
    achievable: frozenset[int]
    witnesses: Mapping[int, Assignment]

    def true_vars(self, weight: int) -> list[int]:
        return self.witnesses[weight].true_set()


@dataclass
class DPTable:
    """``stages[t][a] = (previous sum, weight chosen for component t-1)``."""

    K: int
    stages: list[dict[int, tuple[int, int]]]

    def achievable(self, t: int | None = None) -> set[int]:
        t = len(self.stages) - 1 if t is None else t
        return set(self.stages[t])

    def representative(self, a: int, t: int | None = None) -> list[int] | None:
        t = len(self.stages) - 1 if t is None else t
        if a not in self.stages[t]:
            return None
        picks = []
        while t > 0:
            prev, b = self.stages[t][a]
            picks.append(b)
            a = prev
            t -= 1
        picks.reverse()
        return picks


@dataclass
class SolveOutcome:
    status: str
    witness: Assignment | None = None
    target: int | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def true_vars(self) -> list[int]:
        return self.witness.true_set() if self.witness is not None else []

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "target": self.target,
            "witness": self.true_vars if self.status == SAT else None,
            "diagnostics": self.diagnostics,
        }


def size_gate(n: int, multiplier: float = 1.0) -> int:
    """Largest component size handled by brute force: ``ceil(multiplier * log2 n)``."""
    if n < 2:
        return 1
    return max(1, math.ceil(multiplier * math.log2(n)))


# -- frozen variables -------------------------------------------------------

def _negated_index(formula: Formula) -> dict[tuple[int, ...], list[tuple[int, ...]]]:
    """Negated-variable tuple -> positive bodies of the clauses with that negated part."""
    index: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for c in formula.clauses:
        neg = tuple(-l for l in c if l < 0)
        index.setdefault(neg, []).append(tuple(l for l in c if l > 0))
    return index


def _greedy_disjoint(bodies: Iterable[tuple[int, ...]]) -> list[tuple[int, ...]]:
    used: set[int] = set()
    picked = []
    for body in sorted(bodies):
        if used.isdisjoint(body):
            picked.append(body)
            used.update(body)
    return picked


def find_k_frozen(formula: Formula, k: int) -> tuple[set[int], list[FrozenWitness]]:
    """Variables with at least ``k`` disjoint bodies in clauses ``-x | y1 | ...``.

    Bodies are packed greedily in ascending order: every report is backed by a
    witness, but for d > 2 a frozen variable can be missed.
    """
    if k <= 0:
        return set(range(1, formula.n + 1)), [FrozenWitness(v, ()) for v in range(1, formula.n + 1)]
    singles: dict[int, list[tuple[int, ...]]] = {}
    for c in formula.clauses:
        neg = [l for l in c if l < 0]
        if len(neg) == 1:
            singles.setdefault(-neg[0], []).append(tuple(l for l in c if l > 0))
    frozen = set()
    witnesses = []
    for x in sorted(singles):
        bodies = singles[x]
        if len(bodies) < k:
            continue
        picked = _greedy_disjoint(bodies)
        if len(picked) >= k:
            frozen.add(x)
            witnesses.append(FrozenWitness(x, tuple(picked)))
    return frozen, witnesses


def _frozen_on_from_index(index, S: tuple[int, ...], n: int, k: int) -> list[FrozenWitness]:
    Sset = set(S)
    out = []
    for x in range(1, n + 1):
        if x in Sset:
            continue
        bodies = index.get(tuple(sorted((*S, x))))
        if not bodies or len(bodies) < k:
            continue
        picked = _greedy_disjoint(bodies)
        if len(picked) >= k:
            out.append(FrozenWitness(x, tuple(picked), tuple(S)))
    return out


def find_frozen_on(formula: Formula, S: Iterable[int], k: int) -> set[int]:
    """Variables x with ``k`` disjoint bodies in clauses whose negated part is exactly ``S + {x}``."""
    S = tuple(sorted(set(S)))
    if k <= 0:
        return set(range(1, formula.n + 1)) - set(S)
    return {w.variable for w in _frozen_on_from_index(_negated_index(formula), S, formula.n, k)}


def frozen_on_witnesses(formula: Formula, S: Iterable[int], k: int) -> list[FrozenWitness]:
    S = tuple(sorted(set(S)))
    return _frozen_on_from_index(_negated_index(formula), S, formula.n, k)


# -- component brute force --------------------------------------------------

def _clause_tables(clauses: Sequence[Clause], pos: Mapping[int, int]):
    return [([pos[l] for l in c if l > 0], [pos[-l] for l in c if l < 0]) for c in clauses]


def _weight_set(clauses: Sequence[Clause], component: Sequence[int], K: int) -> WeightSet:
    comp = tuple(sorted(component))
    s = len(comp)
    if s > MAX_ENUM_BITS:
        raise SolverContractError(f"component of size {s} is too large to enumerate")
    pos = {v: i for i, v in enumerate(comp)}
    masks = np.arange(1 << s, dtype=np.int64)
    bits = [(masks >> i) & 1 for i in range(s)]
    ok = np.ones(1 << s, dtype=bool)
    for posv, negv in _clause_tables(clauses, pos):
        sat = np.zeros(1 << s, dtype=bool)
        for i in posv:
            sat |= bits[i].astype(bool)
        for i in negv:
            sat |= ~bits[i].astype(bool)
        ok &= sat
    weight = np.zeros(1 << s, dtype=np.int64)
    # Lexicographically smallest TRUE-set of a fixed size = largest mask with
    # the smallest variable in the most significant bit.
    lexkey = np.zeros(1 << s, dtype=np.int64)
    for i, b in enumerate(bits):
        weight += b
        lexkey |= b << (s - 1 - i)
    achievable = set()
    witnesses = {}
    for w in range(0, min(K, s) + 1):
        cand = ok & (weight == w)
        if not cand.any():
            continue
        best = int(masks[cand][np.argmax(lexkey[cand])])
        achievable.add(w)
        witnesses[w] = Assignment({v: bool(best >> i & 1) for i, v in enumerate(comp)})
    return WeightSet(comp, frozenset(achievable), witnesses)


def component_weight_sets(formula: Formula, component: Iterable[int], K: int,
                          gate: int | None = None) -> WeightSet:
    """Achievable weights in ``[0, K]`` of the clauses lying inside ``component``."""
    comp = sorted(set(component))
    if gate is not None and len(comp) > gate:
        raise SolverContractError(f"component of size {len(comp)} exceeds gate {gate}")
    inside = set(comp)
    clauses = [c for c in formula.clauses if all(abs(l) in inside for l in c)]
    return _weight_set(clauses, comp, K)


# -- dynamic program --------------------------------------------------------

def dp_table(lists: Sequence[Iterable[int]], K: int) -> DPTable:
    """Stage-wise table of sums reachable with one value from each list, capped at ``K``."""
    stages: list[dict[int, tuple[int, int]]] = [{0: (0, 0)}]
    for L in lists:
        vals = sorted(b for b in set(L) if 0 <= b <= K)
        prev = stages[-1]
        cur: dict[int, tuple[int, int]] = {}
        for a in sorted(prev):
            for b in vals:
                s = a + b
                if s > K:
                    break
                if s not in cur:
                    cur[s] = (a, b)
        stages.append(cur)
        if not cur:
            # Every later stage is empty too.
            stages.extend({} for _ in range(len(lists) - len(stages) + 1))
            break
    return DPTable(K, stages)


def dp_combine(lists: Sequence[Iterable[int]], K: int) -> list[int] | None:
    """One value per list summing to ``K``, or None.  O(K^2 m)."""
    lists = list(lists)
    if K < 0:
        return None
    return dp_table(lists, K).representative(K)


# -- pipeline ---------------------------------------------------------------

def _require_negations(formula: Formula, dprime: int) -> None:
    for c in formula.clauses:
        if sum(1 for l in c if l < 0) < dprime:
            raise SolverContractError(f"clause {c} has fewer than {dprime} negated literals")


def _effective_k(instance: Instance) -> int:
    if instance.k is None:
        raise SolverContractError("instance has no weight target")
    return instance.k


@dataclass
class _Decomposition:
    status: str  # SAT / UNSAT / FAILURE
    true_vars: list[int]
    components: int
    max_component: int


def _decompose_and_combine(residual: Formula, free: Iterable[int], target: int, gate: int) -> _Decomposition:
    """Decompose the residual formula over the unassigned variables and run the DP."""
    graph = residual_graph(residual)
    comps = connected_components(graph)
    isolated = sorted(set(free) - graph.vertices)
    max_comp = max((len(c) for c in comps), default=0)
    if isolated:
        max_comp = max(max_comp, 1)
    ncomp = len(comps) + len(isolated)
    if max_comp > gate or max_comp > MAX_ENUM_BITS:
        return _Decomposition(FAILURE, [], ncomp, max_comp)
    owner = {}
    for i, comp in enumerate(comps):
        for v in comp:
            owner[v] = i
    grouped: list[list[Clause]] = [[] for _ in comps]
    for c in residual.clauses:
        grouped[owner[abs(c[0])]].append(c)
    sets = [_weight_set(grouped[i], comp, target) for i, comp in enumerate(comps)]
    # Canonical order: by smallest member, isolated singletons interleaved.
    parts: list[tuple[int, WeightSet | None]] = [(ws.component[0], ws) for ws in sets]
    parts += [(v, None) for v in isolated]
    parts.sort(key=lambda t: t[0])
    lists = [ws.achievable if ws is not None else (0, 1) for _, ws in parts]
    choice = dp_combine(lists, target)
    if choice is None:
        return _Decomposition(UNSAT, [], ncomp, max_comp)
    true_vars = []
    for (v, ws), w in zip(parts, choice):
        if ws is None:
            if w:
                true_vars.append(v)
        elif w:
            true_vars.extend(ws.true_vars(w))
    return _Decomposition(SAT, sorted(true_vars), ncomp, max_comp)


def _finish(formula: Formula, outcome: SolveOutcome, fallback_oracle: bool, budget: int) -> SolveOutcome:
    if outcome.status == SAT:
        if not verify_assignment(formula, outcome.witness, outcome.target):
            raise AssertionError("assembled witness does not verify")
    elif outcome.status == FAILURE and fallback_oracle:
        try:
            res = oracle_solve(formula, outcome.target, budget=budget)
            outcome.diagnostics["fallback"] = res.status
        except OracleRefusal:
            outcome.diagnostics["fallback"] = "REFUSED"
    return outcome


def _ms(t0: float) -> float:
    return (time.perf_counter() - t0) * 1000.0


def _solve_base(formula: Formula, target: int, threshold: int, gate_mult: float,
                fallback_oracle: bool, budget: int) -> SolveOutcome:
    n = formula.n
    gate = size_gate(n, gate_mult)
    diag: dict = {"gate": gate, "frozen": 0, "components": 0, "max_component": 0, "timings_ms": {}}
    if target > n or target < 0:
        return SolveOutcome(UNSAT, None, target, diag)
    if target == 0:
        out = SolveOutcome(SAT, Assignment.from_true_set(n, ()), 0, diag)
        return _finish(formula, out, fallback_oracle, budget)
    timings = diag["timings_ms"]
    t0 = time.perf_counter()
    frozen, _ = find_k_frozen(formula, threshold)
    timings["freeze"] = _ms(t0)
    diag["frozen"] = len(frozen)
    t0 = time.perf_counter()
    residual, partial = reduce(formula, frozen)
    timings["reduce"] = _ms(t0)
    diag["reduced_assigned"] = len(partial)
    t0 = time.perf_counter()
    free = [v for v in range(1, n + 1) if v not in partial]
    dec = _decompose_and_combine(residual, free, target, gate)
    timings["components_dp"] = _ms(t0)
    diag["components"] = dec.components
    diag["max_component"] = dec.max_component
    witness = Assignment.from_true_set(n, dec.true_vars) if dec.status == SAT else None
    return _finish(formula, SolveOutcome(dec.status, witness, target, diag), fallback_oracle, budget)


def wsat_solve(instance: Instance, gate_mult: float = 1.0, fallback_oracle: bool = False,
               oracle_budget: int = DEFAULT_BUDGET) -> SolveOutcome:
    """Decide whether the formula has a model with exactly ``instance.k`` TRUE variables."""
    k = _effective_k(instance)
    formula = instance.formula
    _require_negations(formula, 1)
    return _solve_base(formula, k, k, gate_mult, fallback_oracle, oracle_budget)


def mini_target(k: int, n: int) -> int:
    """``round(k ln n)``, halves rounded up."""
    return math.floor(k * math.log(n) + 0.5) if n >= 2 else 0


def mini_wsat_solve(instance: Instance, gate_mult: float = 1.0, fallback_oracle: bool = False,
                    oracle_budget: int = DEFAULT_BUDGET) -> SolveOutcome:
    """Weight target ``round(k ln n)``; freezing also uses that target as its threshold."""
    k = _effective_k(instance)
    formula = instance.formula
    _require_negations(formula, 1)
    K = mini_target(k, formula.n)
    out = _solve_base(formula, K, K, gate_mult, fallback_oracle, oracle_budget)
    out.diagnostics["k"] = k
    return out


def wsat_solve_dprime(instance: Instance, dprime: int | None = None, gate_mult: float = 1.0,
                      fallback_oracle: bool = False, oracle_budget: int = DEFAULT_BUDGET) -> SolveOutcome:
    """Solve instances whose clauses carry at least ``dprime`` negated literals."""
    if dprime is None:
        dprime = instance.params.dprime if instance.params is not None else 1
    if dprime <= 1:
        return wsat_solve(instance, gate_mult, fallback_oracle, oracle_budget)
    k = _effective_k(instance)
    formula = instance.formula
    _require_negations(formula, dprime)
    n = formula.n
    gate = size_gate(n, gate_mult)
    diag: dict = {"gate": gate, "dprime": dprime, "branches": 0, "gated_branches": 0,
                  "frozen": 0, "components": 0, "max_component": 0, "timings_ms": {}}
    if k > n:
        return SolveOutcome(UNSAT, None, k, diag)
    t_start = time.perf_counter()
    if k < dprime - 1:
        # Every model of weight < d'-1 is found by direct enumeration.
        for combo in combinations(range(1, n + 1), k):
            cand = Assignment.from_true_set(n, combo)
            diag["branches"] += 1
            if verify_assignment(formula, cand, k):
                diag["timings_ms"]["total"] = _ms(t_start)
                return _finish(formula, SolveOutcome(SAT, cand, k, diag), fallback_oracle, oracle_budget)
        diag["timings_ms"]["total"] = _ms(t_start)
        return SolveOutcome(UNSAT, None, k, diag)

    index = _negated_index(formula)
    frozen_total = 0
    target = k - (dprime - 1)
    for S in combinations(range(1, n + 1), dprime - 1):
        diag["branches"] += 1
        conditioned = condition(formula, Assignment({v: True for v in S}))
        if conditioned is CONFLICT:
            continue
        frozen = [w.variable for w in _frozen_on_from_index(index, S, n, k)] if k > 0 else []
        frozen_total += len(frozen)
        residual, partial = reduce(conditioned, frozen)
        Sset = set(S)
        free = [v for v in range(1, n + 1) if v not in Sset and v not in partial]
        dec = _decompose_and_combine(residual, free, target, gate)
        diag["components"] = max(diag["components"], dec.components)
        diag["max_component"] = max(diag["max_component"], dec.max_component)
        if dec.status == FAILURE:
            diag["gated_branches"] += 1
            continue
        if dec.status == SAT:
            diag["frozen"] = frozen_total / diag["branches"]
            diag["winning_set"] = list(S)
            diag["timings_ms"]["total"] = _ms(t_start)
            witness = Assignment.from_true_set(n, sorted(Sset | set(dec.true_vars)))
            return _finish(formula, SolveOutcome(SAT, witness, k, diag), fallback_oracle, oracle_budget)
    diag["frozen"] = frozen_total / diag["branches"] if diag["branches"] else 0
    diag["timings_ms"]["total"] = _ms(t_start)
    status = FAILURE if diag["gated_branches"] else UNSAT
    return _finish(formula, SolveOutcome(status, None, k, diag), fallback_oracle, oracle_budget)
