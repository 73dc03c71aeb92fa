"""Formulas, assignments, conditioning, REDUCE and the residual graph.

Literals are DIMACS-style signed integers: ``v`` is the positive literal of
variable ``v`` and ``-v`` its negation.  A clause is a tuple of literals sorted
by variable index, so structurally equal clauses compare equal.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Mapping

if TYPE_CHECKING:
    from .randgen import RandomModelParams

Clause = tuple[int, ...]


class FormulaError(ValueError):
    """Raised for structurally invalid formulas or assignments."""


class PartialAssignmentError(FormulaError):
    """A total assignment was required but some variables are unassigned."""


class ReduceInvariantError(RuntimeError):
    """REDUCE reached a state that its precondition rules out."""


def canonical_clause(literals: Iterable[int]) -> Clause:
    lits = tuple(sorted((int(l) for l in literals), key=abs))
    for a, b in zip(lits, lits[1:]):
        if abs(a) == abs(b):
            raise FormulaError(f"variable {abs(a)} occurs twice in clause {lits}")
    if any(l == 0 for l in lits):
        raise FormulaError("literal 0 is not allowed inside a clause")
    return lits


def negated_count(clause: Clause) -> int:
    return sum(1 for l in clause if l < 0)


@dataclass(frozen=True)
class Formula:
    """A CNF formula over variables ``1..n``.

    Clauses are canonicalised on construction; duplicates are rejected.
    """

    n: int
    clauses: tuple[Clause, ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise FormulaError("n must be non-negative")
        canon = tuple(canonical_clause(c) for c in self.clauses)
        seen = set()
        for c in canon:
            for l in c:
                if abs(l) > self.n:
                    raise FormulaError(f"literal {l} out of range for n={self.n}")
            if c in seen:
                raise FormulaError(f"duplicate clause {c}")
            seen.add(c)
        object.__setattr__(self, "clauses", canon)

    @classmethod
    def _trusted(cls, n: int, clauses: tuple[Clause, ...]) -> "Formula":
        # Skip validation: caller guarantees canonical, in-range, duplicate-free clauses.
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "clauses", clauses)
        return obj

    @property
    def m(self) -> int:
        return len(self.clauses)

    def __len__(self) -> int:
        return len(self.clauses)

    def variables(self) -> set[int]:
        """Variables occurring in at least one clause."""
        return {abs(l) for c in self.clauses for l in c}

    def is_empty(self) -> bool:
        return not self.clauses

    def __eq__(self, other):
        if not isinstance(other, Formula):
            return NotImplemented
        return self.n == other.n and set(self.clauses) == set(other.clauses)

    def __hash__(self):
        return hash((self.n, frozenset(self.clauses)))


@dataclass(frozen=True)
class Assignment:
    """A (possibly partial) map from variables to truth values."""

    values: Mapping[int, bool] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "values", {int(v): bool(b) for v, b in self.values.items()})

    @classmethod
    def from_true_set(cls, n: int, true_vars: Iterable[int]) -> "Assignment":
        """Total assignment on ``1..n`` with exactly ``true_vars`` set TRUE."""
        true_vars = set(true_vars)
        if any(not 1 <= v <= n for v in true_vars):
            raise FormulaError("TRUE variable out of range")
        return cls({v: v in true_vars for v in range(1, n + 1)})

    @property
    def weight(self) -> int:
        return sum(1 for b in self.values.values() if b)

    def true_set(self) -> list[int]:
        return sorted(v for v, b in self.values.items() if b)

    def is_total(self, n: int) -> bool:
        return all(v in self.values for v in range(1, n + 1))

    def __contains__(self, var: int) -> bool:
        return var in self.values

    def __getitem__(self, var: int) -> bool:
        return self.values[var]

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class Instance:
    """A formula together with its weight target and optional model parameters."""

    formula: Formula
    k: int | None = None
    params: "RandomModelParams | None" = None

    def __post_init__(self):
        if self.k is not None and self.k < 0:
            raise FormulaError("weight target must be non-negative")

    @property
    def n(self) -> int:
        return self.formula.n


class _Conflict:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "CONFLICT"

    def __bool__(self):
        return False


CONFLICT = _Conflict()


def _literal_true(lit: int, values: Mapping[int, bool]) -> bool:
    return values[abs(lit)] if lit > 0 else not values[abs(lit)]


def verify_assignment(formula: Formula, assignment: Assignment, k: int) -> bool:
    """True iff ``assignment`` satisfies every clause and has weight ``k``.

    Raises PartialAssignmentError unless the assignment covers ``1..n``.
    """
    values = assignment.values
    missing = [v for v in range(1, formula.n + 1) if v not in values]
    if missing:
        raise PartialAssignmentError(f"{len(missing)} variables unassigned, first {missing[0]}")
    if assignment.weight != k:
        return False
    return all(any(_literal_true(l, values) for l in c) for c in formula.clauses)


@dataclass(frozen=True)
class ResidualGraph:
    vertices: frozenset[int]
    adjacency: Mapping[int, frozenset[int]]

    def edges(self) -> set[tuple[int, int]]:
        return {(u, v) for u, nbrs in self.adjacency.items() for v in nbrs if u < v}

    def neighbors(self, v: int) -> frozenset[int]:
        return self.adjacency.get(v, frozenset())


def residual_graph(formula: Formula) -> ResidualGraph:
    """Primal graph: one clique per clause over its variables."""
    adj: dict[int, set[int]] = {}
    for c in formula.clauses:
        vs = [abs(l) for l in c]
        for v in vs:
            adj.setdefault(v, set())
        if len(vs) == 2:
            a, b = vs
            adj[a].add(b)
            adj[b].add(a)
        else:
            for i, a in enumerate(vs):
                for b in vs[i + 1:]:
                    adj[a].add(b)
                    adj[b].add(a)
    return ResidualGraph(frozenset(adj), {v: frozenset(s) for v, s in adj.items()})


def connected_components(graph: ResidualGraph) -> list[list[int]]:
    """Components as sorted lists, ordered by their smallest member."""
    seen: set[int] = set()
    out = []
    for start in sorted(graph.vertices):
        if start in seen:
            continue
        seen.add(start)
        comp = [start]
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in graph.adjacency[u]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        comp.sort()
        out.append(comp)
    return out


def induced_formula(formula: Formula, V: Iterable[int]) -> Formula:
    """Restrict to ``V``: keep clauses inside ``V`` and shortened clauses of length >= 2."""
    V = set(V)
    kept = []
    seen = set()
    for c in formula.clauses:
        short = tuple(l for l in c if abs(l) in V)
        if len(short) == len(c) or len(short) >= 2:
            if short not in seen:
                seen.add(short)
                kept.append(short)
    return Formula._trusted(formula.n, tuple(kept))


def condition(formula: Formula, partial: Assignment) -> Formula | _Conflict:
    """Apply ``partial`` without propagation; CONFLICT if a clause empties."""
    values = partial.values
    kept = []
    seen = set()
    for c in formula.clauses:
        rest = []
        sat = False
        for l in c:
            v = abs(l)
            if v in values:
                if values[v] == (l > 0):
                    sat = True
                    break
            else:
                rest.append(l)
        if sat:
            continue
        if not rest:
            return CONFLICT
        t = tuple(rest)
        if t not in seen:
            seen.add(t)
            kept.append(t)
    return Formula._trusted(formula.n, tuple(kept))


class _Propagator:
    """Occurrence-list unit propagation over a fixed clause list."""

    def __init__(self, formula: Formula, values: dict[int, bool] | None = None):
        self.clauses = formula.clauses
        self.n = formula.n
        self.values: dict[int, bool] = dict(values or {})
        occ: dict[int, list[int]] = {}
        for i, c in enumerate(self.clauses):
            for l in c:
                occ.setdefault(abs(l), []).append(i)
        self.occ = occ
        self.satisfied = [False] * len(self.clauses)
        self.remaining = [len(c) for c in self.clauses]

    def run(self, initial: Iterable[tuple[int, bool]], allow_true: bool) -> bool:
        """Assign ``initial`` then propagate to fixpoint.  Returns False on conflict."""
        values = self.values
        queue: deque[tuple[int, bool]] = deque(initial)
        # Existing assignments and unit clauses of the input count as forced too.
        pre = [(v, b) for v, b in values.items()]
        values.clear()
        queue.extendleft(reversed(pre))
        for i, c in enumerate(self.clauses):
            if len(c) == 1:
                queue.append((abs(c[0]), c[0] > 0))
        clauses, satisfied, remaining, occ = self.clauses, self.satisfied, self.remaining, self.occ
        while queue:
            var, val = queue.popleft()
            cur = values.get(var)
            if cur is not None:
                if cur != val:
                    return False
                continue
            if val and not allow_true:
                raise ReduceInvariantError(f"propagation forced variable {var} TRUE")
            values[var] = val
            for ci in occ.get(var, ()):
                if satisfied[ci]:
                    continue
                c = clauses[ci]
                lit = var if var in c else -var
                if (lit > 0) == val:
                    satisfied[ci] = True
                    continue
                remaining[ci] -= 1
                r = remaining[ci]
                if r == 0:
                    return False
                if r == 1:
                    for l in c:
                        if abs(l) not in values:
                            queue.append((abs(l), l > 0))
                            break
        return True

    def residual(self) -> Formula:
        values = self.values
        out = []
        seen = set()
        for i, c in enumerate(self.clauses):
            if self.satisfied[i]:
                continue
            if self.remaining[i] == len(c):
                t = c
            else:
                t = tuple(l for l in c if abs(l) not in values)
            if t not in seen:
                seen.add(t)
                out.append(t)
        return Formula._trusted(self.n, tuple(out))


def propagate(formula: Formula, assign: Mapping[int, bool]) -> tuple[Formula, Assignment] | _Conflict:
    """Assign ``assign`` and run unit propagation in both polarities."""
    prop = _Propagator(formula)
    if not prop.run(sorted(assign.items()), allow_true=True):
        return CONFLICT
    return prop.residual(), Assignment(prop.values)


def reduce(formula: Formula, U: Iterable[int]) -> tuple[Formula, Assignment]:
    """Set ``U`` FALSE and propagate forced FALSE values to a fixpoint.

    Requires every clause to contain a negated literal; under that condition
    propagation never forces TRUE and never empties a clause.
    """
    prop = _Propagator(formula)
    if not prop.run(((v, False) for v in sorted(set(U))), allow_true=False):
        raise ReduceInvariantError("a clause became empty during REDUCE")
    return prop.residual(), Assignment(prop.values)
