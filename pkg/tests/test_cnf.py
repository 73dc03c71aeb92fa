import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import all_models_by_bitmask, random_base_formula, random_instance, satisfies
from wsat import (
    CONFLICT,
    Assignment,
    Formula,
    FormulaError,
    PartialAssignmentError,
    condition,
    connected_components,
    induced_formula,
    reduce,
    residual_graph,
    verify_assignment,
)
from wsat.cnf import ReduceInvariantError


def test_clauses_are_canonicalised():
    f = Formula(3, ((2, -1), (3, -2, 1)))
    assert f.clauses == ((-1, 2), (1, -2, 3))


@pytest.mark.parametrize("clauses", [((1, -1),), ((1, 4),), ((-1, 2), (2, -1))])
def test_invalid_formulas_rejected(clauses):
    with pytest.raises(FormulaError):
        Formula(3, clauses)


def test_assignment_weight():
    a = Assignment({1: True, 2: False, 3: True})
    assert a.weight == 2
    assert a.true_set() == [1, 3]


# -- verify_assignment ------------------------------------------------------

def test_verify_true(tiny):
    assert verify_assignment(tiny, Assignment({1: False, 2: True}), 1)


def test_verify_falsified_clause(tiny):
    assert not verify_assignment(tiny, Assignment({1: True, 2: False}), 1)


def test_verify_wrong_weight(tiny):
    assert not verify_assignment(tiny, Assignment({1: True, 2: True}), 1)


def test_verify_partial_is_an_error(tiny):
    with pytest.raises(PartialAssignmentError):
        verify_assignment(tiny, Assignment({1: False}), 0)


def test_all_zero_satisfies_non_monotone():
    for s in range(20):
        inst = random_instance(30, 3, 0, c=4, seed=s)
        assert verify_assignment(inst.formula, Assignment.from_true_set(30, ()), 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_verify_invariant_under_reordering(seed):
    rng = np.random.default_rng(seed)
    f = random_base_formula(rng, 8, 10)
    true_set = [v for v in range(1, 9) if rng.random() < 0.4]
    a = Assignment.from_true_set(8, true_set)
    shuffled = list(f.clauses)
    random.Random(seed).shuffle(shuffled)
    g = Formula(8, tuple(tuple(reversed(c)) for c in shuffled))
    assert verify_assignment(f, a, a.weight) == verify_assignment(g, a, a.weight)


# -- residual graph and components -----------------------------------------

def test_residual_graph_path():
    g = residual_graph(Formula(3, ((1, -2), (-2, 3))))
    assert g.edges() == {(1, 2), (2, 3)}


def test_residual_graph_empty():
    g = residual_graph(Formula(3, ()))
    assert not g.vertices and not g.edges()


def test_residual_graph_clique_per_clause():
    g = residual_graph(Formula(3, ((-1, 2, 3),)))
    assert g.edges() == {(1, 2), (1, 3), (2, 3)}


def test_residual_graph_excludes_isolated():
    g = residual_graph(Formula(5, ((-1, 2),)))
    assert g.vertices == {1, 2}


def test_components_two_pairs():
    g = residual_graph(Formula(4, ((-1, 2), (-3, 4))))
    assert connected_components(g) == [[1, 2], [3, 4]]


def test_components_path():
    g = residual_graph(Formula(3, ((-1, 2), (-2, 3))))
    assert connected_components(g) == [[1, 2, 3]]


def _union_find_partition(graph):
    parent = {v: v for v in graph.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for u, v in graph.edges():
        parent[find(u)] = find(v)
    groups = {}
    for v in graph.vertices:
        groups.setdefault(find(v), set()).add(v)
    return {frozenset(s) for s in groups.values()}


def test_components_match_union_find():
    for s in range(60):
        inst = random_instance(60, 2 + s % 2, 1, c=0.5 + s % 4, seed=s)
        g = residual_graph(inst.formula)
        comps = connected_components(g)
        assert {frozenset(c) for c in comps} == _union_find_partition(g)
        assert [c[0] for c in comps] == sorted(c[0] for c in comps)


# -- induced formula ----------------------------------------------------------

def test_induced_keeps_inner_clauses():
    f = Formula(4, ((-1, 2), (-3, 4)))
    assert induced_formula(f, {1, 2}) == Formula(4, ((-1, 2),))


def test_induced_shortens():
    f = Formula(3, ((-1, 2, 3),))
    assert induced_formula(f, {1, 2}) == Formula(3, ((-1, 2),))


def test_induced_drops_unit_remnants():
    assert induced_formula(Formula(2, ((-1, 2),)), {1}).is_empty()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.sets(st.integers(1, 12)))
def test_induced_graph_is_subgraph(seed, V):
    rng = np.random.default_rng(seed)
    f = random_base_formula(rng, 12, 18)
    sub = residual_graph(induced_formula(f, V))
    full = residual_graph(f)
    assert sub.vertices <= set(V)
    for u, v in sub.edges():
        assert u in V and v in V and v in full.neighbors(u)


# -- condition ---------------------------------------------------------------

def test_condition_deletes_false_literal():
    assert condition(Formula(2, ((-1, 2),)), Assignment({1: True})) == Formula(2, ((2,),))


def test_condition_removes_satisfied():
    assert condition(Formula(2, ((-1, 2),)), Assignment({1: False})).is_empty()


def test_condition_conflict():
    assert condition(Formula(1, ((-1,),)), Assignment({1: True})) is CONFLICT


def test_condition_does_not_propagate():
    f = Formula(3, ((-1, 2), (-2, 3)))
    out = condition(f, Assignment({1: True}))
    assert out == Formula(3, ((2,), (-2, 3)))


# -- reduce ------------------------------------------------------------------

def test_reduce_forced_chain():
    residual, partial = reduce(Formula(2, ((-1, 2),)), {2})
    assert residual.is_empty()
    assert dict(partial.values) == {1: False, 2: False}


def test_reduce_noop():
    f = Formula(2, ((-1, 2),))
    residual, partial = reduce(f, set())
    assert residual == f and len(partial) == 0


def test_reduce_rejects_monotone_conflict():
    with pytest.raises(ReduceInvariantError):
        reduce(Formula(2, ((1, 2),)), {1, 2})


def _audit_reduce(f, U):
    residual, partial = reduce(f, U)
    assert all(v is False for v in partial.values.values())
    assert set(U) <= set(partial.values)
    residual_set = set(residual.clauses)
    for clause in f.clauses:
        if any(abs(l) in partial and (l > 0) == partial[abs(l)] for l in clause):
            continue
        rest = tuple(l for l in clause if abs(l) not in partial)
        assert rest in residual_set
    for clause in residual.clauses:
        assert all(abs(l) not in partial for l in clause)
        assert len(clause) >= 2
    return residual, partial


def test_reduce_fuzz_never_true_and_represents_clauses():
    for s in range(200):
        inst = random_instance(20, 2 + s % 2, 1, c=1 + s % 5, seed=s)
        r = random.Random(s)
        U = {v for v in range(1, 21) if r.random() < 0.15}
        _audit_reduce(inst.formula, U)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 10))
def test_reduce_soundness(seed, usize):
    rng = np.random.default_rng(seed)
    n = 9
    f = random_base_formula(rng, n, 12)
    U = set(rng.choice(np.arange(1, n + 1), size=usize % n, replace=False).tolist())
    residual, partial = reduce(f, U)
    free = [v for v in range(1, n + 1) if v not in partial]
    for m in range(1 << len(free)):
        true_set = {v for i, v in enumerate(free) if m >> i & 1}
        assert satisfies(f, true_set) == satisfies(residual, true_set)


def test_reduce_emptiness_criterion_small():
    # Models of F extending the all-FALSE partial: exactly the free variables are unconstrained.
    for s in range(40):
        rng = np.random.default_rng(s)
        f = random_base_formula(rng, 10, 8)
        U = set(range(1, 11)) - {int(rng.integers(1, 11))}
        residual, partial = reduce(f, U)
        if not residual.is_empty():
            continue
        free = 10 - len(partial)
        weights = {len(m) for m in all_models_by_bitmask(f)}
        for k in range(0, 11):
            if free >= k:
                assert k in weights
