import math
from collections import Counter

import numpy as np
import pytest
from scipy import stats

from conftest import seeds
from wsat import (
    CandidateClauseTable,
    ModelRNG,
    ParameterError,
    RandomModelParams,
    derive_p,
    generate,
    sample_clause,
    sample_hypergraph,
    serialize_dimacs,
)
from wsat.randgen import sample_pattern_indices


def test_p_zero_gives_no_edges():
    assert sample_hypergraph(RandomModelParams(n=10, d=2, p=0.0), ModelRNG(1)) == []


def test_p_one_gives_all_pairs():
    edges = sample_hypergraph(RandomModelParams(n=4, d=2, p=1.0), ModelRNG(1))
    assert edges == [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]


def test_edges_sorted_and_distinct():
    edges = sample_hypergraph(RandomModelParams(n=25, d=3, p=0.2), ModelRNG(4))
    assert edges == sorted(set(edges))
    assert all(list(e) == sorted(e) and len(set(e)) == 3 for e in edges)


def test_mean_edge_count_binomial():
    n, d, p, runs = 30, 2, 0.1, 2000
    total = math.comb(n, d)
    counts = [len(sample_hypergraph(RandomModelParams(n=n, d=d, p=p, seed=s), ModelRNG(s)))
              for s in seeds(11, runs)]
    sd_of_mean = math.sqrt(total * p * (1 - p) / runs)
    assert abs(np.mean(counts) - total * p) <= 3 * sd_of_mean
    assert total * p == pytest.approx(43.5)


def test_d3_edge_count_binomial():
    n, d, p, runs = 16, 3, 0.05, 500
    total = math.comb(n, d)
    counts = [len(sample_hypergraph(RandomModelParams(n=n, d=d, p=p), ModelRNG(s)))
              for s in seeds(12, runs)]
    assert abs(np.mean(counts) - total * p) <= 3 * math.sqrt(total * p * (1 - p) / runs)


@pytest.mark.parametrize("d,dprime,expected", [
    (2, 1, 3), (2, 2, 1), (3, 1, 7), (3, 2, 4), (3, 3, 1), (4, 1, 15), (4, 2, 11), (4, 3, 5), (4, 4, 1),
])
def test_pattern_counts(d, dprime, expected):
    table = CandidateClauseTable.build(d, dprime)
    assert table.a_d == expected == sum(math.comb(d, j) for j in range(dprime, d + 1))
    assert len(set(table.patterns)) == table.a_d
    assert all(sum(p) >= dprime for p in table.patterns)


def test_d2_patterns_uniform_within_tolerance():
    table = CandidateClauseTable.build(2, 1)
    rng = ModelRNG(123)
    draws = Counter(sample_clause((1, 2), table, rng) for _ in range(30000))
    assert set(draws) == {(-1, 2), (1, -2), (-1, -2)}
    for count in draws.values():
        assert abs(count / 30000 - 1 / 3) <= 0.02


def test_all_negated_forced():
    table = CandidateClauseTable.build(3, 3)
    rng = ModelRNG(5)
    assert {sample_clause((2, 5, 9), table, rng) for _ in range(50)} == {(-2, -5, -9)}


@pytest.mark.parametrize("d", [2, 3, 4])
def test_pattern_chi_square(d):
    for dprime in range(1, d + 1):
        table = CandidateClauseTable.build(d, dprime)
        idx = sample_pattern_indices(table, ModelRNG(1000 * d + dprime), 10**5)
        observed = np.bincount(idx, minlength=table.a_d)
        if table.a_d == 1:
            assert observed[0] == 10**5
            continue
        assert stats.chisquare(observed).pvalue > 0.001


def test_derived_p():
    p = derive_p(100, 2, 1, 1.0)
    assert p == pytest.approx(math.log(100) / 100)
    assert math.comb(100, 2) * p == pytest.approx(227.96, abs=0.01)


def test_generate_mean_clause_count():
    runs = 500
    counts = [len(generate(RandomModelParams(n=100, d=2, k=1, c=1.0, seed=s)).formula)
              for s in seeds(13, runs)]
    p = derive_p(100, 2, 1, 1.0)
    total = math.comb(100, 2)
    assert abs(np.mean(counts) - total * p) <= 3 * math.sqrt(total * p * (1 - p) / runs)


def test_generate_is_deterministic():
    params = RandomModelParams(n=60, d=3, dprime=2, k=2, p=0.01, seed=2**63 + 5)
    a, b = generate(params), generate(params)
    assert a == b
    assert serialize_dimacs(a) == serialize_dimacs(b)


def test_generated_clauses_respect_model():
    for i, s in enumerate(seeds(14, 1000)):
        d = 2 + i % 3
        dprime = 1 + (i // 3) % d
        inst = generate(RandomModelParams(n=12, d=d, dprime=dprime, k=1, p=0.15, seed=s))
        clauses = inst.formula.clauses
        assert len(set(clauses)) == len(clauses)
        assert len({tuple(abs(l) for l in c) for c in clauses}) == len(clauses)
        for c in clauses:
            assert len(c) == d
            assert sum(1 for l in c if l < 0) >= dprime


def test_c_too_large_is_parameter_error():
    with pytest.raises(ParameterError):
        RandomModelParams(n=20, d=2, k=1, c=8.0)


@pytest.mark.parametrize("kwargs", [
    dict(n=5, d=1, p=0.1), dict(n=5, d=3, dprime=4, p=0.1), dict(n=2, d=3, p=0.1),
    dict(n=5, d=2, p=1.5), dict(n=5, d=2), dict(n=5, d=2, p=0.1, seed=-1),
])
def test_invalid_params(kwargs):
    with pytest.raises(ParameterError):
        RandomModelParams(**kwargs)


def test_derived_rate_recorded():
    params = RandomModelParams(n=50, d=2, p=0.1)
    assert params.c == pytest.approx(0.1 * 50 / math.log(50))
