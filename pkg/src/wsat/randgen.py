"""Seeded sampling from the random model W(n, p, k, d)(d').

Every d-subset of variables becomes a hyperedge independently with
probability ``p``; each hyperedge carries one clause whose sign pattern is
uniform over the patterns with at least ``d'`` negated literals.

Randomness comes from numpy's Philox4x64 bit generator seeded through
``SeedSequence``.  Only raw 64-bit words are consumed and turned into
uniforms/integers here, so instances do not depend on numpy's
distribution code.  Model version tag: ``wdsat-v1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .cnf import Clause, Formula, Instance

MODEL_TAG = "wdsat-v1"
_CHUNK_MIN = 1024


class ParameterError(ValueError):
    pass


def derive_p(n: int, d: int, dprime: int, c: float) -> float:
    """Edge probability ``c * ln(n) / n**(d - dprime)``."""
    return c * math.log(n) / n ** (d - dprime)


def derive_c(n: int, d: int, dprime: int, p: float) -> float:
    return p * n ** (d - dprime) / math.log(n)


@dataclass(frozen=True)
class RandomModelParams:
    """Parameters of one draw.  Exactly one of ``p``/``c`` is given; the other is derived."""

    n: int
    d: int
    dprime: int = 1
    k: int = 0
    p: float | None = None
    c: float | None = None
    seed: int = 0
    p_from_c: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self):
        n, d, dp = self.n, self.d, self.dprime
        for name in ("p", "c"):
            if getattr(self, name) is not None:
                object.__setattr__(self, name, float(getattr(self, name)))
        if d < 2:
            raise ParameterError("clause arity d must be at least 2")
        if not 1 <= dp <= d <= n:
            raise ParameterError(f"need 1 <= d' <= d <= n, got d'={dp}, d={d}, n={n}")
        if self.k < 0:
            raise ParameterError("k must be non-negative")
        if not 0 <= self.seed < 2**64:
            raise ParameterError("seed must be a 64-bit unsigned integer")
        if (self.p is None) == (self.c is None):
            if self.p is None:
                raise ParameterError("one of p or c is required")
            # Both present (e.g. read back from a file): keep p, it is what was sampled with.
            return
        if self.p is None:
            if n < 2:
                raise ParameterError("c requires n >= 2")
            p = derive_p(n, d, dp, self.c)
            if p > 1:
                raise ParameterError(f"p = c ln n / n^(d-d') = {p:.6g} exceeds 1")
            object.__setattr__(self, "p", p)
            object.__setattr__(self, "p_from_c", True)
        else:
            if n >= 2:
                object.__setattr__(self, "c", derive_c(n, d, dp, self.p))
        if not 0 <= self.p <= 1:
            raise ParameterError(f"p must lie in [0, 1], got {self.p}")


class ModelRNG:
    """Deterministic stream of raw 64-bit words with small derived samplers."""

    ALGORITHM = "philox4x64/seedsequence"

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._bitgen = np.random.Philox(np.random.SeedSequence(self.seed))

    def raw(self, size: int) -> np.ndarray:
        return self._bitgen.random_raw(size).astype(np.uint64)

    def uniform(self, size: int) -> np.ndarray:
        """Doubles in [0, 1) with 53 random bits."""
        return (self.raw(size) >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)

    def below(self, bound: int, size: int) -> np.ndarray:
        """Exactly uniform integers in ``[0, bound)`` by rejection."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        if bound == 1:
            return np.zeros(size, dtype=np.int64)
        lim = (2**64 // bound) * bound
        if lim == 2**64:
            return (self.raw(size) % np.uint64(bound)).astype(np.int64)
        limit = np.uint64(lim)
        out = np.empty(0, dtype=np.uint64)
        while out.size < size:
            w = self.raw(max(size - out.size, 16))
            out = np.concatenate([out, w[w < limit]])
        return (out[:size] % np.uint64(bound)).astype(np.int64)

    def geometric(self, p: float, size: int) -> np.ndarray:
        """Geometric(p) on {1, 2, ...} by inversion."""
        u = self.uniform(size)
        if p >= 1:
            return np.ones(size, dtype=np.int64)
        return 1 + np.floor(np.log1p(-u) / math.log1p(-p)).astype(np.int64)


@dataclass(frozen=True)
class CandidateClauseTable:
    """Admissible sign patterns for a d-clause with at least d' negations.

    ``patterns[i]`` is a tuple of d booleans, True meaning that position is negated.
    """

    d: int
    dprime: int
    patterns: tuple[tuple[bool, ...], ...]

    @classmethod
    def build(cls, d: int, dprime: int) -> "CandidateClauseTable":
        pats = []
        for j in range(dprime, d + 1):
            for neg in combinations(range(d), j):
                pats.append(tuple(i in neg for i in range(d)))
        pats.sort(key=lambda t: tuple(not b for b in t))
        return cls(d, dprime, tuple(pats))

    @property
    def a_d(self) -> int:
        return len(self.patterns)

    def signs(self) -> np.ndarray:
        """(a_d, d) array of +1/-1 multipliers."""
        return np.where(np.array(self.patterns, dtype=bool), -1, 1).astype(np.int64)


def _unrank_subsets(ranks: np.ndarray, n: int, d: int) -> np.ndarray:
    """Lexicographic d-subsets of ``{0..n-1}`` for each rank (vectorised).

    Uses the identity that the number of subsets whose smallest element lies
    in ``[b, a)`` equals ``C(n-b, r) - C(n-a, r)`` for ``r`` elements still to place.
    """
    m = ranks.size
    out = np.empty((m, d), dtype=np.int64)
    rank = ranks.astype(np.int64).copy()
    base = np.zeros(m, dtype=np.int64)
    for pos in range(d):
        r = d - pos
        # tail[a] = C(n - a, r), non-increasing in a.
        tail = np.array([math.comb(n - a, r) for a in range(n + 1)], dtype=np.int64)
        target = tail[base] - rank
        # Largest a with tail[a] >= target, found on the reversed (ascending) array.
        asc = tail[::-1]
        idx = np.searchsorted(asc, target, side="left")
        a = n - idx
        rank = rank - (tail[base] - tail[a])
        out[:, pos] = a
        base = a + 1
    return out


def sample_hypergraph(params: RandomModelParams, rng: ModelRNG) -> list[tuple[int, ...]]:
    """Hyperedges (1-based, sorted) chosen by geometric skips over the d-subsets."""
    return [tuple(int(v) for v in e) for e in _sample_edges_array(params, rng)]


def _sample_edges_array(params: RandomModelParams, rng: ModelRNG) -> np.ndarray:
    n, d, p = params.n, params.d, params.p
    total = math.comb(n, d)
    if total >= 2**62:
        raise ParameterError("C(n, d) too large for 64-bit ranking")
    if p <= 0 or total == 0:
        return np.empty((0, d), dtype=np.int64)
    if p >= 1:
        ranks = np.arange(total, dtype=np.int64)
    else:
        chunk = max(_CHUNK_MIN, int(total * p * 1.05) + 64)
        pieces = []
        pos = -1
        while True:
            steps = rng.geometric(p, chunk)
            idx = pos + np.cumsum(steps)
            inside = idx[idx < total]
            pieces.append(inside)
            if inside.size < idx.size:
                break
            pos = int(idx[-1])
        ranks = np.concatenate(pieces)
    return _unrank_subsets(ranks, n, d) + 1


def sample_clause(edge: Sequence[int], table: CandidateClauseTable, rng: ModelRNG) -> Clause:
    """One admissible clause on ``edge``, uniform over the table's patterns."""
    edge = sorted(edge)
    if len(edge) != table.d:
        raise ParameterError(f"edge has {len(edge)} variables, table expects {table.d}")
    pat = table.patterns[int(rng.below(table.a_d, 1)[0])]
    return tuple(-v if neg else v for v, neg in zip(edge, pat))


def sample_pattern_indices(table: CandidateClauseTable, rng: ModelRNG, size: int) -> np.ndarray:
    return rng.below(table.a_d, size)


def generate(params: RandomModelParams) -> Instance:
    """Draw one instance; bit-for-bit reproducible from ``params.seed``."""
    rng = ModelRNG(params.seed)
    edges = _sample_edges_array(params, rng)
    table = CandidateClauseTable.build(params.d, params.dprime)
    if len(edges):
        pats = sample_pattern_indices(table, rng, len(edges))
        lits = edges * table.signs()[pats]
        clauses = tuple(map(tuple, lits.tolist()))
    else:
        clauses = ()
    formula = Formula._trusted(params.n, clauses)
    return Instance(formula, params.k, params)


def trial_seed(master_seed: int, *keys: int) -> int:
    """64-bit seed derived from a master seed and integer keys (cell, trial, ...)."""
    ss = np.random.SeedSequence([int(master_seed), *map(int, keys)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])
