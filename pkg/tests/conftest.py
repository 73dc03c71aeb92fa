import numpy as np
import pytest

from wsat import Formula, RandomModelParams, generate, trial_seed


def all_models_by_bitmask(formula):
    """Every satisfying total assignment as a TRUE-set, via 2^n bitmask enumeration."""
    n = formula.n
    masks = np.arange(1 << n, dtype=np.int64)
    ok = np.ones(1 << n, dtype=bool)
    for clause in formula.clauses:
        sat = np.zeros(1 << n, dtype=bool)
        for lit in clause:
            bit = ((masks >> (abs(lit) - 1)) & 1).astype(bool)
            sat |= bit if lit > 0 else ~bit
        ok &= sat
    return [frozenset(v + 1 for v in range(n) if m >> v & 1) for m in masks[ok].tolist()]


def weights_by_bitmask(formula):
    return {len(s) for s in all_models_by_bitmask(formula)}


def satisfies(formula, true_set):
    return all(any((l > 0) == (abs(l) in true_set) for l in c) for c in formula.clauses)


def random_instance(n, d, k, c=None, p=None, dprime=1, seed=0):
    return generate(RandomModelParams(n=n, d=d, dprime=dprime, k=k, c=c, p=p, seed=seed))


@pytest.fixture
def tiny():
    return Formula(2, ((-1, 2),))


def seeds(tag, count):
    return [trial_seed(tag, i) for i in range(count)]


def random_base_formula(rng, n, m, d_max=3):
    """Random formula whose clauses all contain a negated literal (not from the model)."""
    clauses = set()
    for _ in range(m):
        size = int(rng.integers(1, d_max + 1))
        vs = rng.choice(np.arange(1, n + 1), size=min(size, n), replace=False)
        signs = rng.integers(0, 2, size=len(vs))
        signs[int(rng.integers(len(vs)))] = 1
        clauses.add(tuple(sorted((-int(v) if s else int(v) for v, s in zip(vs, signs)), key=abs)))
    return Formula(n, tuple(sorted(clauses)))



ACCEPTANCE_LINES: list[str] = []


def report(criterion, ok, detail, warn_only=False):
    """Record one acceptance line; printed in the terminal summary."""
    status = "PASS" if ok else ("WARN" if warn_only else "FAIL")
    ACCEPTANCE_LINES.append(f"[{status}] {criterion}: {detail}")
    print(ACCEPTANCE_LINES[-1])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
