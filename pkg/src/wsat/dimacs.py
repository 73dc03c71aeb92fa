"""DIMACS CNF text with ``c key=value`` metadata comments.

Example::

    c model=wdsat-v1
    c n=4
    c d=2
    c dprime=1
    c k=1
    c p=0.5
    c c=1.4427
    c seed=7
    p cnf 4 2
    -1 2 0
    -2 -4 0

Recognised keys: k, n, d, dprime, p, c, seed, model.  Other comments are ignored.
"""
from __future__ import annotations

from typing import TextIO

from .cnf import Formula, FormulaError, Instance, canonical_clause
from .randgen import MODEL_TAG, ParameterError, RandomModelParams

_INT_KEYS = {"k", "n", "d", "dprime", "seed"}
_FLOAT_KEYS = {"p", "c"}


class DimacsError(ValueError):
    pass


def _read_meta(line: str, meta: dict) -> None:
    body = line[1:].strip()
    if "=" not in body or " " in body.split("=", 1)[0]:
        return
    key, value = (s.strip() for s in body.split("=", 1))
    try:
        if key in _INT_KEYS:
            meta[key] = int(value)
        elif key in _FLOAT_KEYS:
            meta[key] = float(value)
        elif key == "model":
            meta[key] = value
    except ValueError as exc:
        raise DimacsError(f"bad value in comment {line!r}") from exc


def parse_dimacs(text: str | TextIO, k: int | None = None, strict: bool = False) -> Instance:
    """Parse an instance.  ``k`` overrides any ``c k=`` comment.

    With ``strict`` every clause must have the declared arity ``d`` and at
    least ``dprime`` negated literals.
    """
    if not isinstance(text, str):
        text = text.read()
    meta: dict = {}
    header = None
    clauses = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            if header is None:
                _read_meta(line, meta)
            continue
        if line.startswith("p"):
            if header is not None:
                raise DimacsError(f"line {lineno}: second header")
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"line {lineno}: malformed header {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError as exc:
                raise DimacsError(f"line {lineno}: malformed header {line!r}") from exc
            if header[0] < 0 or header[1] < 0:
                raise DimacsError(f"line {lineno}: negative count in header")
            continue
        if header is None:
            raise DimacsError(f"line {lineno}: clause before header")
        try:
            nums = [int(tok) for tok in line.split()]
        except ValueError as exc:
            raise DimacsError(f"line {lineno}: non-integer token") from exc
        if nums[-1] != 0 or 0 in nums[:-1]:
            raise DimacsError(f"line {lineno}: clause not 0-terminated")
        lits = nums[:-1]
        n = header[0]
        for lit in lits:
            if not 1 <= abs(lit) <= n:
                raise DimacsError(f"line {lineno}: literal {lit} outside [-{n}, {n}]")
        try:
            clauses.append(canonical_clause(lits))
        except FormulaError as exc:
            raise DimacsError(f"line {lineno}: {exc}") from exc
    if header is None:
        raise DimacsError("missing 'p cnf' header")
    n, m = header
    if len(clauses) != m:
        raise DimacsError(f"header declares {m} clauses, found {len(clauses)}")
    if strict:
        if "d" not in meta:
            raise DimacsError("strict validation needs a 'c d=' comment")
        d, dprime = meta["d"], meta.get("dprime", 1)
        for c in clauses:
            if len(c) != d:
                raise DimacsError(f"clause {c} has arity {len(c)}, expected {d}")
            if sum(1 for l in c if l < 0) < dprime:
                raise DimacsError(f"clause {c} has fewer than {dprime} negated literals")
    try:
        formula = Formula(n, tuple(clauses))
    except FormulaError as exc:
        raise DimacsError(str(exc)) from exc
    if k is None:
        k = meta.get("k")
    params = None
    if "d" in meta and ("p" in meta or "c" in meta):
        try:
            params = RandomModelParams(
                n=n, d=meta["d"], dprime=meta.get("dprime", 1), k=meta.get("k", 0),
                p=meta.get("p"), c=meta.get("c"), seed=meta.get("seed", 0),
            )
        except ParameterError as exc:
            raise DimacsError(f"inconsistent model parameters: {exc}") from exc
    try:
        return Instance(formula, k, params)
    except FormulaError as exc:
        raise DimacsError(str(exc)) from exc


def read_instance(path, k: int | None = None, strict: bool = False) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_dimacs(fh.read(), k=k, strict=strict)


def serialize_dimacs(instance: Instance) -> str:
    lines = []
    params = instance.params
    if params is not None:
        lines.append(f"c model={MODEL_TAG}")
        lines.append(f"c n={params.n}")
        lines.append(f"c d={params.d}")
        lines.append(f"c dprime={params.dprime}")
    if instance.k is not None:
        lines.append(f"c k={instance.k}")
    if params is not None:
        lines.append(f"c p={params.p!r}")
        if params.c is not None:
            lines.append(f"c c={params.c!r}")
        lines.append(f"c seed={params.seed}")
    formula = instance.formula
    lines.append(f"p cnf {formula.n} {len(formula.clauses)}")
    lines.extend(" ".join(map(str, c)) + " 0" for c in formula.clauses)
    return "\n".join(lines) + "\n"


def write_instance(instance: Instance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_dimacs(instance))
