"""Grid experiments over the random model, aggregated per cell and written as CSV."""
from __future__ import annotations

import csv
import math
import statistics
import struct
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import product
from typing import Sequence

from .oracle import DEFAULT_BUDGET
from .randgen import RandomModelParams, derive_p, generate, trial_seed
from .solver import SAT, UNSAT, mini_target, mini_wsat_solve, wsat_solve, wsat_solve_dprime

VARIANTS = ("wsat", "dprime", "mini")

CSV_COLUMNS = (
    "n", "d", "dprime", "k", "c", "p", "trials", "master_seed",
    "n_sat", "n_unsat", "n_fail", "n_fail_sat", "n_fail_unsat",
    "mean_ms", "median_ms", "mean_frozen_frac", "mean_max_comp",
)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Cell:
    n: int
    d: int
    dprime: int
    k: int
    c: float | None = None
    p: float | None = None

    def params(self, seed: int) -> RandomModelParams:
        return RandomModelParams(n=self.n, d=self.d, dprime=self.dprime, k=self.k,
                                 p=self.p, c=self.c, seed=seed)

    def key(self) -> tuple[int, ...]:
        """Integers identifying the cell, used for seed derivation."""
        rate = self.c if self.c is not None else self.p
        (bits,) = struct.unpack("<Q", struct.pack("<d", float(rate)))
        return (self.n, self.d, self.dprime, self.k, int(self.c is not None), bits)


@dataclass
class ExperimentConfig:
    n: Sequence[int]
    k: Sequence[int]
    d: Sequence[int] = (2,)
    dprime: Sequence[int] = (1,)
    c: Sequence[float] | None = None
    p: Sequence[float] | None = None
    trials: int = 100
    master_seed: int = 0
    variant: str = "wsat"
    fallback_oracle: bool = False
    gate_mult: float = 1.0
    oracle_budget: int = DEFAULT_BUDGET
    record_timing: bool = True
    jobs: int = 1
    out: str | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if (self.c is None) == (self.p is None):
            raise ConfigError("give exactly one of a c-grid or a p-grid")
        if self.variant not in VARIANTS:
            raise ConfigError(f"variant must be one of {VARIANTS}")
        if not (self.n and self.k and self.d and self.dprime and (self.c or self.p)):
            raise ConfigError("grid is empty")

    def cells(self) -> list[Cell]:
        rates = self.c if self.c is not None else self.p
        out = []
        for n, d, dp, k, r in product(self.n, self.d, self.dprime, self.k, rates):
            cell = Cell(n, d, dp, k, c=r) if self.c is not None else Cell(n, d, dp, k, p=r)
            try:
                cell.params(0)
            except ValueError as exc:
                raise ConfigError(f"invalid cell {cell}: {exc}") from exc
            if self.variant == "mini" and dp != 1:
                raise ConfigError("the mini variant needs dprime = 1")
            if self.fallback_oracle:
                target = mini_target(k, n) if self.variant == "mini" else k
                if 0 <= target <= n and math.comb(n, target) > self.oracle_budget:
                    raise ConfigError(f"fallback oracle cannot cover C({n},{target}) within budget")
            out.append(cell)
        return out

    def resolved(self) -> dict:
        info = asdict(self)
        info["cells"] = []
        for cell in self.cells():
            p = cell.p if cell.p is not None else derive_p(cell.n, cell.d, cell.dprime, cell.c)
            info["cells"].append({**asdict(cell), "p": p})
        return info


@dataclass
class CellResult:
    cell: Cell
    trials: int
    master_seed: int
    n_sat: int = 0
    n_unsat: int = 0
    n_fail: int = 0
    n_fail_sat: int | None = None
    n_fail_unsat: int | None = None
    mean_ms: float | None = None
    median_ms: float | None = None
    mean_frozen_frac: float = 0.0
    mean_max_comp: float = 0.0
    times_ms: list[float] = field(default_factory=list, repr=False)

    @property
    def p(self) -> float:
        return self.cell.p if self.cell.p is not None else derive_p(
            self.cell.n, self.cell.d, self.cell.dprime, self.cell.c)

    @property
    def c(self) -> float:
        if self.cell.c is not None:
            return self.cell.c
        return self.p * self.cell.n ** (self.cell.d - self.cell.dprime) / math.log(self.cell.n)

    @property
    def sat_fraction(self) -> float:
        return self.n_sat / self.trials

    @property
    def decided_sat_fraction(self) -> float | None:
        """SAT share among trials that did not end in FAILURE."""
        decided = self.n_sat + self.n_unsat
        return self.n_sat / decided if decided else None

    @property
    def fail_fraction(self) -> float:
        return self.n_fail / self.trials


def run_trial(cell: Cell, seed: int, variant: str, gate_mult: float,
              fallback_oracle: bool, oracle_budget: int) -> dict:
    """Generate one instance and solve it; returns a flat record."""
    instance = generate(cell.params(seed))
    t0 = time.perf_counter()
    if variant == "wsat":
        out = wsat_solve(instance, gate_mult, fallback_oracle, oracle_budget)
    elif variant == "dprime":
        out = wsat_solve_dprime(instance, cell.dprime, gate_mult, fallback_oracle, oracle_budget)
    else:
        out = mini_wsat_solve(instance, gate_mult, fallback_oracle, oracle_budget)
    ms = (time.perf_counter() - t0) * 1000.0
    return {
        "status": out.status,
        "ms": ms,
        "frozen_frac": out.diagnostics.get("frozen", 0) / cell.n,
        "max_comp": out.diagnostics.get("max_component", 0),
        "fallback": out.diagnostics.get("fallback"),
    }


def _run_trial_args(args):
    return run_trial(*args)


def run_cell(config: ExperimentConfig, cell: Cell, executor=None) -> CellResult:
    seeds = [trial_seed(config.master_seed, *cell.key(), t) for t in range(config.trials)]
    args = [(cell, s, config.variant, config.gate_mult, config.fallback_oracle, config.oracle_budget)
            for s in seeds]
    # map() yields in submission order, so aggregation is schedule-independent.
    records = list(executor.map(_run_trial_args, args) if executor else map(_run_trial_args, args))
    res = CellResult(cell, config.trials, config.master_seed)
    if config.fallback_oracle:
        res.n_fail_sat = res.n_fail_unsat = 0
    for r in records:
        if r["status"] == SAT:
            res.n_sat += 1
        elif r["status"] == UNSAT:
            res.n_unsat += 1
        else:
            res.n_fail += 1
            if config.fallback_oracle:
                if r["fallback"] == SAT:
                    res.n_fail_sat += 1
                elif r["fallback"] == UNSAT:
                    res.n_fail_unsat += 1
    res.times_ms = [r["ms"] for r in records]
    if config.record_timing:
        res.mean_ms = statistics.fmean(res.times_ms)
        res.median_ms = statistics.median(res.times_ms)
    res.mean_frozen_frac = statistics.fmean(r["frozen_frac"] for r in records)
    res.mean_max_comp = statistics.fmean(r["max_comp"] for r in records)
    return res


def run_experiment(config: ExperimentConfig) -> list[CellResult]:
    cells = config.cells()
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as ex:
            results = [run_cell(config, cell, ex) for cell in cells]
    else:
        results = [run_cell(config, cell) for cell in cells]
    if config.out:
        emit_csv(results, config.out)
    return results


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def csv_rows(results: Sequence[CellResult]) -> list[list[str]]:
    rows = []
    for r in results:
        cell = r.cell
        rows.append([_fmt(v) for v in (
            cell.n, cell.d, cell.dprime, cell.k, float(r.c), float(r.p), r.trials, r.master_seed,
            r.n_sat, r.n_unsat, r.n_fail, r.n_fail_sat, r.n_fail_unsat,
            r.mean_ms, r.median_ms, float(r.mean_frozen_frac), float(r.mean_max_comp),
        )])
    return rows


def emit_csv(results: Sequence[CellResult], path) -> None:
    if not results:
        raise ValueError("no results to write")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        writer.writerows(csv_rows(results))

