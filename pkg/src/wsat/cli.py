"""Command line: ``wsat {gen,solve,oracle,experiment,verify}``.

Exit codes for solve/oracle/verify: 0 SAT (or valid), 1 UNSAT (or invalid),
2 FAILURE, 3 usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys

from .cnf import Assignment, FormulaError, verify_assignment
from .dimacs import DimacsError, parse_dimacs, read_instance, serialize_dimacs
from .harness import ConfigError, ExperimentConfig, emit_csv, run_experiment
from .oracle import DEFAULT_BUDGET, OracleRefusal, oracle_solve
from .randgen import ParameterError, RandomModelParams, generate
from .solver import FAILURE, SAT, SolverContractError, mini_wsat_solve, wsat_solve, wsat_solve_dprime

EXIT_CODES = {SAT: 0, "UNSAT": 1, FAILURE: 2}
EXIT_ERROR = 3


def _log_config(**info) -> None:
    print("config: " + json.dumps(info, sort_keys=True, default=str), file=sys.stderr)


def _load(path: str, k: int | None):
    instance = read_instance(path, k=k)
    if instance.k is None:
        raise DimacsError("no weight target: pass --k or add a 'c k=' comment")
    return instance


def cmd_gen(args) -> int:
    params = RandomModelParams(n=args.n, d=args.d, dprime=args.dprime, k=args.k,
                               p=args.p, c=args.c, seed=args.seed)
    _log_config(n=params.n, d=params.d, dprime=params.dprime, k=params.k,
                p=params.p, c=params.c, seed=params.seed)
    text = serialize_dimacs(generate(params))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_solve(args) -> int:
    instance = _load(args.infile, args.k)
    dprime = args.dprime
    if dprime is None:
        dprime = instance.params.dprime if instance.params is not None else 1
    variant = "mini" if args.mini else ("dprime" if dprime > 1 else "wsat")
    _log_config(file=args.infile, n=instance.n, m=len(instance.formula), k=instance.k, dprime=dprime,
                variant=variant, gate_mult=args.gate_mult, fallback_oracle=args.fallback_oracle,
                p=instance.params.p if instance.params else None)
    opts = dict(gate_mult=args.gate_mult, fallback_oracle=args.fallback_oracle)
    if args.mini:
        out = mini_wsat_solve(instance, **opts)
    elif dprime > 1:
        out = wsat_solve_dprime(instance, dprime, **opts)
    else:
        out = wsat_solve(instance, **opts)
    if args.json:
        print(json.dumps(out.to_json(), sort_keys=True))
    else:
        print(f"s {out.status}")
        if out.status == SAT:
            print("v " + " ".join(map(str, out.true_vars)) + " 0")
        if "fallback" in out.diagnostics:
            print(f"c fallback oracle: {out.diagnostics['fallback']}")
    return EXIT_CODES[out.status]


def cmd_oracle(args) -> int:
    instance = _load(args.infile, args.k)
    _log_config(file=args.infile, n=instance.n, m=len(instance.formula), k=instance.k, budget=args.budget)
    res = oracle_solve(instance.formula, instance.k, budget=args.budget)
    print(f"s {res.status}")
    if res.witness is not None:
        print("v " + " ".join(map(str, res.witness.true_set())) + " 0")
    print(f"c enumerated {res.enumerated}")
    return EXIT_CODES[res.status]


def read_true_set(path: str) -> list[int]:
    """TRUE variables from a file; negative entries, 0, and 'c'/'s' lines are skipped."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            tokens = line.split()
            if not tokens or tokens[0] in ("c", "s"):
                continue
            if tokens[0] == "v":
                tokens = tokens[1:]
            out.extend(v for v in map(int, tokens) if v > 0)
    return out


def cmd_verify(args) -> int:
    instance = _load(args.infile, args.k)
    true_vars = read_true_set(args.assignment)
    _log_config(file=args.infile, assignment=args.assignment, n=instance.n, k=instance.k)
    ok = verify_assignment(instance.formula, Assignment.from_true_set(instance.n, true_vars), instance.k)
    print("VALID" if ok else "INVALID")
    return 0 if ok else 1


def _load_toml(path: str) -> dict:
    try:
        import tomllib
    except ModuleNotFoundError:  # Python < 3.11
        import tomli as tomllib
    with open(path, "rb") as fh:
        return tomllib.load(fh)


_GRID_KEYS = ("n", "k", "d", "dprime", "c", "p")


def build_experiment_config(args) -> ExperimentConfig:
    settings: dict = {}
    if args.config:
        settings.update(_load_toml(args.config))
    for key in _GRID_KEYS:
        val = getattr(args, key)
        if val is not None:
            settings[key] = val
    for key in ("trials", "master_seed", "variant", "gate_mult", "jobs", "oracle_budget"):
        val = getattr(args, key)
        if val is not None:
            settings[key] = val
    if args.fallback_oracle:
        settings["fallback_oracle"] = True
    if args.no_timing:
        settings["record_timing"] = False
    settings["out"] = args.out
    for key in _GRID_KEYS:
        if key in settings and not isinstance(settings[key], (list, tuple)):
            settings[key] = [settings[key]]
    try:
        return ExperimentConfig(**settings)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def cmd_experiment(args) -> int:
    config = build_experiment_config(args)
    _log_config(**config.resolved())
    results = run_experiment(config)
    for r in results:
        print(f"n={r.cell.n} d={r.cell.d} dprime={r.cell.dprime} k={r.cell.k} c={r.c:.4g} "
              f"sat={r.n_sat} unsat={r.n_unsat} fail={r.n_fail}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wsat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="sample an instance from W(n,p,k,d)(d')")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--dprime", type=int, default=1)
    g.add_argument("--k", type=int, required=True)
    rate = g.add_mutually_exclusive_group(required=True)
    rate.add_argument("--p", type=float)
    rate.add_argument("--c", type=float)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="run W-SAT on an instance file")
    s.add_argument("--in", dest="infile", required=True)
    s.add_argument("--k", type=int)
    s.add_argument("--dprime", type=int)
    s.add_argument("--mini", action="store_true")
    s.add_argument("--gate-mult", type=float, default=1.0)
    s.add_argument("--fallback-oracle", action="store_true")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_solve)

    o = sub.add_parser("oracle", help="exhaustive search for a weight-k model")
    o.add_argument("--in", dest="infile", required=True)
    o.add_argument("--k", type=int, required=True)
    o.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    o.set_defaults(func=cmd_oracle)

    e = sub.add_parser("experiment", help="run a parameter grid and write CSV")
    e.add_argument("--config", help="TOML file with grid and settings")
    e.add_argument("--n", type=int, nargs="+")
    e.add_argument("--k", type=int, nargs="+")
    e.add_argument("--d", type=int, nargs="+")
    e.add_argument("--dprime", type=int, nargs="+")
    e.add_argument("--c", type=float, nargs="+")
    e.add_argument("--p", type=float, nargs="+")
    e.add_argument("--trials", type=int)
    e.add_argument("--seed", dest="master_seed", type=int)
    e.add_argument("--variant", choices=("wsat", "dprime", "mini"))
    e.add_argument("--gate-mult", type=float)
    e.add_argument("--fallback-oracle", action="store_true")
    e.add_argument("--oracle-budget", type=int)
    e.add_argument("--no-timing", action="store_true", help="leave timing columns empty")
    e.add_argument("--jobs", type=int)
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_experiment)

    v = sub.add_parser("verify", help="check a claimed witness")
    v.add_argument("--in", dest="infile", required=True)
    v.add_argument("--assignment", required=True)
    v.add_argument("--k", type=int)
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DimacsError, FormulaError, ParameterError, ConfigError, SolverContractError,
            OracleRefusal, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
