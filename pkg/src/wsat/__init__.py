"""Fixed-parameter solving of random weighted d-CNF instances."""
from .cnf import (
    CONFLICT,
    Assignment,
    Formula,
    FormulaError,
    Instance,
    PartialAssignmentError,
    ResidualGraph,
    condition,
    connected_components,
    induced_formula,
    propagate,
    reduce,
    residual_graph,
    verify_assignment,
)
from .dimacs import DimacsError, parse_dimacs, read_instance, serialize_dimacs, write_instance
from .harness import CellResult, ExperimentConfig, emit_csv, run_experiment
from .oracle import OracleRefusal, OracleResult, oracle_solve, oracle_weight_set
from .randgen import (
    CandidateClauseTable,
    ModelRNG,
    ParameterError,
    RandomModelParams,
    derive_p,
    generate,
    sample_clause,
    sample_hypergraph,
    trial_seed,
)
from .solver import (
    FAILURE,
    SAT,
    UNSAT,
    FrozenWitness,
    SolveOutcome,
    WeightSet,
    component_weight_sets,
    dp_combine,
    find_frozen_on,
    find_k_frozen,
    mini_wsat_solve,
    size_gate,
    wsat_solve,
    wsat_solve_dprime,
)

__version__ = "0.1.0"
