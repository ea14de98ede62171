"""Solvers and benchmark tooling for multi-vehicle minimum-latency search:
find a stationary object on a weighted graph with M vehicles, minimizing the
probability-weighted expected arrival time."""

from .baseline import Partition, kmeans_pp, solve_kmeans
from .bench import (
    RunRecord,
    SetupStats,
    compute_stats,
    dump_routes,
    emit_csv,
    load_bks,
    parse_routes,
    run_setup,
    run_suite,
    solve_once,
)
from .clustering import cluster
from .grasp import (
    SolverConfig,
    construct,
    grasp_solve,
    lk_op,
    solve_proposed,
    vnd,
)
from .instance import (
    Instance,
    ProbabilityFileError,
    TsplibParseError,
    build_costs,
    gen_probabilities,
    load_probabilities,
    parse_tsplib,
)
from .objective import (
    CoverageError,
    Route,
    Solution,
    SolutionError,
    arrival_times,
    evaluate,
    evaluate_delta_2opt,
    reverse_segment,
    route_cost,
    swap_vertices,
)

__version__ = "0.1.0"

__all__ = [
    "Instance",
    "Partition",
    "Route",
    "RunRecord",
    "SetupStats",
    "Solution",
    "SolverConfig",
    "TsplibParseError",
    "ProbabilityFileError",
    "CoverageError",
    "SolutionError",
    "arrival_times",
    "build_costs",
    "cluster",
    "compute_stats",
    "construct",
    "dump_routes",
    "emit_csv",
    "evaluate",
    "evaluate_delta_2opt",
    "gen_probabilities",
    "grasp_solve",
    "kmeans_pp",
    "lk_op",
    "load_bks",
    "load_probabilities",
    "parse_routes",
    "parse_tsplib",
    "reverse_segment",
    "route_cost",
    "run_setup",
    "run_suite",
    "solve_kmeans",
    "solve_once",
    "solve_proposed",
    "swap_vertices",
    "vnd",
    "__version__",
]
