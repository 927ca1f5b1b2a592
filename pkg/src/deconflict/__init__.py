"""Strategic deconfliction for vehicle fleets on corridor routing networks.

Flight requests on a graph-structured network get diverse candidate routes
(penalized Dijkstra), candidate trajectories are checked pairwise for
separation, and the conflict-free selection is solved as a maximum
weighted independent set with interchangeable greedy, exact, and
simulated-annealing solvers. A discrete-time scheduler runs the whole loop
and a time-to-solution benchmark compares the solvers.
"""
from .bench import (
    BoxStats,
    MetricsTable,
    TtsRecord,
    collect_metrics,
    estimate_p_opt,
    run_tts_benchmark,
    summarize_tts,
    tts,
)
from .candidates import CandidateRoute, FlightRequest, generate_candidates, shortest_path
from .conflict import (
    ConflictGraph,
    ConflictVertex,
    build_conflict_graph,
    filter_against_active,
    min_separation,
    route_weight,
)
from .mwis import (
    IsingModel,
    MwisProblem,
    Qubo,
    brute_force_mwis,
    is_independent,
    load_instance,
    objective,
    qubo_to_ising,
    save_instance,
    to_qubo,
)
from .network import (
    NetworkError,
    RoutingNetwork,
    euclidean_distance,
    generate_synthetic_network,
    load_network,
    save_network,
)
from .scheduler import (
    RejectedRequest,
    ScheduledFlight,
    SimConfig,
    SimResult,
    StepRecord,
    generate_requests,
    load_requests,
    run_fifo_baseline,
    run_simulation,
    verify_separation,
)
from .solvers import (
    SaSchedule,
    SolverResult,
    exact_mwis,
    greedy_mwis,
    sa_sample_qubo,
    solve_mwis_via_sampler,
    steepest_descent,
)
from .trajectory import Trajectory, position_at, sample_trajectory

__version__ = "0.1.0"

__all__ = [
    "BoxStats", "CandidateRoute", "ConflictGraph", "ConflictVertex", "FlightRequest",
    "IsingModel", "MetricsTable", "MwisProblem", "NetworkError", "Qubo",
    "RejectedRequest", "RoutingNetwork", "SaSchedule", "ScheduledFlight", "SimConfig",
    "SimResult", "SolverResult", "StepRecord", "Trajectory", "TtsRecord",
    "brute_force_mwis", "build_conflict_graph", "collect_metrics", "estimate_p_opt",
    "euclidean_distance", "exact_mwis", "filter_against_active", "generate_candidates",
    "generate_requests", "generate_synthetic_network", "greedy_mwis", "is_independent",
    "load_instance", "load_network", "load_requests", "min_separation", "objective",
    "position_at", "qubo_to_ising", "route_weight", "run_fifo_baseline",
    "run_simulation", "run_tts_benchmark", "sa_sample_qubo", "sample_trajectory",
    "save_instance", "save_network", "shortest_path", "solve_mwis_via_sampler",
    "steepest_descent", "summarize_tts", "to_qubo", "tts", "verify_separation",
]
