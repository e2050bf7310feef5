"""BDI agents for integrated air defense: a radar jamming detector and a
local command-and-control center, on a small BDI kernel, with goal-conflict
checking, a scenario simulator and KS-based evaluation."""

from .distributions import CountSampler, DistributionSpec, ReferenceDist, generate_counts, reference_cdf
from .errors import (
    CycleGuardExceeded, EmptySample, EmptyVavpSet, IadError, InvalidSpec, ParseError,
    TickOrderError, ValidationError,
)
from .evaluation import ExperimentReport, KsResult, ks_critical, ks_statistic, ntd_series, run_ntd_experiment
from .eventlog import LogRecord, dump_log, load_log, log_roundtrip
from .goals import (
    Extension, GoalInferenceRule, check_conflicts, compute_extensions, parse_formula, parse_rule,
    validate_trace,
)
from .kernel import AgentState, Belief, BeliefSet, Event, PlanInstance, PlanSpec
from .lccc import (
    Aircraft, Assignment, Cluster, Interceptor, LcccAgent, VavpPoint, allocate_interceptors,
    enumerate_threat_instances, package_label, plan_rank, prioritize_clusters,
)
from .scenario import Scenario, load_bundled, load_scenario, parse_scenario
from .simulation import SimulationResult, run_simulation
from .srdr import JammingAction, RadarMode, RadarObservation, SrdrAgent, SrdrConfig, classify_ntd, compute_ntd

__version__ = "0.1.0"

__all__ = [
    "AgentState",
    "Aircraft",
    "Assignment",
    "Belief",
    "BeliefSet",
    "Cluster",
    "CountSampler",
    "CycleGuardExceeded",
    "DistributionSpec",
    "EmptySample",
    "EmptyVavpSet",
    "Event",
    "ExperimentReport",
    "Extension",
    "GoalInferenceRule",
    "IadError",
    "Interceptor",
    "InvalidSpec",
    "JammingAction",
    "KsResult",
    "LcccAgent",
    "LogRecord",
    "ParseError",
    "PlanInstance",
    "PlanSpec",
    "RadarMode",
    "RadarObservation",
    "ReferenceDist",
    "Scenario",
    "SimulationResult",
    "SrdrAgent",
    "SrdrConfig",
    "TickOrderError",
    "ValidationError",
    "VavpPoint",
    "allocate_interceptors",
    "check_conflicts",
    "classify_ntd",
    "compute_extensions",
    "compute_ntd",
    "dump_log",
    "enumerate_threat_instances",
    "generate_counts",
    "ks_critical",
    "ks_statistic",
    "load_bundled",
    "load_log",
    "load_scenario",
    "log_roundtrip",
    "ntd_series",
    "package_label",
    "parse_formula",
    "parse_rule",
    "parse_scenario",
    "plan_rank",
    "prioritize_clusters",
    "reference_cdf",
    "run_ntd_experiment",
    "run_simulation",
    "validate_trace",
]
