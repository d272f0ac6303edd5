"""Simulator and attack planner for jamming attacks on decentralized federated learning."""

__version__ = "0.1.0"

from .graphs import (
    Topology,
    DirectedView,
    CutResult,
    build_topology,
    degrees,
    in_degrees,
    connected_components,
    directed_view,
    global_min_cut_undirected,
    global_min_cut_directed,
    brute_force_min_cut,
)
from .signals import ChannelParams, NodeDataset, DatasetBundle, build_datasets
from .fnn import FnnSpec, TrainConfig, param_count, init, forward, train_local, evaluate, federated_average
from .attacks import (
    AttackPlan,
    JammerPlacement,
    ndba_s1,
    mcba_s1,
    ndba_s2,
    mcba_s2,
    deploy_mincut,
    deploy_degree,
    no_attack,
    attack_all,
    random_attack_s1,
    random_attack_s2,
)
from .engine import ConvergenceConfig, ExperimentResult, convergence_time, effective_neighbors, run_experiment
from .report import SummaryRow, TableRow, ComparisonTable, summarize, emit
from .config import ExperimentConfig, ConfigError, make_config

__all__ = [name for name in dir() if not name.startswith("_")]
