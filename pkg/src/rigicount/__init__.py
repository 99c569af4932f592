"""Certify and verify realisation counts c_d(G) = r_d(G) = 2^(n-t) of rigid graphs."""
from __future__ import annotations

from .certify import CountCertificate, certify_count, predicted_count, spherical_count
from .experiment import ExperimentConfig, run_experiment
from .graph import Graph, cone, is_k_connected, k_core, peel_to_core, read_graph, vertex_connectivity, write_graph
from .ordering import ConstructionOrdering, OrderingFailure, construct_ordering, is_d_neighbourly, validate_ordering
from .props import PropertyReport, check_adjacency, check_sparsity, core_report
from .psd import PartialPSDMatrix, enumerate_completions, normalize_to_sphere, partial_core, predicted_completions
from .randgraph import EdgeOrdering, graph_at, hitting_times, sample_edge_ordering, sample_gnm, sample_gnp
from .realisations import count_real_and_complex, enumerate_realisations, tower_plan
from .rigidity import is_generically_d_rigid, is_generically_globally_d_rigid, rigidity_report

__version__ = "0.1.0"

__all__ = [
    "Graph", "cone", "is_k_connected", "k_core", "peel_to_core", "read_graph", "write_graph",
    "vertex_connectivity", "EdgeOrdering", "graph_at", "hitting_times", "sample_edge_ordering",
    "sample_gnm", "sample_gnp", "ConstructionOrdering", "OrderingFailure", "construct_ordering",
    "is_d_neighbourly", "validate_ordering", "is_generically_d_rigid", "is_generically_globally_d_rigid",
    "rigidity_report", "CountCertificate", "certify_count", "predicted_count", "spherical_count",
    "count_real_and_complex", "enumerate_realisations", "tower_plan", "PartialPSDMatrix",
    "enumerate_completions", "normalize_to_sphere", "partial_core", "predicted_completions",
    "PropertyReport", "check_adjacency", "check_sparsity", "core_report", "ExperimentConfig",
    "run_experiment",
]
