"""Planted k-factor recovery: sampling, pruning, exact oracles, branching
theory and constructive alternating cycles."""

from .branching import core_fraction_prediction, extinction_probability
from .graph_core import BicoloredGraph, Graph, edge, is_k_factor, risk
from .planted import ModelParams, plant, trial_rng
from .pruning import degree_estimator, iterative_prune

__all__ = [
    "BicoloredGraph",
    "Graph",
    "ModelParams",
    "core_fraction_prediction",
    "degree_estimator",
    "edge",
    "extinction_probability",
    "is_k_factor",
    "iterative_prune",
    "plant",
    "risk",
    "trial_rng",
]
__version__ = "0.1.0"
