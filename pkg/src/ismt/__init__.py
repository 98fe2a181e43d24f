"""Doubling-tree 2-rho approximation for the internal Steiner minimum tree
problem on metric graphs, with exact brute-force oracles for small cases."""

from .core import (
    EulerMultigraph,
    PairConstruction,
    Solution,
    build_st_path,
    double_except_st_path,
    euler_walk,
    nearest_in_set,
    shortcut,
    solve,
)
from .errors import *  # noqa: F403
from .gen import GenSpec, generate
from .graph import (
    Instance,
    MetricGraph,
    Tree,
    WeightedRawGraph,
    induced_subgraph,
    is_feasible_ismt,
    metric_closure,
    tree_leaves,
    tree_weight,
    unique_path,
    validate_metric,
)
from .oracle import exact_ismt_bruteforce, exact_smt_bruteforce, lemma1_probe
from .steiner import EXACT_DW, TERMINAL_MST, SteinerSubroutine, dreyfus_wagner, terminal_mst
from .stp import parse_stp, to_instance, write_report, write_stp

__version__ = "0.1.0"
