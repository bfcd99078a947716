"""Calibrated nonparametric scan statistics for anomalous connected-subgraph detection."""

from .bounds import (ExtDegreeProfile, bound_table, ext_degree_profile,
                     lower_bound_neighborhood, lower_bound_percolation)
from .calibration import (AlphaGrid, CalibrationTable, calibrate_randomization,
                          calibrated_null_score_check, uncalibrated_table)
from .coretree import (CompressedGraph, CoreTreeDecomposition, compress_trees,
                       core_tree_decompose, expand_result)
from .detect import (DetectionResult, detect, detect_multiple, null_max_scores,
                     significance_test)
from .graph import (Graph, erdos_renyi, is_connected, load_edge_list,
                    random_walk_subgraph, serialize_edge_list)
from .merge import FrontierTable, frontier_interpolate, greedy_merge
from .metrics import detection_power, prf
from .scores import bj_score, cbj_score, chc_score, cks_score, kl_one_sided
from .signals import (SignalSpec, empirical_pvalue, inject_gaussian,
                      inject_piecewise, null_pvalues, two_stage_pvalue)

__version__ = "0.1.0"

__all__ = [
    "AlphaGrid", "CalibrationTable", "CompressedGraph", "CoreTreeDecomposition",
    "DetectionResult", "ExtDegreeProfile", "FrontierTable", "Graph", "SignalSpec",
    "bj_score", "bound_table", "calibrate_randomization",
    "calibrated_null_score_check", "cbj_score", "chc_score", "cks_score",
    "compress_trees", "core_tree_decompose", "detect", "detect_multiple",
    "detection_power", "empirical_pvalue", "erdos_renyi", "expand_result",
    "ext_degree_profile", "frontier_interpolate", "greedy_merge", "inject_gaussian",
    "inject_piecewise", "is_connected", "kl_one_sided", "load_edge_list",
    "lower_bound_neighborhood", "lower_bound_percolation", "null_max_scores",
    "null_pvalues", "prf", "random_walk_subgraph", "serialize_edge_list",
    "significance_test", "two_stage_pvalue", "uncalibrated_table",
]
