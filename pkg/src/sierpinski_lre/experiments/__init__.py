"""Verification experiments built on the lattice, constraint and state layers."""

from .circuits import canonicalize, ergodicity_check, prepare_by_circuit, replay
from .correlations import block_correlation_suite, connected_pattern_check, single_site_suite
from .depth import causal_cone_check, depth_bound, inverse_depth_bound
from .detection import DetectionReport, detection_diameter_bound, error_detection_suite, flipper_negative_control
from .flipper import FlipperQuery, find_syndrome_flipper, four_loop_mask, v1_flipper

__all__ = [
    "DetectionReport",
    "FlipperQuery",
    "block_correlation_suite",
    "canonicalize",
    "causal_cone_check",
    "connected_pattern_check",
    "depth_bound",
    "detection_diameter_bound",
    "ergodicity_check",
    "error_detection_suite",
    "find_syndrome_flipper",
    "flipper_negative_control",
    "four_loop_mask",
    "inverse_depth_bound",
    "prepare_by_circuit",
    "replay",
    "single_site_suite",
    "v1_flipper",
]
