"""Exact combinatorics, constructions, bounds and rate estimates for codes
over the adversarial Z-channel (asymmetric 1 -> 0 errors)."""

from .words import Word, JointType, asym_delta, z_distance, hamming_distance, z_ball, z_sphere, joint_type
from .codes import (
    Code,
    RadiusCertificate,
    chebyshev_center,
    chebyshev_radius,
    list_decoding_radius,
    is_list_decodable,
    unique_decoding_check,
    load_code,
    save_code,
)
from .constructions import BalancedParams, StackedParams, balanced_code, unique_block_code, stacked_code
from .bounds import BoundReport, PlotkinPoint, plotkin_point

__version__ = "0.1.0"
