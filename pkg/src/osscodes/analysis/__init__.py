from .bler import achievability_bound, bler_single_layer_exact, bler_two_layer_bound
from .fbl import awgn_capacity, awgn_dispersion, normal_approx_rate
from .gains import (
    GainReport,
    distance_profile,
    effective_coding_gain,
    min_distance_exhaustive,
    nominal_coding_gain,
)
from .quadrature import QuadratureConfig
from .special import log_q, marcum_q_half, q_func, q_func_inv

__all__ = [
    "GainReport",
    "QuadratureConfig",
    "achievability_bound",
    "awgn_capacity",
    "awgn_dispersion",
    "bler_single_layer_exact",
    "bler_two_layer_bound",
    "distance_profile",
    "effective_coding_gain",
    "log_q",
    "marcum_q_half",
    "min_distance_exhaustive",
    "nominal_coding_gain",
    "normal_approx_rate",
    "q_func",
    "q_func_inv",
]
