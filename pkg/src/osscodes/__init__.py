"""Orthogonal sparse superposition codes for the real AWGN channel."""
from .channel import (
    ChannelObservation,
    NoiseModel,
    RngStream,
    ebn0_from_sigma,
    sigma_from_ebn0,
    snr_from_sigma,
    transmit,
)
from .combinadic import combination_rank, combination_unrank
from .decoder import (
    DecodeResult,
    emap_ssc_decode,
    ordered_statistics_decode,
    posterior_support_score,
    two_stage_magnitude_decode,
)
from .dictionary import Dictionary, apply_dictionary, invert_dictionary
from .encoder import LayerPlacement, encode
from .spec import (
    CodeSpec,
    LayerSpec,
    ValidatedSpec,
    average_symbol_energy,
    code_rate,
    layer_bit_budget,
    single_layer,
    two_layer_pm,
    validate_spec,
)

__version__ = "0.1.0"

__all__ = [
    "average_symbol_energy",
    "ChannelObservation",
    "code_rate",
    "CodeSpec",
    "combination_rank",
    "combination_unrank",
    "DecodeResult",
    "Dictionary",
    "apply_dictionary",
    "invert_dictionary",
    "ebn0_from_sigma",
    "emap_ssc_decode",
    "encode",
    "layer_bit_budget",
    "LayerPlacement",
    "LayerSpec",
    "NoiseModel",
    "ordered_statistics_decode",
    "posterior_support_score",
    "RngStream",
    "sigma_from_ebn0",
    "single_layer",
    "snr_from_sigma",
    "transmit",
    "two_layer_pm",
    "two_stage_magnitude_decode",
    "validate_spec",
    "ValidatedSpec",
]
