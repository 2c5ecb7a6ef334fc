"""Real AWGN channel, Eb/N0 conversions and counter-based noise streams.

Noise comes from Philox-4x64 keyed by ``(seed, stream_id)``. Trial ``t``
of a stream owns a fixed block of raw 64-bit words starting at counter
``t * words_per_trial / 4``, so any trial can be regenerated without
replaying the ones before it. Uniforms are ``(w >> 11) + 0.5`` scaled by
``2**-53`` and Gaussians come from the Box-Muller transform, which keeps
runs bit-identical across numpy versions and platforms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ZeroRate
from .spec import CodeSpec, ValidatedSpec, average_symbol_energy, code_rate

_MASK64 = (1 << 64) - 1
_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class NoiseModel:
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")


@dataclass(frozen=True)
class ChannelObservation:
    y: np.ndarray
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")


@dataclass(frozen=True)
class RngStream:
    seed: int
    stream_id: int = 0

    def bit_generator(self) -> np.random.Philox:
        return np.random.Philox(key=[self.seed & _MASK64, self.stream_id & _MASK64])

    def raw_block(self, start_trial: int, trials: int, words_per_trial: int) -> np.ndarray:
        """Raw uint64 words for trials ``[start_trial, start_trial + trials)``, shape ``(trials, words)``."""
        if words_per_trial % 4:
            raise ValueError("words_per_trial must be a multiple of 4")
        bg = self.bit_generator()
        if start_trial:
            bg.advance(start_trial * (words_per_trial // 4))
        return bg.random_raw(trials * words_per_trial).reshape(trials, words_per_trial)


def uniforms(words: np.ndarray) -> np.ndarray:
    """Map uint64 words to doubles in the open interval (0, 1)."""
    return ((words >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


def box_muller(words: np.ndarray, count: int) -> np.ndarray:
    """Standard normals from ``2 * ceil(count / 2)`` words along the last axis."""
    pairs = (count + 1) // 2
    u = uniforms(words[..., : 2 * pairs])
    u1, u2 = u[..., 0::2], u[..., 1::2]
    r = np.sqrt(-2.0 * np.log(u1))
    z = np.empty(words.shape[:-1] + (2 * pairs,))
    z[..., 0::2] = r * np.cos(_TWO_PI * u2)
    z[..., 1::2] = r * np.sin(_TWO_PI * u2)
    return z[..., :count]


def normal_words(n: int) -> int:
    return 2 * ((n + 1) // 2)


def standard_normal(rng: RngStream, count: int, start_trial: int = 0) -> np.ndarray:
    """``count`` standard normals forming trial ``start_trial`` of the stream."""
    words = normal_words(count)
    words += -words % 4
    return box_muller(rng.raw_block(start_trial, 1, words)[0], count)


def transmit(c: np.ndarray, model: NoiseModel, rng: RngStream, trial: int = 0):
    """Return the observation ``y = c + v`` with ``v ~ N(0, sigma^2 I)``."""
    c = np.asarray(c, dtype=float)
    v = standard_normal(rng, c.size, trial).reshape(c.shape)
    return ChannelObservation(c + model.sigma * v, model.sigma)


def sigma_from_ebn0(spec: CodeSpec | ValidatedSpec, ebn0_db: float) -> float:
    """Noise std per real dimension for a given Eb/N0, with ``Eb/N0 = SNR / (2R)``."""
    r = code_rate(spec)
    if r <= 0:
        raise ZeroRate("code carries no information bits")
    es = average_symbol_energy(spec)
    return math.sqrt(es / (2.0 * r * 10.0 ** (ebn0_db / 10.0)))


def snr_from_sigma(spec: CodeSpec | ValidatedSpec, sigma: float) -> float:
    """SNR per channel use in dB, ``Es / sigma^2``."""
    return 10.0 * math.log10(average_symbol_energy(spec) / sigma**2)


def ebn0_from_sigma(spec: CodeSpec | ValidatedSpec, sigma: float) -> float:
    r = code_rate(spec)
    if r <= 0:
        raise ZeroRate("code carries no information bits")
    return 10.0 * math.log10(average_symbol_energy(spec) / (2.0 * r * sigma**2))


def sigma_from_snr(spec: CodeSpec | ValidatedSpec, snr_db: float) -> float:
    return math.sqrt(average_symbol_energy(spec) / 10.0 ** (snr_db / 10.0))
