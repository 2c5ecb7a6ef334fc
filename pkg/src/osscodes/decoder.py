"""E-MAP-SSC decoding and its ordered-statistics specialisations.

Every decoder here works on a batch of observations ``(T, N)`` and
reports per-row diagnostics instead of raising, so Monte Carlo loops can
count malformed estimates as block errors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from .channel import ChannelObservation
from .combinadic import combination_rank_batch
from .dictionary import invert_dictionary
from .encoder import LayerFields, LayerPlacement, absolute_to_relative, join_bits
from .errors import UnsupportedSpecShape
from .spec import CodeSpec, LayerSpec, ValidatedSpec, validate_spec

DECODE_OVERFLOW = 1
SUPPORT_OUTSIDE_POOL = 2
SIGN_MISMATCH = 4

FLAG_NAMES = {
    DECODE_OVERFLOW: "DecodeOverflow",
    SUPPORT_OUTSIDE_POOL: "SupportOutsidePool",
    SIGN_MISMATCH: "SignMismatch",
}


def flag_names(mask: int) -> frozenset[str]:
    return frozenset(name for bit, name in FLAG_NAMES.items() if mask & bit)


@dataclass
class DecodeResult:
    bits: np.ndarray
    placements: list[LayerPlacement]
    flags: frozenset[str] = field(default_factory=frozenset)
    evaluations: int = 0

    def bit_string(self) -> str:
        return "".join(str(int(b)) for b in self.bits)

    def to_dict(self) -> dict:
        return {
            "bits": self.bit_string(),
            "placements": [p.to_dict() for p in self.placements],
            "flags": sorted(self.flags),
            "evaluations": self.evaluations,
        }


@dataclass
class BatchDecode:
    bits: np.ndarray  # (T, B) uint8
    supports: list[np.ndarray]  # per layer (T, K_l), ascending absolute indices
    amp_index: list[np.ndarray]  # per layer (T, K_l)
    flags: np.ndarray  # (T,) int bitmask
    evaluations: np.ndarray  # (T,) posterior evaluations performed


def support_log_odds(y, layer: LayerSpec, remaining: int, sigma: float, later=()):
    """Log posterior odds that a position belongs to ``layer``'s support.

    The competing hypotheses are "zero" and, when ``later`` layers are
    given, "belongs to one of them", each weighted by its share of the
    ``remaining`` free positions. With ``later=()`` the alternative is zero
    only. The common factor ``exp(-y^2 / 2 sigma^2)`` is divided out, so
    large ``|y| / sigma`` neither underflows nor saturates the ordering.
    """
    y = np.asarray(y, dtype=float)
    scale = 2.0 * sigma * sigma

    def log_mixture(lay: LayerSpec):
        a = np.asarray(lay.alphabet, dtype=float)
        if a.size == 1:
            return math.log(lay.k) + a[0] * (2.0 * y - a[0]) / scale
        expo = a * (2.0 * y[..., None] - a) / scale
        return math.log(lay.k) - math.log(a.size) + np.logaddexp.reduce(expo, axis=-1)

    zeros = remaining - layer.k - sum(l.k for l in later)
    alternative = np.full(y.shape, math.log(zeros) if zeros > 0 else -np.inf)
    for lay in later:
        alternative = np.logaddexp(alternative, log_mixture(lay))
    return log_mixture(layer) - alternative


def posterior_support_score(y_n: float, layer: LayerSpec, remaining: int, sigma: float, later=()) -> float:
    """``P(n in I_l | y_n)`` under the prior ``K_l / remaining``."""
    return float(expit(support_log_odds(y_n, layer, remaining, sigma, later)))


def top_k(scores: np.ndarray, candidates: np.ndarray, k: int) -> np.ndarray:
    """Indices of the ``k`` largest scores per row among ``candidates``; ties go to the lowest index."""
    s = np.where(candidates, scores, -np.inf)
    if k == 1:
        return np.argmax(s, axis=1)[:, None]
    kth = -np.partition(-s, k - 1, axis=1)[:, k - 1:k]
    gt = s > kth
    eq = (s == kth) & candidates
    need = k - gt.sum(axis=1, keepdims=True)
    sel = gt | (eq & (np.cumsum(eq, axis=1) <= need))
    return np.nonzero(sel)[1].reshape(s.shape[0], k)


def nearest_amplitude(values: np.ndarray, alphabet) -> np.ndarray:
    a = np.asarray(alphabet, dtype=float)
    if a.size == 1:
        return np.zeros(values.shape, dtype=np.int64)
    return np.argmin(np.abs(values[..., None] - a), axis=-1)


def _finish(vs: ValidatedSpec, supports, amp_index, flags, evaluations) -> BatchDecode:
    """Turn estimated supports and amplitudes back into information bits."""
    t = supports[0].shape[0]
    free = np.ones((t, vs.n), dtype=bool)
    rows = np.arange(t)[:, None]
    fields = []
    for layer, pool, sb, sup, amp in zip(vs.layers, vs.pool_sizes, vs.support_bits, supports, amp_index):
        rel = absolute_to_relative(free, sup)
        outside = np.any(rel >= pool, axis=1)
        flags |= np.where(outside, SUPPORT_OUTSIDE_POOL, 0)
        # first valid subset keeps outside-pool rows rankable; they are clamped below anyway
        safe = np.where(outside[:, None], np.arange(layer.k), rel)
        rank = combination_rank_batch(safe, pool, layer.k)
        cap = 2**sb - 1
        over = outside | (rank > cap)
        flags |= np.where(rank > cap, DECODE_OVERFLOW, 0)
        rank = np.where(over, cap, rank)
        if rank.dtype != object:
            rank = rank.astype(np.int64)
        fields.append(LayerFields(rank, amp))
        free[rows, sup] = False
    return BatchDecode(join_bits(vs, fields), supports, amp_index, flags, evaluations)


def emap_ssc_decode_batch(spec, y: np.ndarray, sigma: float) -> BatchDecode:
    vs = validate_spec(spec)
    z = invert_dictionary(vs.dictionary, np.atleast_2d(y))
    t, n = z.shape
    free = np.ones((t, n), dtype=bool)
    rows = np.arange(t)[:, None]
    evaluations = np.zeros(t, dtype=np.int64)
    scores = np.full((t, n), -np.inf)
    supports, amps = [], []
    for i, (layer, remaining) in enumerate(zip(vs.layers, vs.remaining)):
        scores.fill(-np.inf)
        scores[free] = support_log_odds(z[free], layer, remaining, sigma, vs.layers[i + 1:])
        evaluations += free.sum(axis=1)
        sup = top_k(scores, free, layer.k)
        amps.append(nearest_amplitude(z[rows, sup], layer.alphabet))
        supports.append(sup)
        free[rows, sup] = False
    return _finish(vs, supports, amps, np.zeros(t, dtype=np.int64), evaluations)


def _pm_shape(vs: ValidatedSpec) -> float:
    """Amplitude ``a`` if the code is ``{+a}`` single-layer or ``{+a},{-a}`` two-layer."""
    layers = vs.layers
    if all(len(l.alphabet) == 1 for l in layers) and layers[0].alphabet[0] > 0:
        a = layers[0].alphabet[0]
        if len(layers) == 1:
            return a
        if len(layers) == 2 and layers[1].alphabet[0] == -a:
            return a
    raise UnsupportedSpecShape("ordered statistics decoding needs A1={+a} (and A2={-a})")


def ordered_statistics_decode_batch(spec, y: np.ndarray, sigma: float | None = None) -> BatchDecode:
    vs = validate_spec(spec)
    _pm_shape(vs)
    z = invert_dictionary(vs.dictionary, np.atleast_2d(y))
    t, n = z.shape
    free = np.ones((t, n), dtype=bool)
    rows = np.arange(t)[:, None]
    supports, amps = [], []
    for sign, layer in zip((1.0, -1.0), vs.layers):
        sup = top_k(sign * z, free, layer.k)
        supports.append(sup)
        amps.append(np.zeros_like(sup))
        free[rows, sup] = False
    return _finish(vs, supports, amps, np.zeros(t, dtype=np.int64), np.zeros(t, dtype=np.int64))


def two_stage_magnitude_decode_batch(spec, y: np.ndarray, sigma: float | None = None) -> BatchDecode:
    vs = validate_spec(spec)
    layers = vs.layers
    if not (
        len(layers) == 2
        and layers[0].alphabet == (1.0,)
        and layers[1].alphabet == (-1.0,)
        and layers[0].k == layers[1].k
    ):
        raise UnsupportedSpecShape("two-stage decoding needs A1={+1}, A2={-1}, K1=K2")
    k = layers[0].k
    z = invert_dictionary(vs.dictionary, np.atleast_2d(y))
    t, n = z.shape
    rows = np.arange(t)[:, None]
    everything = np.ones((t, n), dtype=bool)
    chosen = top_k(np.abs(z), everything, 2 * k)
    vals = z[rows, chosen]
    positive = vals > 0
    ok = positive.sum(axis=1) == k
    # rows with the wrong sign count keep the k largest values as layer one
    rank_in_chosen = np.argsort(np.argsort(-vals, axis=1, kind="stable"), axis=1, kind="stable")
    first = np.where(ok[:, None], positive, rank_in_chosen < k)
    sup1 = np.sort(chosen[first].reshape(t, k), axis=1)
    sup2 = np.sort(chosen[~first].reshape(t, k), axis=1)
    flags = np.where(ok, 0, SIGN_MISMATCH).astype(np.int64)
    zeros = np.zeros((t, k), dtype=np.int64)
    return _finish(vs, [sup1, sup2], [zeros, zeros.copy()], flags, np.zeros(t, dtype=np.int64))


DECODERS = {
    "emap_ssc": emap_ssc_decode_batch,
    "ordered_stats": ordered_statistics_decode_batch,
    "two_stage": two_stage_magnitude_decode_batch,
}


def _single(vs: ValidatedSpec, batch: BatchDecode) -> DecodeResult:
    placements = []
    for layer, sup, amp in zip(vs.layers, batch.supports, batch.amp_index):
        order = np.argsort(sup[0])
        placements.append(
            LayerPlacement(
                tuple(int(i) for i in sup[0][order]),
                tuple(layer.alphabet[int(j)] for j in amp[0][order]),
            )
        )
    return DecodeResult(batch.bits[0], placements, flag_names(int(batch.flags[0])), int(batch.evaluations[0]))


def _observe(vs: ValidatedSpec, obs: ChannelObservation) -> np.ndarray:
    y = np.asarray(obs.y, dtype=float)
    if y.shape != (vs.n,):
        raise ValueError(f"observation must have length {vs.n}")
    return y[None, :]


def emap_ssc_decode(spec: CodeSpec | ValidatedSpec, obs: ChannelObservation) -> DecodeResult:
    vs = validate_spec(spec)
    return _single(vs, emap_ssc_decode_batch(vs, _observe(vs, obs), obs.sigma))


def ordered_statistics_decode(spec: CodeSpec | ValidatedSpec, obs: ChannelObservation) -> DecodeResult:
    vs = validate_spec(spec)
    return _single(vs, ordered_statistics_decode_batch(vs, _observe(vs, obs)))


def two_stage_magnitude_decode(spec: CodeSpec | ValidatedSpec, obs: ChannelObservation) -> DecodeResult:
    vs = validate_spec(spec)
    return _single(vs, two_stage_magnitude_decode_batch(vs, _observe(vs, obs)))
