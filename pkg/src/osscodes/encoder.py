"""Successive encoding: information bits -> disjoint layer supports -> codeword.

Each layer takes its slice of the message. The leading
``floor(log2 C(M, K))`` bits are a lexicographic rank selecting ``K``
relative positions among the first ``M`` still-free indices; the
remaining bits pick amplitudes, ``log2|A|`` bits per support index in
ascending index order, most significant bit first.

The batch functions work on ``(T, ...)`` arrays and are what the Monte
Carlo engine uses; :func:`encode` is the single-message wrapper.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .combinadic import combination_unrank_batch, fits_int64
from .dictionary import apply_dictionary
from .errors import BitLengthMismatch
from .spec import CodeSpec, ValidatedSpec, validate_spec


@dataclass(frozen=True)
class LayerPlacement:
    support: tuple[int, ...]
    values: tuple[float, ...]

    def to_dict(self) -> dict:
        return {"support": list(self.support), "values": list(self.values)}


@dataclass
class LayerFields:
    """Batch of per-layer message fields: support ranks and amplitude indices."""

    rank: np.ndarray  # (T,), int64 or object
    amp_index: np.ndarray  # (T, K) int64


def as_bits(bits) -> np.ndarray:
    """Coerce a bit string, sequence or array into a uint8 vector."""
    if isinstance(bits, str):
        if set(bits) - {"0", "1"}:
            raise BitLengthMismatch("bit string may only contain '0' and '1'")
        return np.frombuffer(bits.encode(), dtype=np.uint8) - ord("0")
    arr = np.asarray(bits)
    if arr.size and (np.any(arr < 0) or np.any(arr > 1)):
        raise BitLengthMismatch("bits must be 0 or 1")
    return arr.astype(np.uint8)


def bits_to_int(bits: np.ndarray, width: int, big: bool) -> np.ndarray:
    """MSB-first conversion of ``(T, width)`` bit rows to integers."""
    t = bits.shape[0]
    if width == 0:
        return np.zeros(t, dtype=object if big else np.int64)
    if not big:
        weights = np.left_shift(np.int64(1), np.arange(width - 1, -1, -1, dtype=np.int64))
        return bits.astype(np.int64) @ weights
    out = np.zeros(t, dtype=object)
    for j in range(width):
        out = out * 2 + bits[:, j].astype(object)
    return out


def int_to_bits(values: np.ndarray, width: int) -> np.ndarray:
    if values.dtype == object:
        out = np.zeros((values.shape[0], width), dtype=np.uint8)
        for j in range(width):
            out[:, j] = np.array([(int(v) >> (width - 1 - j)) & 1 for v in values], dtype=np.uint8)
        return out
    shifts = np.arange(width - 1, -1, -1, dtype=np.int64)
    return ((values.astype(np.int64)[:, None] >> shifts) & 1).astype(np.uint8)


def split_bits(vs: ValidatedSpec, bits: np.ndarray) -> list[LayerFields]:
    """Cut a ``(T, B)`` bit matrix into per-layer rank / amplitude fields."""
    if bits.shape[1] != vs.total_bits:
        raise BitLengthMismatch(f"expected {vs.total_bits} bits, got {bits.shape[1]}")
    t = bits.shape[0]
    fields = []
    pos = 0
    for layer, pool, sb, ab in zip(vs.layers, vs.pool_sizes, vs.support_bits, vs.symbol_bits):
        big = not fits_int64(pool, layer.k)
        rank = bits_to_int(bits[:, pos:pos + sb], sb, big)
        pos += sb
        width = layer.k * ab
        amp = bits_to_int(bits[:, pos:pos + width].reshape(t * layer.k, ab), ab, False).reshape(t, layer.k)
        pos += width
        fields.append(LayerFields(rank, amp))
    return fields


def join_bits(vs: ValidatedSpec, fields: Sequence[LayerFields]) -> np.ndarray:
    parts = []
    for f, sb, ab in zip(fields, vs.support_bits, vs.symbol_bits):
        t, k = f.amp_index.shape
        parts.append(int_to_bits(f.rank, sb))
        parts.append(int_to_bits(f.amp_index.reshape(t * k), ab).reshape(t, k * ab))
    return np.concatenate(parts, axis=1) if parts else np.zeros((0, 0), dtype=np.uint8)


def relative_to_absolute(free: np.ndarray, relative: np.ndarray) -> np.ndarray:
    """Map relative positions in each row's sorted free-index list to absolute indices."""
    # a stable sort on "taken" lists each row's free indices first, in ascending order
    order = np.argsort(~free, axis=1, kind="stable")
    return np.take_along_axis(order, relative, axis=1)


def absolute_to_relative(free: np.ndarray, absolute: np.ndarray) -> np.ndarray:
    order = np.cumsum(free, axis=1) - 1
    return np.take_along_axis(order, absolute, axis=1)


def place_batch(vs: ValidatedSpec, fields: Sequence[LayerFields]):
    """Return ``(x, supports)``: sparse messages ``(T, N)`` and per-layer absolute supports."""
    t = fields[0].rank.shape[0]
    x = np.zeros((t, vs.n))
    free = np.ones((t, vs.n), dtype=bool)
    rows = np.arange(t)[:, None]
    supports = []
    for layer, pool, f in zip(vs.layers, vs.pool_sizes, fields):
        rel = combination_unrank_batch(f.rank, pool, layer.k)
        absolute = relative_to_absolute(free, rel)
        alpha = np.asarray(layer.alphabet)
        x[rows, absolute] = alpha[f.amp_index]
        free[rows, absolute] = False
        supports.append(absolute)
    return x, supports


def encode_batch(spec: CodeSpec | ValidatedSpec, bits: np.ndarray):
    """Encode ``(T, B)`` bit rows. Returns ``(codewords, x, supports)``."""
    vs = validate_spec(spec)
    bits = np.atleast_2d(np.asarray(bits, dtype=np.uint8))
    fields = split_bits(vs, bits)
    x, supports = place_batch(vs, fields)
    return apply_dictionary(vs.dictionary, x), x, supports


def encode(spec: CodeSpec | ValidatedSpec, bits) -> tuple[np.ndarray, list[LayerPlacement]]:
    """Encode one message into a length-N codeword and its layer placements."""
    vs = validate_spec(spec)
    b = as_bits(bits)
    if b.ndim != 1 or b.shape[0] != vs.total_bits:
        raise BitLengthMismatch(f"expected {vs.total_bits} bits, got {b.size}")
    codewords, x, supports = encode_batch(vs, b[None, :])
    placements = []
    for sup in supports:
        s = np.sort(sup[0])
        placements.append(LayerPlacement(tuple(int(i) for i in s), tuple(float(x[0, i]) for i in s)))
    return codewords[0], placements


def random_bits(vs: ValidatedSpec, rng: np.random.Generator, count: int) -> np.ndarray:
    return rng.integers(0, 2, size=(count, vs.total_bits), dtype=np.uint8)
