"""Minimum distance, nominal and effective coding gains."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import sparse

from ..encoder import encode_batch
from ..errors import CodebookTooLarge, DomainError, UnsupportedN
from ..spec import CodeSpec, ValidatedSpec, average_symbol_energy, code_rate, two_layer_pm, validate_spec

MAX_CODEBOOK_BITS = 20
DB_PER_DOUBLING = 0.2
_TIE = 1e-9


@dataclass(frozen=True)
class GainReport:
    nominal_gain_db: float
    effective_gain_db: float
    d_min_sq: float
    nearest_neighbors_per_bit: float


class Gain(NamedTuple):
    linear: float
    db: float


@dataclass(frozen=True)
class DistanceProfile:
    d_min: float
    d_min_sq: float
    mean_neighbors: float  # codewords at d_min, averaged over the codebook
    codebook_size: int


def all_messages(bits: int) -> np.ndarray:
    idx = np.arange(2**bits, dtype=np.int64)
    shifts = np.arange(bits - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts) & 1).astype(np.uint8)


def codebook(spec: CodeSpec | ValidatedSpec) -> np.ndarray:
    """Every sparse message vector ``x`` of the code, one row per message.

    Distances are dictionary-invariant, so the sparse domain is used.
    """
    vs = validate_spec(spec)
    if vs.total_bits > MAX_CODEBOOK_BITS:
        raise CodebookTooLarge(f"2^{vs.total_bits} codewords exceeds the 2^{MAX_CODEBOOK_BITS} limit")
    _, x, _ = encode_batch(vs, all_messages(vs.total_bits))
    return x


def _dense_profile(x: np.ndarray, energy: np.ndarray, chunk: int = 1024):
    best = math.inf
    count = 0
    for i0 in range(0, x.shape[0], chunk):
        block = x[i0:i0 + chunk]
        d2 = energy[i0:i0 + chunk, None] + energy[None, :] - 2.0 * block @ x.T
        d2[np.arange(block.shape[0]), np.arange(i0, i0 + block.shape[0])] = np.inf
        m = d2.min()
        if m < best - _TIE:
            best, count = m, 0
        if m <= best + _TIE:
            count += int(np.count_nonzero(d2 <= best + _TIE))
    return best, count


def distance_profile(spec: CodeSpec | ValidatedSpec, chunk: int = 4096) -> DistanceProfile:
    """Exhaustive minimum distance and nearest-neighbour multiplicity.

    Only pairs whose supports overlap can be closer than the two smallest
    codeword energies combined, so those pairs are scanned through a
    sparse Gram product; the dense all-pairs scan is used when that
    shortcut cannot decide.
    """
    x = codebook(spec)
    size = x.shape[0]
    if size < 2:
        raise DomainError("a code with one codeword has no minimum distance")
    energy = np.einsum("ij,ij->i", x, x)
    floor = float(np.sum(np.sort(energy)[:2]))
    xs = sparse.csr_matrix(x)
    best = math.inf
    count = 0
    for i0 in range(0, size, chunk):
        g = (xs[i0:i0 + chunk] @ xs.T).tocoo()
        rows = g.row + i0
        mask = rows != g.col
        d2 = energy[rows[mask]] + energy[g.col[mask]] - 2.0 * g.data[mask]
        if d2.size == 0:
            continue
        m = float(d2.min())
        if m < best - _TIE:
            best, count = m, 0
        if m <= best + _TIE:
            count += int(np.count_nonzero(d2 <= best + _TIE))
    if not best < floor - _TIE:
        best, count = _dense_profile(x, energy)
    best = max(best, 0.0)
    return DistanceProfile(math.sqrt(best), best, count / size, size)


def min_distance_exhaustive(spec: CodeSpec | ValidatedSpec) -> float:
    return distance_profile(spec).d_min


def nominal_coding_gain(spec: CodeSpec | ValidatedSpec, d_min: float) -> Gain:
    """``(d_min^2 / 4) / (Es / R)``."""
    if not d_min > 0:
        raise DomainError("d_min must be positive")
    g = (d_min**2 / 4.0) / (average_symbol_energy(spec) / code_rate(spec))
    return Gain(g, 10.0 * math.log10(g))


def _effective(nominal_db: float, per_bit: float) -> float:
    return nominal_db - DB_PER_DOUBLING * math.log2(per_bit)


def _power_of_two(n: int) -> int:
    if n < 2 or n & (n - 1):
        raise UnsupportedN(f"N={n} must be a power of two")
    return n.bit_length() - 1


def gain_report_for_spec(spec: CodeSpec | ValidatedSpec) -> GainReport:
    vs = validate_spec(spec)
    prof = distance_profile(vs)
    nominal = nominal_coding_gain(vs, math.sqrt(prof.d_min_sq))
    per_bit = prof.mean_neighbors / vs.total_bits
    return GainReport(nominal.db, _effective(nominal.db, per_bit), prof.d_min_sq, per_bit)


def effective_coding_gain(kind: str, n: int) -> GainReport:
    """Gain report for ``biorthogonal``, ``oss_single`` (K=1) or ``oss_two_layer`` (K=1, +-1) at length N."""
    if kind == "biorthogonal":
        m = _power_of_two(n)
        nominal_db = 10.0 * math.log10((m + 1) / 2.0)
        per_bit = (2 * n - 2) / m
        return GainReport(nominal_db, _effective(nominal_db, per_bit), 2.0 * n, per_bit)
    if kind == "oss_single":
        m = _power_of_two(n)
        nominal_db = 10.0 * math.log10(m / 2.0)
        per_bit = (n - 1) / m
        return GainReport(nominal_db, _effective(nominal_db, per_bit), 2.0, per_bit)
    if kind == "oss_two_layer":
        if n < 3:
            raise UnsupportedN("two-layer code needs N >= 3")
        return gain_report_for_spec(two_layer_pm(n))
    raise UnsupportedN(f"unknown code family {kind!r}")
