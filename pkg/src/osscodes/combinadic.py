"""Lexicographic ranking of k-subsets (combinadic number system).

The scalar functions work on exact Python integers. The ``*_batch``
variants operate on 2-D arrays of subsets and fall back to ``object``
dtype whenever the binomials do not fit in int64.
"""
from __future__ import annotations

from functools import lru_cache
from math import comb
from typing import Sequence

import numpy as np

from .errors import InvalidSubset, RankOutOfRange

_INT64_LIMIT = 2**62


def combination_unrank(rank: int, m: int, k: int) -> list[int]:
    """Return the ``rank``-th k-subset of ``{0, ..., m-1}`` in lexicographic order."""
    total = comb(m, k)
    if k < 0 or m < 0 or not 0 <= rank < total:
        raise RankOutOfRange(f"rank {rank} outside [0, C({m},{k})={total})")
    out = []
    x = 0
    for i in range(k):
        remaining = k - 1 - i
        # skip every subset whose i-th element is x
        while True:
            block = comb(m - 1 - x, remaining)
            if rank < block:
                break
            rank -= block
            x += 1
        out.append(x)
        x += 1
    return out


def combination_rank(indices: Sequence[int], m: int, k: int) -> int:
    """Inverse of :func:`combination_unrank`."""
    idx = [int(i) for i in indices]
    if len(idx) != k:
        raise InvalidSubset(f"expected {k} indices, got {len(idx)}")
    for a, b in zip(idx, idx[1:]):
        if a >= b:
            raise InvalidSubset(f"indices must be strictly increasing: {idx}")
    if idx and (idx[0] < 0 or idx[-1] >= m):
        raise InvalidSubset(f"indices must lie in [0, {m})")
    return comb(m, k) - 1 - sum(comb(m - 1 - c, k - i) for i, c in enumerate(idx))


def fits_int64(m: int, k: int) -> bool:
    return comb(m, k) < _INT64_LIMIT


@lru_cache(maxsize=4096)
def binomial_table(m: int, k: int) -> np.ndarray:
    """``table[a, b] = C(a, b)`` for ``0 <= a <= m``, ``0 <= b <= k``; read-only."""
    dtype = np.int64 if comb(m, min(k, m // 2)) < _INT64_LIMIT else object
    table = np.zeros((m + 1, k + 1), dtype=dtype)
    table[:, 0] = 1
    for b in range(1, k + 1):
        # Pascal: C(a, b) = sum_{j<a} C(j, b-1)
        table[1:, b] = np.cumsum(table[:-1, b - 1])
    table.setflags(write=False)
    return table


@lru_cache(maxsize=4096)
def _step_sums(m: int, k: int) -> np.ndarray:
    """``sums[r, x] = sum_{j<x} C(m-1-j, r)``: ranks skipped by moving an element to ``x``."""
    table = binomial_table(m, k)
    sums = np.zeros((k, m + 1), dtype=table.dtype)
    for r in range(k):
        sums[r, 1:] = np.cumsum(table[m - 1::-1, r])
    sums.setflags(write=False)
    return sums


def combination_rank_batch(subsets: np.ndarray, m: int, k: int) -> np.ndarray:
    """Rank each row of ``subsets`` (shape ``(T, k)``, rows sorted ascending)."""
    subsets = np.asarray(subsets, dtype=np.int64)
    table = binomial_table(m, k)
    acc = np.full(subsets.shape[0], table[m, k] - 1, dtype=table.dtype)
    for i in range(k):
        acc = acc - table[m - 1 - subsets[:, i], k - i]
    return acc.astype(np.int64) if fits_int64(m, k) else acc


def combination_unrank_batch(ranks: np.ndarray, m: int, k: int) -> np.ndarray:
    """Unrank a vector of ranks into a ``(T, k)`` array of sorted subsets."""
    table = binomial_table(m, k)
    rank = np.array(ranks, dtype=table.dtype, copy=True)
    if rank.size and (np.any(rank < 0) or np.any(rank >= table[m, k])):
        raise RankOutOfRange(f"ranks must lie in [0, C({m},{k}))")
    sums = _step_sums(m, k)
    t = rank.shape[0]
    out = np.empty((t, k), dtype=np.int64)
    x = np.zeros(t, dtype=np.int64)
    for i in range(k):
        s = sums[k - 1 - i]
        target = s[x] + rank
        # furthest start whose skipped ranks still fit in what is left
        nxt = np.searchsorted(s, target, side="right") - 1
        rank = target - s[nxt]
        out[:, i] = nxt
        x = nxt + 1
    return out
