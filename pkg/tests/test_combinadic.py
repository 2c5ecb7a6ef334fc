from itertools import combinations
from math import comb

import numpy as np
import pytest
from hypothesis import given, strategies as st

from osscodes.combinadic import (
    combination_rank,
    combination_rank_batch,
    combination_unrank,
    combination_unrank_batch,
)
from osscodes.errors import InvalidSubset, RankOutOfRange


def test_first_subset():
    assert combination_unrank(0, 4, 2) == [0, 1]
    assert combination_rank([0, 1], 4, 2) == 0


def test_rank_five_of_four_choose_two():
    expected = list(combinations(range(4), 2))[5]
    assert tuple(combination_unrank(5, 4, 2)) == expected == (2, 3)
    assert combination_rank([2, 3], 4, 2) == 5


@pytest.mark.parametrize("m,k", [(4, 2), (10, 3), (48, 2), (7, 7), (9, 1)])
def test_last_subset(m, k):
    last = list(range(m - k, m))
    assert combination_unrank(comb(m, k) - 1, m, k) == last
    assert combination_rank(last, m, k) == comb(m, k) - 1


@pytest.mark.parametrize("m,k", [(6, 3), (8, 2), (5, 5), (7, 1), (9, 4)])
def test_matches_lexicographic_enumeration(m, k):
    for r, subset in enumerate(combinations(range(m), k)):
        assert tuple(combination_unrank(r, m, k)) == subset
        assert combination_rank(subset, m, k) == r


def test_errors():
    with pytest.raises(RankOutOfRange):
        combination_unrank(6, 4, 2)
    with pytest.raises(RankOutOfRange):
        combination_unrank(-1, 4, 2)
    with pytest.raises(InvalidSubset):
        combination_rank([1, 1], 4, 2)
    with pytest.raises(InvalidSubset):
        combination_rank([0, 4], 4, 2)
    with pytest.raises(InvalidSubset):
        combination_rank([0], 4, 2)


@given(st.integers(1, 200), st.data())
def test_round_trip_big_integers(m, data):
    k = data.draw(st.integers(0, m))
    r = data.draw(st.integers(0, comb(m, k) - 1))
    assert combination_rank(combination_unrank(r, m, k), m, k) == r


@pytest.mark.parametrize("m,k", [(30, 3), (256, 2), (200, 20)])
def test_batch_matches_scalar(m, k, rng):
    total = comb(m, k)
    ranks = [int(rng.integers(0, 2**62)) % total for _ in range(50)] + [0, total - 1]
    dtype = object if total >= 2**62 else np.int64
    subsets = combination_unrank_batch(np.array(ranks, dtype=dtype), m, k)
    for r, row in zip(ranks, subsets):
        assert list(row) == combination_unrank(r, m, k)
    back = combination_rank_batch(subsets, m, k)
    assert [int(v) for v in back] == ranks
