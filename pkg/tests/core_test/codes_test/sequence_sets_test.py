"""Tests of the type class index and the subset ranking."""

import itertools
import math

import pytest

from pirtradeoff.core.codes.errors import InfeasibleCodeError
from pirtradeoff.core.codes.sequence_sets import (
    TypeClassIndex,
    rank_subset,
    rate_bits,
    unrank_subset,
)


def test_rate_bits() -> None:
    pytest.assume(rate_bits(16, 0.75) == 12)
    pytest.assume(rate_bits(8, 1.7) == 14)
    pytest.assume(rate_bits(3, 0.1 + 0.2) == 1)
    pytest.assume(rate_bits(10, 0.0) == 0)


def test_subset_ranking() -> None:
    subsets = list(itertools.combinations(range(6), 3))
    ranks = [rank_subset(subset) for subset in subsets]

    pytest.assume(sorted(ranks) == list(range(math.comb(6, 3))))
    pytest.assume(rank_subset([0, 1, 2]) == 0)
    pytest.assume(unrank_subset(rank_subset([1, 3, 4]), 3) == [1, 3, 4])


def test_index_leaves_out_the_least_probable_class() -> None:
    index = TypeClassIndex(6, [0.75, 0.25], 6)
    all_ones = (1,) * 6

    pytest.assume(index.size == 63)
    pytest.assume(index.escape == 63)
    pytest.assume(not index.contains(all_ones))
    pytest.assume(index.rank(all_ones) == index.escape)
    pytest.assume(index.unrank(index.escape) is None)
    pytest.assume(index.admitted_mass() == pytest.approx(1 - 0.25**6))


def test_ranks_are_a_bijection() -> None:
    index = TypeClassIndex(5, [0.5, 0.25, 0.25], 8)
    sequences = list(itertools.product(range(3), repeat=5))
    ranks = {index.rank(sequence) for sequence in sequences}

    pytest.assume(index.size == 3**5)
    pytest.assume(ranks == set(range(3**5)))
    pytest.assume(all(index.unrank(index.rank(s)) == s for s in sequences[::17]))


def test_most_probable_sequences_come_first() -> None:
    index = TypeClassIndex(4, [0.75, 0.25], 4)

    pytest.assume(index.rank((0, 0, 0, 0)) == 0)
    pytest.assume(all(index.rank(s) < 5 for s in [(1, 0, 0, 0), (0, 0, 0, 1)]))


def test_infeasible_index() -> None:
    with pytest.raises(InfeasibleCodeError) as error:
        TypeClassIndex(8, [0.5, 0.5], 3)
    pytest.assume(error.value.min_delta is not None and error.value.min_delta >= 0)

    with pytest.raises(ValueError):
        TypeClassIndex(0, [0.5, 0.5], 3)
    with pytest.raises(ValueError):
        TypeClassIndex(4, [0.5, 0.6], 3)
    with pytest.raises(ValueError):
        TypeClassIndex(4, [0.5, 0.5], 4).rank((0, 1))
