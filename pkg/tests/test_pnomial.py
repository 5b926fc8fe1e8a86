import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from trirm.pnomial import (
    WeightFunction,
    WeightKind,
    delta_distance,
    lemma_b1_check,
    pnomial,
    pnomial_cumulative,
    pnomial_gt,
    pnomial_le,
    pnomial_multinomial,
    pnomial_row,
    pnomial_series,
    split_degree,
    weight_count,
)


def expand(m, p):
    poly = np.array([1], dtype=object)
    for _ in range(m):
        poly = np.convolve(poly, np.ones(p, dtype=object))
    return [int(c) for c in poly]


def test_examples():
    assert pnomial_row(4, 3) == (1, 4, 10, 16, 19, 16, 10, 4, 1)
    assert pnomial(4, 4, 3) == 19
    assert pnomial(7, 0, 5) == 1
    assert pnomial(2, 1, 2) == 2
    assert pnomial(3, -1, 3) == 0 and pnomial(3, 7, 3) == 0


def test_cumulative_table_values():
    assert pnomial_cumulative(1, 5, 23, ">") == 17
    assert pnomial_cumulative(1, 5, 23, "≤") == 6
    assert pnomial_cumulative(58, 14, 2, "gt") == 288215893050995568
    assert pnomial_le(58, 14, 2) == 14483100716176
    with pytest.raises(ValueError):
        pnomial_cumulative(2, 1, 3, "<")


@given(st.sampled_from([2, 3, 5, 7]), st.integers(0, 30))
def test_symmetry_and_row_sum(p, m):
    row = pnomial_row(m, p)
    assert len(row) == m * (p - 1) + 1
    assert row == row[::-1]
    assert sum(row) == p**m
    for s in range(len(row)):
        assert pnomial_le(m, s, p) + pnomial_gt(m, s, p) == p**m


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_pascal_matches_expansion(p):
    for m in range(13):
        assert list(pnomial_row(m, p)) == expand(m, p)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_multinomial_identity(p):
    for m in range(7):
        for s in range(m * (p - 1) + 1):
            assert pnomial_multinomial(m, s, p) == pnomial(m, s, p)


def test_series_matches_rows():
    for p in (2, 3, 5):
        for s in (0, 3, 9):
            assert pnomial_series(s, p, 10) == [pnomial(m, s, p) for m in range(11)]


def test_weight_count_examples():
    H = WeightFunction.of(WeightKind.HAMMING, 3)
    assert weight_count(3, 2, H) == 12
    lee = WeightFunction.of("lee", 5)
    assert lee.table == (0, 1, 2, 2, 1)
    assert weight_count(2, 2, lee) == 8
    for kind in WeightKind:
        assert weight_count(4, 0, WeightFunction.of(kind, 5)) == 1


@pytest.mark.parametrize("kind", list(WeightKind))
@pytest.mark.parametrize("p", [2, 3, 5])
def test_weight_count_brute_force(kind, p):
    W = WeightFunction.of(kind, p)
    m = 3
    counts = {}
    for v in itertools.product(range(p), repeat=m):
        counts[W(v)] = counts.get(W(v), 0) + 1
    for k in range(max(counts) + 2):
        assert weight_count(m, k, W) == counts.get(k, 0)


def test_manhattan_is_pnomial():
    W = WeightFunction.of("manhattan", 5)
    assert all(weight_count(4, k, W) == pnomial(4, k, 5) for k in range(17))


def test_hamming_closed_form():
    H = WeightFunction.of("hamming", 7)
    assert all(weight_count(5, k, H) == 6**k * math.comb(5, k) for k in range(6))


def test_delta_examples():
    assert delta_distance(1, 14, 5, 23) == 3
    assert delta_distance(58, 38, 14, 2) == 21700
    assert sum(math.comb(20, i) for i in range(15, 21)) == 21700
    assert delta_distance(2, 1, 1, 3) == 3
    with pytest.raises(ValueError):
        delta_distance(2, 5, 0, 3)
    with pytest.raises(ValueError):
        delta_distance(2, -1, 0, 3)


def test_delta_beta_zero_identity():
    # beta = 0 collapses the j-sum to a single cumulative count by Pascal
    for p in (2, 3, 5):
        for m in range(1, 6):
            for alpha in range(m):
                r = alpha * (p - 1)
                for w in range(-1, m * (p - 1) + 1):
                    assert delta_distance(m, r, w, p) == pnomial_gt(m - alpha, w, p)


def test_delta_unpunctured_is_schwartz_zippel():
    # w = -1 removes nothing: Delta is the RM distance (p - beta) p**(m - alpha - 1)
    for p in (2, 3, 5, 7):
        for m in range(1, 5):
            for r in range(m * (p - 1)):
                a, b = split_degree(r, p)
                assert delta_distance(m, r, -1, p) == (p - b) * p ** (m - a - 1)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_delta_monotone(p):
    for m in range(1, 6):
        top = m * (p - 1)
        for r in range(top):
            for w in range(top):
                d = delta_distance(m, r, w, p)
                assert delta_distance(m, r + 1, w, p) <= d
                assert delta_distance(m, r, w + 1, p) <= d


def test_lemma_b_examples():
    assert lemma_b1_check(3, 4, 2, 1, 3)
    assert lemma_b1_check(3, 4, 2, 0, 3)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_lemma_b_grid(p):
    for m in range(1, 7):
        top = m * (p - 1)
        for r in range(top + 1):
            for w in range(top + 1):
                for A in range(min(p - 1, r) + 1):
                    assert lemma_b1_check(m, r, w, A, p), (m, r, w, A)
