"""Pairing kernels, matching enumeration, and expectation values."""
import math
import random
from fractions import Fraction

import pytest

from freeboson.algebra import LinearCombination, PlainWord, WickGroup, WickWord, wick_expand
from freeboson.correlator import (
    expect_combo,
    expect_plain,
    expect_wick,
    kernel,
    matchings,
    mobius_check,
)
from freeboson.errors import DomainError, PoleError
from freeboson.sampling import random_plain_word, random_wick_word, rational_point
from freeboson.scalars import rational, sort_key


@pytest.mark.parametrize("m1,z1,m2,z2,expected", [
    (1, 0, 1, 1, Fraction(-1, 2)),
    (1, 0, 2, 1, Fraction(1)),
    (2, 0, 2, 1, Fraction(3)),
    (1, 1, 1, 0, Fraction(-1, 2)),
])
def test_kernel_hand_values(m1, z1, m2, z2, expected):
    assert kernel(m1, z1, m2, z2) == rational(expected)


def test_kernel_symmetry():
    rng = random.Random(5)
    for _ in range(10):
        z1 = rational_point(rng)
        z2 = rational_point(rng, avoid={sort_key(z1)})
        m1, m2 = rng.randint(1, 4), rng.randint(1, 4)
        assert kernel(m1, z1, m2, z2) == kernel(m2, z2, m1, z1)


def test_kernel_float_backend():
    v = kernel(1, 0.0, 1, 1.0)
    assert isinstance(v, complex)
    assert v == pytest.approx(-0.5)


def test_kernel_pole():
    with pytest.raises(PoleError):
        kernel(1, Fraction(1, 2), 3, Fraction(1, 2))


def test_kernel_order_validation():
    with pytest.raises(DomainError):
        kernel(0, 0, 1, 1)


@pytest.mark.parametrize("n", [0, 2, 4, 6, 8])
def test_matchings_count(n):
    count = sum(1 for _ in matchings(n))
    double_fact = 1
    for k in range(n - 1, 0, -2):
        double_fact *= k
    assert count == double_fact


@pytest.mark.parametrize("n", [1, 3, 5])
def test_matchings_odd_empty(n):
    assert list(matchings(n)) == []


def test_matchings_cover_indices():
    for matching in matchings(6):
        seen = sorted(i for pair in matching for i in pair)
        assert seen == list(range(6))


def test_expect_empty_and_odd():
    assert expect_plain(PlainWord.unit()) == rational(1)
    assert expect_plain(PlainWord.single(1, 1)) == rational(0)


def test_expect_four_point_golden():
    w = PlainWord(tuple(
        PlainWord.single(1, k).insertions[0] for k in range(4)
    ))
    assert expect_plain(w) == rational(Fraction(169, 576))


def test_expect_four_point_is_pair_sum():
    # 1/4 + 1/64 + 1/36 = 169/576, the three pairings written out
    total = Fraction(1, 4) + Fraction(1, 64) + Fraction(1, 36)
    assert total == Fraction(169, 576)


def test_expect_plain_pole():
    w = PlainWord.single(1, 1) * PlainWord.single(2, 1)
    with pytest.raises(PoleError):
        expect_plain(w)


def test_expect_plain_stats():
    stats = {}
    w = PlainWord(tuple(PlainWord.single(1, k).insertions[0] for k in range(4)))
    expect_plain(w, stats)
    assert stats["pairings"] == 3


def test_expect_wick_cross_pairs_only():
    lhs = WickWord.single_group(WickGroup.of((1, 0)))
    rhs = WickWord.single_group(WickGroup.of((1, 1)))
    assert expect_wick(lhs * rhs) == rational(Fraction(-1, 2))


def test_expect_wick_degenerate_group():
    # :[1,0][1,0]: :[1,1][1,1]: has two cross matchings of weight (-1/2)^2
    a = WickWord.single_group(WickGroup.of((1, 0), (1, 0)))
    b = WickWord.single_group(WickGroup.of((1, 1), (1, 1)))
    assert expect_wick(a * b) == rational(Fraction(1, 2))


def test_expect_wick_lone_group_vanishes():
    w = WickWord.single_group(WickGroup.of((1, 0), (2, 1), (1, 2)))
    assert expect_wick(w) == rational(0)
    assert expect_wick(WickWord.unit()) == rational(1)


def test_expect_wick_cross_coincidence_pole():
    a = WickWord.single_group(WickGroup.of((1, Fraction(1, 2))))
    b = WickWord.single_group(WickGroup.of((2, Fraction(1, 2))))
    with pytest.raises(PoleError):
        expect_wick(a * b)


def test_expect_combo_linearity():
    w = PlainWord.single(1, 0) * PlainWord.single(1, 1)
    combo = LinearCombination.of(w, 2) + LinearCombination.of(PlainWord.unit())
    # 2*(-1/2) + 1 = 0
    assert expect_combo(combo) == rational(0)


def test_wick_equals_plain_after_expansion():
    rng = random.Random(17)
    for _ in range(8):
        W = random_wick_word(rng, rng.randint(2, 6))
        expanded = None
        for group in W.groups:
            term = wick_expand(group)
            expanded = term if expanded is None else expanded * term
        assert expect_wick(W) == expect_combo(expanded)


def test_lone_group_expectation_matches_expansion():
    # the partial-pairing expansion telescopes to zero in expectation
    g = WickGroup.of((1, 0), (1, 1), (2, 2), (1, 3))
    assert expect_combo(wick_expand(g)) == rational(0)


def test_mobius_identity_map():
    rng = random.Random(23)
    W = random_plain_word(rng, 4, max_order=1)
    lhs, rhs = mobius_check(W, (1, 0, 0, 1))
    assert lhs == rhs


def test_mobius_affine_matches_rescale():
    from freeboson.algebra import rescale

    rng = random.Random(29)
    W = random_plain_word(rng, 4, max_order=1)
    lhs, rhs = mobius_check(W, (2, 1, 0, 1))  # w = 2z + 1
    assert lhs == rhs
    assert expect_combo(rescale(LinearCombination.of(W), 1, 2)) == lhs


def test_mobius_inversion():
    rng = random.Random(31)
    W = random_plain_word(rng, 4, max_order=1)
    lhs, rhs = mobius_check(W, (0, 1, 1, 0))  # w = 1/z
    assert lhs == rhs


def test_mobius_rejects_higher_orders():
    with pytest.raises(DomainError):
        mobius_check(PlainWord.single(2, 1), (1, 0, 0, 1))


def test_mobius_degenerate_map():
    with pytest.raises(DomainError):
        mobius_check(PlainWord.single(1, 1), (1, 2, 1, 2))
