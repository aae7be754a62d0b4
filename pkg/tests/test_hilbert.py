"""Reflection inner product, series oracle, Gram positivity."""
import math
import random
from fractions import Fraction

import pytest

from freeboson import scalars
from freeboson.algebra import LinearCombination, WickGroup, WickWord
from freeboson.errors import DomainError, StructuralError
from freeboson.hilbert import (
    GramReport,
    StateExpression,
    as_state,
    disc_series_inner,
    gram,
    inner,
    psd_check,
)
from freeboson.sampling import random_state_group
from freeboson.scalars import rational, root


def test_inner_origin_base_case():
    g = WickGroup.of((1, 0))
    assert inner(g, g) == rational(Fraction(1, 2))


def test_inner_second_order_origin():
    g = WickGroup.of((2, 0))
    assert inner(g, g) == rational(1)


@pytest.mark.parametrize("m", range(1, 6))
def test_origin_norms(m):
    # squared norm of :[m,0]: is m ((m-1)!)^2 / 2
    g = WickGroup.of((m, 0))
    expected = Fraction(m * math.factorial(m - 1) ** 2, 2)
    assert inner(g, g) == rational(expected)


def test_inner_half_point():
    g = WickGroup.of((1, Fraction(1, 2)))
    assert inner(g, g) == rational(Fraction(8, 9))
    assert disc_series_inner(g, g) == rational(Fraction(8, 9))


def test_series_constant_term():
    lhs = WickGroup.of((1, 0))
    rhs = WickGroup.of((1, 0))
    assert disc_series_inner(lhs, rhs) == rational(Fraction(1, 2))


def test_series_matches_reflection_route():
    rng = random.Random(41)
    for arity in (1, 2, 3):
        for _ in range(4):
            L = random_state_group(rng, arity)
            R = random_state_group(rng, arity)
            assert inner(L, R) == disc_series_inner(L, R)


def test_arity_mismatch_vanishes():
    a = WickGroup.of((1, Fraction(1, 3)))
    b = WickGroup.of((1, Fraction(1, 4)), (1, Fraction(-1, 4)))
    assert disc_series_inner(a, b) == rational(0)
    assert inner(a, b) == rational(0)


def test_inner_antilinear_left():
    g = WickGroup.of((1, Fraction(1, 3)))
    h = WickGroup.of((2, Fraction(-1, 5)))
    c = rational(Fraction(1, 2), Fraction(2, 7))
    F = LinearCombination.of(WickWord.single_group(g), c)
    assert inner(F, h) == c.conjugate() * inner(g, h)
    G = LinearCombination.of(WickWord.single_group(h), c)
    assert inner(g, G) == c * inner(g, h)


def test_inner_vacuum_cases():
    vac = WickWord.unit()
    assert inner(vac, vac) == rational(1)
    assert inner(vac, WickGroup.of((1, 0))) == rational(0)
    assert inner(WickGroup.of((2, 0)), vac) == rational(0)


def test_origin_multigroup_fallback_unavailable():
    w = WickWord((WickGroup.of((1, 0)), WickGroup.of((1, Fraction(1, 2)))))
    with pytest.raises(DomainError):
        inner(w, w)


def test_state_validation():
    with pytest.raises(DomainError):
        as_state(WickGroup.of((1, 2)))  # outside the unit disc
    w = WickWord((WickGroup.of((1, Fraction(1, 3))), WickGroup.of((2, Fraction(1, 3)))))
    with pytest.raises(DomainError):
        as_state(w)  # coinciding points across groups


def test_state_zero_free_flag():
    assert as_state(WickGroup.of((1, Fraction(1, 2)))).zero_free
    assert not as_state(WickGroup.of((1, 0))).zero_free


def test_gram_single_state():
    report = gram([WickGroup.of((1, Fraction(1, 2)))])
    assert report.size == 1
    assert report.matrix[0][0] == rational(Fraction(8, 9))
    assert report.psd
    assert report.hermiticity_defect == 0.0


def test_gram_fock_normalized_origin_states():
    # :[m,0]: scaled by sqrt(2/m)/(m-1)! gives an orthonormal family
    states = []
    for m in range(1, 5):
        coeff = root(Fraction(2, m)) * Fraction(1, math.factorial(m - 1))
        states.append(
            LinearCombination.of(WickWord.single_group(WickGroup.of((m, 0))), coeff)
        )
    report = gram(states)
    for i in range(4):
        for j in range(4):
            assert report.matrix[i][j] == rational(1 if i == j else 0)
    assert report.psd
    assert report.min_eigenvalue == pytest.approx(1.0)


def test_gram_exactly_hermitian():
    rng = random.Random(53)
    states = [random_state_group(rng, rng.randint(1, 2)) for _ in range(6)]
    report = gram(states)
    n = report.size
    for i in range(n):
        for j in range(n):
            assert report.matrix[i][j] == scalars.conjugate(report.matrix[j][i])
    assert report.hermiticity_defect == 0.0
    assert report.psd


def test_gram_duplicate_state_still_psd():
    g = WickGroup.of((1, Fraction(1, 3)))
    report = gram([g, g])
    assert report.psd
    assert report.min_eigenvalue == pytest.approx(0.0, abs=1e-12)


def test_psd_check_flags_negative_matrix():
    report = GramReport(
        matrix=((rational(1), rational(2)), (rational(2), rational(1))),
        min_eigenvalue=0.0,
        hermiticity_defect=0.0,
        psd=True,
        tol=1e-10,
    )
    assert not psd_check(report, 1e-10)
    assert report.min_eigenvalue == pytest.approx(-1.0)
    assert report.witness is not None


def test_psd_check_rejects_non_hermitian():
    report = GramReport(
        matrix=((rational(1), rational(1)), (rational(0), rational(1))),
        min_eigenvalue=0.0,
        hermiticity_defect=0.0,
        psd=True,
        tol=1e-10,
    )
    with pytest.raises(StructuralError):
        psd_check(report, 1e-10)


def test_gram_empty():
    report = gram([])
    assert report.size == 0
    assert report.psd
