import itertools

import pytest

from qmaj.errors import DomainError, ResourceLimitError
from qmaj.permoracle import (
    SignedPerm,
    enumerate_derangements_A,
    enumerate_derangements_B,
    fmaj,
    iter_derangements_B,
    maj_A,
    maj_B,
    neg,
)
from qmaj.qseries import d_poly_A, d_poly_B, derangement_count_A, derangement_count_B


def test_maj_A():
    assert maj_A((1, 2, 3, 4, 5)) == 0
    assert maj_A((4, 1, 2, 3)) == 1
    assert maj_A((2, 1, 4, 3)) == 4


def test_fmaj_worked_example():
    perm = SignedPerm((3, 5, -1, 2, -6, -7, 4))
    assert (maj_B(perm), neg(perm), fmaj(perm)) == (11, 3, 25)
    assert SignedPerm.parse("3 5 1' 2 6' 7' 4") == perm


def test_fmaj_small_cases():
    assert fmaj(SignedPerm((1, 2, 3))) == 0
    one_bar = SignedPerm((-1,))
    assert (maj_B(one_bar), neg(one_bar), fmaj(one_bar)) == (0, 1, 1)


def test_signed_perm_validation():
    with pytest.raises(DomainError):
        SignedPerm((1, 1))
    with pytest.raises(DomainError):
        SignedPerm((0, 1))
    assert SignedPerm(()).n == 0


def test_B2_derangements_listed():
    got = {p.entries for p in iter_derangements_B(2)}
    assert got == {(-1, -2), (2, 1), (2, -1), (-2, 1), (-2, -1)}


def test_histograms_small():
    assert enumerate_derangements_A(2) == {1: 1}
    assert enumerate_derangements_A(5) == {1: 1, 2: 3, 3: 5, 4: 7, 5: 8, 6: 8, 7: 6, 8: 4, 9: 2}
    assert enumerate_derangements_A(1) == {}
    assert enumerate_derangements_B(1) == {1: 1}
    assert enumerate_derangements_B(2) == {1: 1, 2: 2, 3: 1, 4: 1}
    assert enumerate_derangements_B(3) == {1: 1, 2: 3, 3: 4, 4: 5, 5: 5, 6: 4, 7: 4, 8: 2, 9: 1}


def test_oracle_matches_closed_forms():
    for n in range(2, 9):
        hist = enumerate_derangements_A(n)
        assert hist.to_qpoly() == d_poly_A(n)
        assert hist.total == derangement_count_A(n)
    for n in range(1, 7):
        hist = enumerate_derangements_B(n)
        assert hist.to_qpoly() == d_poly_B(n)
        assert hist.total == derangement_count_B(n)


def test_sharded_run_equals_serial():
    assert enumerate_derangements_A(7, workers=4) == enumerate_derangements_A(7, workers=1)
    assert enumerate_derangements_B(5, workers=3) == enumerate_derangements_B(5, workers=1)


def test_histogram_merge_is_order_free():
    parts = [enumerate_derangements_A(n) for n in (3, 4, 5)]
    merged = [a.merge(b).merge(c) for a, b, c in itertools.permutations(parts)]
    assert all(m == merged[0] for m in merged)


def test_limits():
    with pytest.raises(ResourceLimitError):
        enumerate_derangements_A(10)
    with pytest.raises(ResourceLimitError):
        enumerate_derangements_B(8)
