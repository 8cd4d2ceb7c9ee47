from math import comb, factorial

import pytest

from qmaj.errors import DomainError
from qmaj.qpoly import QPoly, eval_rational
from qmaj.qseries import (
    count_formulas_A,
    count_formulas_B,
    d_poly_A,
    d_poly_A_quotient_form,
    d_poly_B,
    derangement_count_A,
    derangement_count_B,
    f_nk,
    q_bracket,
    q_double_factorial_even,
    q_factorial,
)


def brute_derangements(n):
    """Count derangements by inclusion-exclusion over fixed-point sets."""
    return sum((-1) ** j * comb(n, j) * factorial(n - j) for j in range(n + 1))


def test_brackets_and_factorials():
    assert q_bracket(0).is_zero()
    assert q_bracket(1) == QPoly([1])
    assert q_bracket(3) == QPoly([1, 1, 1])
    assert q_factorial(0) == QPoly([1])
    assert q_factorial(2) == QPoly([1, 1])
    assert q_factorial(3) == QPoly([1, 2, 2, 1])
    assert q_double_factorial_even(0) == QPoly([1])
    assert q_double_factorial_even(1) == QPoly([1, 1])
    assert q_double_factorial_even(2) == QPoly([1, 2, 2, 2, 1])


def test_q_factorial_at_one():
    for k in range(12):
        assert eval_rational(q_factorial(k), 1) == factorial(k)
        assert eval_rational(q_double_factorial_even(k), 1) == 2**k * factorial(k)


def test_f_nk():
    assert f_nk(3, 3) == QPoly([1])
    assert f_nk(2, 0) == QPoly([1, 1])
    for n in range(9):
        assert f_nk(n, 0) == q_factorial(n)
    with pytest.raises(DomainError):
        f_nk(2, 3)


def test_d_poly_A_small():
    assert d_poly_A(1).is_zero()
    assert d_poly_A(2) == QPoly([0, 1])
    assert d_poly_A(4) == QPoly([0, 1, 2, 2, 2, 1, 1])
    assert d_poly_A(0) == QPoly([1])


def test_d_poly_B_small():
    assert d_poly_B(0) == QPoly([1])
    assert d_poly_B(1) == QPoly([0, 1])
    assert d_poly_B(2) == QPoly([0, 1, 2, 1, 1])


def test_both_type_A_constructions_agree():
    for n in range(26):
        assert d_poly_A_quotient_form(n) == d_poly_A(n)


def test_polys_evaluate_to_counts():
    for n in range(41):
        assert eval_rational(d_poly_A(n), 1) == derangement_count_A(n)
    for n in range(26):
        assert eval_rational(d_poly_B(n), 1) == derangement_count_B(n)


def test_degrees_and_signs():
    # reversal n...1 is a derangement only for even n (odd n fixes the middle letter)
    for n in range(2, 25):
        assert d_poly_A(n).degree == comb(n, 2) - (n % 2)
        assert d_poly_B(n).degree == n * n
    assert [d_poly_A(n).degree for n in range(2, 7)] == [1, 2, 6, 9, 15]
    for n in range(1, 25):
        for p in (d_poly_A(n), d_poly_B(n)):
            assert all(c >= 0 for c in p.coefficients)
            assert p.coefficient(0) == 0


@pytest.mark.parametrize("n, expected", [(0, 1), (1, 0), (2, 1), (3, 2), (4, 9), (5, 44), (10, 1334961)])
def test_count_A(n, expected):
    assert derangement_count_A(n) == expected


@pytest.mark.parametrize(
    "n, expected", [(0, 1), (1, 1), (2, 5), (3, 29), (4, 233), (5, 2329), (6, 27949), (7, 391285)]
)
def test_count_B(n, expected):
    assert derangement_count_B(n) == expected


def test_count_formulas_all_present_and_agree():
    for n in range(2, 41):
        values = count_formulas_A(n)
        assert len(values) == 4
        assert set(values.values()) == {brute_derangements(n)}
    for n in range(2, 26):
        values = count_formulas_B(n)
        assert len(values) == 4
        assert len(set(values.values())) == 1
