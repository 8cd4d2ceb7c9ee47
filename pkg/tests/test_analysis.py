import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmaj.analysis import (
    ConvergenceReport,
    StandardizedDistribution,
    bernoulli_series,
    bernoulli_tail,
    bernoulli_tail_terms,
    ks_to_normal,
    mgf_bernoulli_identity_check,
    mgf_standardized,
    normal_cdf,
    normalized_power_sum,
    q_factorial_bernoulli_discrepancy,
    q_reciprocal_identity_check,
    standardize,
    tannery_partial_sum,
)
from qmaj.errors import DomainError
from qmaj.moments import variance
from qmaj.qpoly import real_context
from qmaj.qseries import d_poly_A

CTX = real_context(60)


def phi_float(x, terms=30):
    """Phi from a float erf Taylor series; independent of the library path."""
    z = x / math.sqrt(2)
    s = sum((-1) ** m * z ** (2 * m + 1) / (math.factorial(m) * (2 * m + 1)) for m in range(terms))
    return 0.5 * (1 + 2 * s / math.sqrt(math.pi))


class TestNormalCdf:
    def test_center_and_known_value(self):
        assert normal_cdf(0, 60) == CTX.mpf(1) / 2
        assert abs(normal_cdf(1, 60) - CTX.mpf("0.841344746068543")) < 1e-12
        assert abs(float(normal_cdf(1, 60)) - phi_float(1.0)) < 1e-12

    @pytest.mark.parametrize("x", ["0.3", "1.7", "2.99", "3.01", "4.5", "7.25", "12"])
    def test_symmetry_and_reference(self, x):
        tol = CTX.mpf(10) ** -(60 - 10)
        assert abs(normal_cdf(x, 60) + normal_cdf("-" + x, 60) - 1) < tol
        with mpmath.workdps(90):
            ref = mpmath.ncdf(mpmath.mpf(x))
            assert abs(normal_cdf(x, 60) - ref) < tol

    @settings(max_examples=30, deadline=None)
    @given(st.floats(min_value=-6, max_value=6, allow_nan=False))
    def test_matches_float_series_on_core(self, x):
        if abs(x) <= 4:
            assert abs(float(normal_cdf(x, 40)) - phi_float(x, 80)) < 1e-12


class TestStandardize:
    def test_type_A_n4(self):
        d = standardize("A", 4, 60)
        assert len(d) == 6
        assert d.probs == tuple(Fraction(c, 9) for c in (1, 2, 2, 2, 1, 1))

    def test_type_B_n2(self):
        d = standardize("B", 2, 60)
        assert d.probs == tuple(Fraction(c, 5) for c in (1, 2, 1, 1))

    @pytest.mark.parametrize("family, n", [("A", 3), ("A", 10), ("B", 2), ("B", 9)])
    def test_exact_moments(self, family, n):
        d = standardize(family, n, 60)
        assert d.total_probability() == 1
        assert d.central_moment(1) == 0
        assert d.central_moment(2) == variance(family, n)
        second = CTX.fsum(CTX.mpf(p.numerator) / p.denominator * x * x for x, p in zip(d.support, d.probs))
        assert abs(second - 1) < CTX.mpf(10) ** (3 - 60)
        assert all(b > a for a, b in zip(d.support, d.support[1:]))

    def test_degenerate_rejected(self):
        with pytest.raises(DomainError):
            standardize("A", 2)
        with pytest.raises(DomainError):
            standardize("B", 1)


class TestKS:
    def test_point_mass(self):
        d = StandardizedDistribution(0, "A", (0,), (Fraction(1),), Fraction(0), 1, 60)
        assert ks_to_normal(d) == CTX.mpf(1) / 2

    def test_float_recomputation_and_grid_bound(self):
        d = standardize("A", 10, 60)
        ks = float(ks_to_normal(d))
        xs = [float(x) for x in d.support]
        cum = [float(c) for c in d.cdf()]
        prev, best = 0.0, 0.0
        for x, c in zip(xs, cum):
            phi = 0.5 * math.erfc(-x / math.sqrt(2))
            best = max(best, abs(c - phi), abs(prev - phi))
            prev = c
        assert abs(ks - best) < 1e-12
        assert 0 < ks < 1
        # the sup over any grid cannot exceed the jump-point value
        for i in range(-5000, 5001):
            x = i / 1000
            f = sum(p for s, p in zip(xs, (float(p) for p in d.probs)) if s <= x)
            assert abs(f - 0.5 * math.erfc(-x / math.sqrt(2))) <= ks + 1e-12

    def test_decreases_with_n(self):
        assert ks_to_normal(standardize("A", 20)) < ks_to_normal(standardize("A", 10))

    def test_precision_invariance(self):
        a = ks_to_normal(standardize("B", 8, 40))
        b = ks_to_normal(standardize("B", 8, 80))
        assert abs(a - b) < 1e-12


class TestMgf:
    def test_zero_is_exactly_one(self):
        for family, n in (("A", 10), ("B", 24)):
            assert mgf_standardized(family, n, 0) == 1

    def test_against_float_histogram(self):
        p = d_poly_A(8)
        total = sum(p.coefficients)
        mean = sum(k * c for k, c in p.items()) / total
        sd = math.sqrt(sum(k * k * c for k, c in p.items()) / total - mean**2)
        ref = sum(c * math.exp(0.7 * (k - mean) / sd) for k, c in p.items()) / total
        assert float(mgf_standardized("A", 8, 0.7)) == pytest.approx(ref, rel=1e-12)

    def test_approaches_gaussian_limit(self):
        target = CTX.exp(CTX.mpf(1) / 2)
        gaps = [abs(mgf_standardized("A", n, 1) - target) for n in (10, 20, 40)]
        assert gaps[0] > gaps[1] > gaps[2]

    def test_unit_curvature(self):
        ctx = real_context(40)
        h = ctx.mpf("1e-6")
        m = lambda t: mgf_standardized("A", 10, t, 40)  # noqa: E731
        assert abs((m(h) - 2 * m(0) + m(-h)) / h**2 - 1) < 1e-4

    @pytest.mark.parametrize("family, n", [("A", 10), ("A", 20), ("B", 10), ("B", 20)])
    def test_reflection_product_at_least_one(self, family, n):
        assert mgf_standardized(family, n, 1, 40) * mgf_standardized(family, n, -1, 40) >= 1


class TestTannery:
    def test_t_zero_reduces_to_exponential_series(self):
        x = CTX.mpf("0.4")
        expect_a = CTX.fsum(x**k / math.factorial(k) for k in range(11))
        expect_b = CTX.fsum(x**k / (2**k * math.factorial(k)) for k in range(11))
        assert abs(tannery_partial_sum("A", 10, x, 0) - expect_a) < 1e-55
        assert abs(tannery_partial_sum("B", 10, x, 0) - expect_b) < 1e-55

    def test_converges_to_targets(self):
        for family, target, grid in (("A", CTX.exp(-1), (10, 20, 40)), ("B", CTX.exp(CTX.mpf(-1) / 2), (10, 20, 40))):
            gaps = [abs(tannery_partial_sum(family, n, -1, 1) - target) for n in grid]
            assert gaps[0] > gaps[1] > gaps[2]

    def test_rejects_large_x(self):
        with pytest.raises(DomainError):
            tannery_partial_sum("A", 10, 1.5, 1)


class TestBernoulliTail:
    def test_zero_t(self):
        assert bernoulli_tail("A", 10, 0, 20) == 0

    def test_decreasing_over_n(self):
        for family in ("A", "B"):
            mags = [abs(bernoulli_tail(family, n, 1, 20)) for n in (10, 20, 40)]
            assert mags[0] > mags[1] > mags[2]

    def test_terms_decay_geometrically(self):
        terms = [abs(v) for v in bernoulli_tail_terms("A", 40, 1, 20)]
        ratios = [b / a for a, b in zip(terms, terms[1:])]
        assert all(r < 0.05 for r in ratios)
        assert all(b < a for a, b in zip(terms, terms[1:]))

    def test_needs_two_terms(self):
        with pytest.raises(DomainError):
            bernoulli_tail("A", 10, 1, 1)


class TestMgfFactorization:
    def test_discrepancy_shrinks_with_imax(self):
        for family in ("A", "B"):
            gaps = [mgf_bernoulli_identity_check(family, 6, "0.1", i, 60) for i in (2, 5, 10, 15)]
            assert all(b < a for a, b in zip(gaps, gaps[1:]))

    def test_tight_at_fifteen_terms(self):
        assert mgf_bernoulli_identity_check("A", 6, "0.1", 15, 60) < 1e-20

    def test_q_factorial_factorization_alone(self):
        assert q_factorial_bernoulli_discrepancy("A", 6, "0.1", 15) < 1e-30
        assert q_factorial_bernoulli_discrepancy("B", 6, "0.1", 15) < 1e-20

    def test_series_is_even(self):
        for family in ("A", "B"):
            assert bernoulli_series(family, 7, "0.13", 12) == bernoulli_series(family, 7, "-0.13", 12)


class TestQReciprocal:
    @pytest.mark.parametrize("k, q", [(0, 2), (1, Fraction(5, 3)), (5, Fraction(3, 2)), (9, Fraction(2, 11))])
    def test_holds(self, k, q):
        assert q_reciprocal_identity_check(k, q)

    def test_rejects_nonpositive(self):
        with pytest.raises(DomainError):
            q_reciprocal_identity_check(3, 0)
        with pytest.raises(DomainError):
            q_reciprocal_identity_check(3, Fraction(-1, 2))


def test_normalized_power_sums_near_twelve():
    assert abs(normalized_power_sum("A", 100) - 12) < Fraction(1, 2)
    assert abs(normalized_power_sum("B", 100) - 12) < Fraction(1, 2)


def test_convergence_report_grid_validation():
    r = ConvergenceReport((1, 2, 4), (3.0, 2.5, 2.2), 2.0)
    assert r.strictly_decreasing()
    with pytest.raises(DomainError):
        ConvergenceReport((2, 2), (1.0, 1.0), 0.0)
