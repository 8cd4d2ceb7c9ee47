"""Exact expectation and variance of maj (type A) and fmaj (type B).

Closed forms are evaluated in exact rational arithmetic.  The same moments
computed directly from the coefficients of the q-derangement polynomials
serve as the cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from qmaj.errors import DomainError
from qmaj.exact import binomial, double_factorial_even, falling_factorial
from qmaj.qpoly import DEFAULT_PRECISION, QPoly, derivative, eval_rational, real_context, to_real
from qmaj.qseries import d_poly_A, d_poly_B, derangement_count_A, derangement_count_B

Family = Literal["A", "B"]

__all__ = [
    "Family",
    "MomentSummary",
    "check_family",
    "derangement_count",
    "d_poly",
    "mean_from_poly",
    "variance_from_poly",
    "expectation_A",
    "expectation_A_binomial_form",
    "variance_A",
    "expectation_B",
    "variance_B",
    "expectation",
    "variance",
    "asymptotic_moments",
    "summarize",
    "first_derivative_identity_A",
    "second_derivative_identity_A",
    "count_ratio",
    "c1_closed_form",
    "c2_closed_form",
    "c1_series",
    "c2_series",
]


def check_family(family: str) -> Family:
    fam = str(family).upper()
    if fam not in ("A", "B"):
        raise DomainError(f"family must be 'A' or 'B', got {family!r}")
    return fam  # type: ignore[return-value]


def derangement_count(family: str, n: int) -> int:
    return derangement_count_A(n) if check_family(family) == "A" else derangement_count_B(n)


def d_poly(family: str, n: int) -> QPoly:
    return d_poly_A(n) if check_family(family) == "A" else d_poly_B(n)


def mean_from_poly(p: QPoly) -> Fraction:
    """p'(1) / p(1) for a generating polynomial with non-negative coefficients."""
    total = eval_rational(p, 1)
    if total == 0:
        raise DomainError("the zero polynomial does not define a distribution")
    return eval_rational(derivative(p), 1) / total


def variance_from_poly(p: QPoly) -> Fraction:
    """p''(1)/p(1) + mean - mean^2."""
    mean = mean_from_poly(p)
    return eval_rational(derivative(derivative(p)), 1) / eval_rational(p, 1) + mean - mean * mean


def _need(n: int, least: int, what: str) -> None:
    if n < least:
        raise DomainError(f"{what} needs n >= {least}, got {n}")


def expectation_A(n: int) -> Fraction:
    _need(n, 2, "expectation_A")
    return Fraction(n * n - n + 1, 4) + Fraction((-1) ** n * (n - 1), 4 * derangement_count_A(n))


def expectation_A_binomial_form(n: int) -> Fraction:
    """(1/2) C(n,2) (1 + D_{n-2}/D_n)."""
    _need(n, 2, "expectation_A")
    return Fraction(binomial(n, 2), 2) * (1 + Fraction(derangement_count_A(n - 2), derangement_count_A(n)))


def variance_A(n: int) -> Fraction:
    _need(n, 2, "variance_A")
    d = derangement_count_A(n)
    return (
        Fraction(2 * n**3 + 3 * n**2 - 5 * n - 16, 72)
        + Fraction((9 * n**3 - 4 * n**2 - 46 * n + 41) * (-1) ** n, 144 * d)
        - Fraction(n - 1, 4 * d) ** 2
    )


def _ratio_B(n: int) -> Fraction:
    return Fraction(derangement_count_B(n - 1), derangement_count_B(n))


def expectation_B(n: int) -> Fraction:
    _need(n, 1, "expectation_B")
    r = _ratio_B(n)
    return Fraction(n * n, 2) + Fraction(n, 4) + (Fraction(-n * n, 2) + Fraction(3 * n, 4)) * r


def variance_B(n: int) -> Fraction:
    _need(n, 1, "variance_B")
    r = _ratio_B(n)
    return (
        Fraction(n * (68 * n * n - 40 * n - 101), 288)
        - Fraction(n * (72 * n**3 - 212 * n * n - 78 * n + 127), 288) * r
        - Fraction(n * n * (2 * n - 3) ** 2, 16) * r * r
    )


def expectation(family: str, n: int) -> Fraction:
    return expectation_A(n) if check_family(family) == "A" else expectation_B(n)


def variance(family: str, n: int) -> Fraction:
    return variance_A(n) if check_family(family) == "A" else variance_B(n)


def asymptotic_moments(family: str, n: int) -> tuple[Fraction, Fraction]:
    """Large-n estimates (mean, variance) with the vanishing corrections dropped."""
    _need(n, 1, "asymptotic_moments")
    if check_family(family) == "A":
        mean = Fraction(n * n - n + 1, 4)
        var = Fraction(n**3, 36) + Fraction(n * n, 24) - Fraction(5 * n, 72) - Fraction(2, 9)
    else:
        mean = Fraction(n * n, 2) + Fraction(3, 8)
        var = Fraction(n**3, 9) + Fraction(n * n, 6) - Fraction(n, 36) - Fraction(13, 36)
    return mean, var


@dataclass(frozen=True)
class MomentSummary:
    n: int
    family: Family
    mean: Fraction
    variance: Fraction
    sigma: object  # mpf at ``precision`` digits
    mean_asymptotic: Fraction
    variance_asymptotic: Fraction
    precision: int = DEFAULT_PRECISION

    @property
    def degenerate(self) -> bool:
        """True when the variance vanishes and standardization is impossible."""
        return self.variance == 0


def summarize(family: str, n: int, precision: int = DEFAULT_PRECISION) -> MomentSummary:
    fam = check_family(family)
    mean, var = expectation(fam, n), variance(fam, n)
    mean_asym, var_asym = asymptotic_moments(fam, n)
    ctx = real_context(precision)
    return MomentSummary(
        n=n,
        family=fam,
        mean=mean,
        variance=var,
        sigma=ctx.sqrt(to_real(ctx, var)),
        mean_asymptotic=mean_asym,
        variance_asymptotic=var_asym,
        precision=precision,
    )


# Intermediate identities used in deriving the closed forms.


def first_derivative_identity_A(n: int) -> tuple[int, Fraction]:
    """(d_n'(1), (1/2) C(n,2) (D_n + D_{n-2}))."""
    _need(n, 2, "first_derivative_identity_A")
    lhs = eval_rational(derivative(d_poly_A(n)), 1)
    rhs = Fraction(binomial(n, 2), 2) * (derangement_count_A(n) + derangement_count_A(n - 2))
    return int(lhs), rhs


def second_derivative_identity_A(n: int) -> tuple[int, Fraction]:
    """(d_n''(1), closed form in D_{n-2}, D_{n-1}, D_n)."""
    _need(n, 3, "second_derivative_identity_A")
    lhs = eval_rational(derivative(derivative(d_poly_A(n))), 1)
    d2, d1, d0 = (derangement_count_A(n - 2), derangement_count_A(n - 1), derangement_count_A(n))
    rhs = Fraction(binomial(n, 2), 72) * (
        (n - 2) * (27 * n + 32) * d2 - (9 * n + 5) * d1 + (n - 2) * (9 * n + 13) * d0
    )
    return int(lhs), rhs


def count_ratio(family: str, n: int) -> tuple[Fraction, Fraction]:
    """(D_{n-1}/D_n, exact expression from the linear recurrence) for either family."""
    fam = check_family(family)
    _need(n, 2 if fam == "A" else 1, "count_ratio")
    d_n = derangement_count(fam, n)
    d_prev = derangement_count(fam, n - 1)
    m = n if fam == "A" else 2 * n
    return Fraction(d_prev, d_n), Fraction(1, m) - Fraction((-1) ** n, m * d_n)


def c1_closed_form(n: int, k: int) -> Fraction:
    return Fraction(
        (n - k)
        * (9 * n**3 + 4 * n**2 + 9 * k * n**2 + 6 * n - 9 * k**2 * n + 4 * k * n - 1 + 6 * k - 9 * k**3 + 4 * k**2),
        72,
    )


def c2_closed_form(n: int, k: int) -> Fraction:
    ff = falling_factorial
    return Fraction(
        9 * ff(k, 4) + 14 * ff(k, 3) + (18 * n**2 - 27) * ff(k, 2) - 18 * n**2 * k + (9 * n**4 + 4 * n**3 + 6 * n**2 - n),
        72,
    )


def _exp_trunc(a: int) -> list[Fraction]:
    # e^{a x} modulo x^3
    return [Fraction(1), Fraction(a), Fraction(a * a, 2)]


def _mul_trunc(s: list[Fraction], t: list[Fraction]) -> list[Fraction]:
    return [sum((s[i] * t[d - i] for i in range(d + 1)), Fraction(0)) for d in range(3)]


def _block_product(n: int, k: int, shift: int) -> list[Fraction]:
    # e^{shift x} prod_{j=k+1}^{n} sum_{r=0}^{2j-1} e^{r x}, modulo x^3
    series = _exp_trunc(shift)
    for j in range(k + 1, n + 1):
        block = [Fraction(0)] * 3
        for r in range(2 * j):
            block = [a + b for a, b in zip(block, _exp_trunc(r))]
        series = _mul_trunc(series, block)
    return series


def c1_series(n: int, k: int) -> Fraction:
    """x^2 coefficient of the block product, normalized by (2n)!!/(2k)!!."""
    if not 0 <= k <= n:
        raise DomainError(f"need 0 <= k <= n, got n={n}, k={k}")
    return _block_product(n, k, 0)[2] / Fraction(double_factorial_even(n), double_factorial_even(k))


def c2_series(n: int, k: int) -> Fraction:
    """Same as :func:`c1_series` with the extra factor e^{k(k-1)x}."""
    if not 0 <= k <= n:
        raise DomainError(f"need 0 <= k <= n, got n={n}, k={k}")
    return _block_product(n, k, k * (k - 1))[2] / Fraction(double_factorial_even(n), double_factorial_even(k))
