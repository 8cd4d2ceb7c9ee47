"""q-brackets, q-factorials and the q-derangement polynomials of types A and B.

Conventions: ``q_bracket(0)`` is the empty sum (zero polynomial) while
``q_factorial(0)`` and ``q_double_factorial_even(0)`` are empty products (1).
"""

from __future__ import annotations

import functools
import math

from qmaj.errors import ConsistencyError, DomainError
from qmaj.exact import double_factorial_even, factorial
from qmaj.qpoly import QPoly, real_context, scale_shift

__all__ = [
    "q_bracket",
    "q_factorial",
    "q_double_factorial_even",
    "f_nk",
    "d_poly_A",
    "d_poly_A_quotient_form",
    "d_poly_B",
    "derangement_count_A",
    "derangement_count_B",
    "count_formulas_A",
    "count_formulas_B",
]

_ONE = QPoly([1])


def _check_nonneg(name: str, n: int) -> None:
    if n < 0:
        raise DomainError(f"{name} needs a non-negative argument, got {n}")


def q_bracket(k: int) -> QPoly:
    """[k]_q = 1 + q + ... + q^(k-1)."""
    _check_nonneg("q_bracket", k)
    return QPoly([1] * k)


def _times_bracket(p: QPoly, k: int) -> QPoly:
    # p * [k]_q via a sliding window of width k over the coefficients
    if k == 0 or p.is_zero():
        return QPoly()
    a = p.coefficients
    out = []
    window = 0
    for i in range(len(a) + k - 1):
        if i < len(a):
            window += a[i]
        if i >= k:
            window -= a[i - k]
        out.append(window)
    return QPoly(out)


def _div_bracket(p: QPoly, k: int) -> QPoly:
    # exact p / [k]_q, inverting the sliding-window product
    if k == 1:
        return p
    if k == 0:
        raise ZeroDivisionError("division by [0]_q")
    return p.exact_div(q_bracket(k))


def q_factorial(k: int) -> QPoly:
    """[k]_q! = [k]_q [k-1]_q ... [1]_q."""
    _check_nonneg("q_factorial", k)
    p = _ONE
    for j in range(2, k + 1):
        p = _times_bracket(p, j)
    return p


def q_double_factorial_even(k: int) -> QPoly:
    """[2k]_q!! = [2k]_q [2k-2]_q ... [2]_q."""
    _check_nonneg("q_double_factorial_even", k)
    p = _ONE
    for j in range(1, k + 1):
        p = _times_bracket(p, 2 * j)
    return p


def f_nk(n: int, k: int) -> QPoly:
    """[n]_q [n-1]_q ... [k+1]_q, and 1 when k == n."""
    _check_nonneg("f_nk", k)
    if k > n:
        raise DomainError(f"f_nk needs k <= n, got n={n}, k={k}")
    p = _ONE
    for j in range(k + 1, n + 1):
        p = _times_bracket(p, j)
    return p


@functools.cache
def _d_poly_A_sum(n: int) -> QPoly:
    # sum_k (-1)^k q^C(k,2) f_{n,k}(q), building f_{n,k} from k = n downwards
    total = QPoly()
    f = _ONE
    for k in range(n, -1, -1):
        total = total + scale_shift(f, (-1) ** k, k * (k - 1) // 2)
        if k:
            f = _times_bracket(f, k)
    return total


@functools.cache
def d_poly_A_quotient_form(n: int) -> QPoly:
    """[n]_q! * sum_k (-1)^k q^C(k,2) / [k]_q!, with every quotient by exact division."""
    _check_nonneg("d_poly_A", n)
    quotient = q_factorial(n)
    total = QPoly()
    for k in range(n + 1):
        if k:
            quotient = _div_bracket(quotient, k)
        total = total + scale_shift(quotient, (-1) ** k, k * (k - 1) // 2)
    return total


@functools.cache
def d_poly_A(n: int) -> QPoly:
    """Generating polynomial of maj over the derangements of [n].

    The division-free alternating sum is cross-checked against the quotient
    form; a mismatch raises :class:`ConsistencyError`.
    """
    _check_nonneg("d_poly_A", n)
    p = _d_poly_A_sum(n)
    if p != d_poly_A_quotient_form(n):
        raise ConsistencyError(f"the two constructions of d_{n}(q) disagree")
    return p


@functools.cache
def d_poly_B(n: int) -> QPoly:
    """Generating polynomial of fmaj over the B_n-derangements."""
    _check_nonneg("d_poly_B", n)
    total = QPoly()
    f = _ONE
    for k in range(n, -1, -1):
        total = total + scale_shift(f, (-1) ** k, k * (k - 1))
        if k:
            f = _times_bracket(f, 2 * k)
    return total


def _rounded(value, ctx, n: int, family: str) -> int:
    # floor(value + 1/2), refusing to round when value sits within 1e-5 of a half-integer
    shifted = value + ctx.mpf(1) / 2
    lo = int(ctx.floor(shifted))
    frac = shifted - lo
    if min(frac, 1 - frac) <= ctx.mpf("1e-5"):
        raise ConsistencyError(
            f"rounding formula for D_{n} ({family}) is too close to a half-integer"
        )
    return lo


def count_formulas_A(n: int) -> dict[str, int]:
    """D_n by each applicable formula: alternating sum, both recurrences, rounding.

    The two-term recurrence needs n >= 2 and the rounding formula n >= 1; a
    formula outside its range is omitted.
    """
    _check_nonneg("derangement_count_A", n)
    out = {"alternating_sum": sum((-1) ** k * (factorial(n) // factorial(k)) for k in range(n + 1))}
    d = 1
    for m in range(1, n + 1):
        d = m * d + (-1) ** m
    out["recurrence_linear"] = d
    if n >= 2:
        d_prev2, d_prev = 1, 0
        for m in range(2, n + 1):
            d_prev2, d_prev = d_prev, (m - 1) * (d_prev + d_prev2)
        out["recurrence_two_term"] = d_prev
    if n >= 1:
        ctx = real_context(max(20, math.ceil(n * math.log10(n)) + 20))
        out["rounding"] = _rounded(ctx.mpf(factorial(n)) / ctx.e, ctx, n, "A")
    return out


def count_formulas_B(n: int) -> dict[str, int]:
    """D_n^B by each applicable formula (two-term recurrence needs n >= 2)."""
    _check_nonneg("derangement_count_B", n)
    top = double_factorial_even(n)
    out = {
        "alternating_sum": sum(
            (-1) ** k * (top // double_factorial_even(k)) for k in range(n + 1)
        )
    }
    d = 1
    for m in range(1, n + 1):
        d = 2 * m * d + (-1) ** m
    out["recurrence_linear"] = d
    if n >= 2:
        d_prev2, d_prev = 1, 1
        for m in range(2, n + 1):
            d_prev2, d_prev = d_prev, (2 * m - 1) * d_prev + (2 * m - 2) * d_prev2
        out["recurrence_two_term"] = d_prev
    digits = math.ceil(n * math.log10(2 * n)) if n else 0
    ctx = real_context(max(20, digits + 20))
    out["rounding"] = _rounded(ctx.mpf(top) / ctx.sqrt(ctx.e), ctx, n, "B")
    return out


def _agreed(formulas: dict[str, int], label: str) -> int:
    values = set(formulas.values())
    if len(values) != 1:
        raise ConsistencyError(f"{label} formulas disagree: {formulas}")
    return values.pop()


@functools.cache
def derangement_count_A(n: int) -> int:
    """Number of derangements D_n; all applicable formulas must agree."""
    return _agreed(count_formulas_A(n), f"D_{n}")


@functools.cache
def derangement_count_B(n: int) -> int:
    """Number of B_n-derangements D_n^B; all applicable formulas must agree."""
    return _agreed(count_formulas_B(n), f"D_{n}^B")
