"""Exact identity suite behind ``qmaj verify``.

Each check walks its range and stops at the first counterexample.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable
from dataclasses import dataclass
from fractions import Fraction

from qmaj import moments
from qmaj.analysis import q_reciprocal_identity_check
from qmaj.errors import ConsistencyError, DomainError
from qmaj.moments import check_family
from qmaj.permoracle import MAX_N_A, MAX_N_B, enumerate_derangements_A, enumerate_derangements_B
from qmaj.qpoly import eval_rational
from qmaj.qseries import (
    count_formulas_A,
    count_formulas_B,
    d_poly_A,
    d_poly_A_quotient_form,
    d_poly_B,
)

RECIPROCAL_POINTS = (Fraction(3, 2), Fraction(2, 7), Fraction(5), Fraction(1))
C2_MAX_N = 6


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    checked: int
    counterexample: str = ""

    def line(self) -> str:
        if self.passed:
            return f"PASS  {self.name} ({self.checked} cases)"
        return f"FAIL  {self.name}: {self.counterexample}"


def _run(name: str, cases: Iterable, test: Callable[[object], str | None]) -> CheckResult:
    count = 0
    for case in cases:
        count += 1
        try:
            problem = test(case)
        except ConsistencyError as exc:
            problem = str(exc)
        if problem:
            return CheckResult(name, False, count, f"{case}: {problem}")
    return CheckResult(name, True, count)


def _eq(lhs, rhs) -> str | None:
    return None if lhs == rhs else f"{lhs} != {rhs}"


def run_checks(family: str, n_max: int, oracle_max: int, workers: int | None = 1) -> list[CheckResult]:
    fam = check_family(family)
    limit = MAX_N_A if fam == "A" else MAX_N_B
    if not 0 <= oracle_max <= limit:
        raise DomainError(f"oracle-max for type {fam} must lie in [0, {limit}], got {oracle_max}")
    if n_max < 1:
        raise DomainError(f"n-max must be at least 1, got {n_max}")
    results = []
    if fam == "A":
        results.append(_run(
            "oracle: maj histogram == d_n(q)",
            range(1, oracle_max + 1),
            lambda n: _eq(enumerate_derangements_A(n, workers).to_qpoly(), d_poly_A(n)),
        ))
        results.append(_run(
            "alternating sum form == quotient form of d_n(q)",
            range(n_max + 1),
            lambda n: _eq(d_poly_A(n), d_poly_A_quotient_form(n)),
        ))
        formulas, poly, lo = count_formulas_A, d_poly_A, 2
    else:
        results.append(_run(
            "oracle: fmaj histogram == d_n^B(q)",
            range(1, oracle_max + 1),
            lambda n: _eq(enumerate_derangements_B(n, workers).to_qpoly(), d_poly_B(n)),
        ))
        formulas, poly, lo = count_formulas_B, d_poly_B, 1

    def counts_agree(n):
        values = formulas(n)
        if len(set(values.values())) != 1:
            return f"formulas disagree {values}"
        return _eq(eval_rational(poly(n), 1), next(iter(values.values())))

    results.append(_run("count formulas agree and equal d_n(1)", range(n_max + 1), counts_agree))
    results.append(_run(
        "closed-form mean == polynomial mean",
        range(lo, n_max + 1),
        lambda n: _eq(moments.expectation(fam, n), moments.mean_from_poly(poly(n))),
    ))
    results.append(_run(
        "closed-form variance == polynomial variance",
        range(lo, n_max + 1),
        lambda n: _eq(moments.variance(fam, n), moments.variance_from_poly(poly(n))),
    ))
    results.append(_run(
        "count ratio D_{n-1}/D_n identity",
        range(lo, n_max + 1),
        lambda n: _eq(*moments.count_ratio(fam, n)),
    ))
    if fam == "A":
        results.append(_run(
            "two forms of the mean agree",
            range(2, n_max + 1),
            lambda n: _eq(moments.expectation_A(n), moments.expectation_A_binomial_form(n)),
        ))
        results.append(_run(
            "d_n'(1) identity",
            range(2, n_max + 1),
            lambda n: _eq(*moments.first_derivative_identity_A(n)),
        ))
        results.append(_run(
            "d_n''(1) identity",
            range(3, n_max + 1),
            lambda n: _eq(*moments.second_derivative_identity_A(n)),
        ))
    else:
        pairs = [(n, k) for n in range(1, min(n_max, C2_MAX_N) + 1) for k in range(n)]
        results.append(_run(
            "c_1 closed form == series expansion",
            pairs,
            lambda nk: _eq(moments.c1_closed_form(*nk), moments.c1_series(*nk)),
        ))
        results.append(_run(
            "c_2 closed form == series expansion",
            pairs,
            lambda nk: _eq(moments.c2_closed_form(*nk), moments.c2_series(*nk)),
        ))
    results.append(_run(
        "q-reciprocal identities",
        [(k, q) for k in range(n_max + 1) for q in RECIPROCAL_POINTS],
        lambda kq: None if q_reciprocal_identity_check(*kq) else "identity fails",
    ))
    return results
