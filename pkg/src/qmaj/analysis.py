"""Normality diagnostics and numerical checks of the limit lemmas.

Every real-valued entry point takes an explicit decimal ``precision`` and
works in its own mpmath context.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from qmaj.errors import DomainError
from qmaj.exact import bernoulli, double_factorial_even, factorial, power_sum
from qmaj.moments import check_family, d_poly, derangement_count, summarize
from qmaj.qpoly import DEFAULT_PRECISION, eval_rational, eval_real, real_context, to_real
from qmaj.qseries import q_double_factorial_even, q_factorial

__all__ = [
    "StandardizedDistribution",
    "ConvergenceReport",
    "standardize",
    "normal_cdf",
    "ks_to_normal",
    "mgf_standardized",
    "tannery_partial_sum",
    "tannery_target",
    "bernoulli_series",
    "bernoulli_tail",
    "bernoulli_tail_terms",
    "mgf_bernoulli_identity_check",
    "q_factorial_bernoulli_discrepancy",
    "q_reciprocal_identity_check",
    "normalized_power_sum",
    "convergence_report",
]

GUARD_DIGITS = 10


@dataclass(frozen=True)
class StandardizedDistribution:
    """Law of (statistic - mean) / sigma on the exponents carrying mass.

    ``probs`` are exact; ``support`` holds the standardized points as reals.
    """

    n: int
    family: str
    exponents: tuple[int, ...]
    probs: tuple[Fraction, ...]
    mean: Fraction
    sigma: object
    precision: int = DEFAULT_PRECISION
    support: tuple = field(init=False)

    def __post_init__(self) -> None:
        if len(self.exponents) != len(self.probs):
            raise DomainError("exponents and probabilities differ in length")
        if any(b <= a for a, b in zip(self.exponents, self.exponents[1:])):
            raise DomainError("exponents must be strictly increasing")
        ctx = real_context(self.precision)
        mean = to_real(ctx, self.mean)
        sigma = ctx.convert(self.sigma)
        object.__setattr__(self, "support", tuple((k - mean) / sigma for k in self.exponents))

    def __len__(self) -> int:
        return len(self.exponents)

    def total_probability(self) -> Fraction:
        return sum(self.probs, Fraction(0))

    def central_moment(self, order: int) -> Fraction:
        """Exact sum of p_k (k - mean)^order (unstandardized scale)."""
        return sum((p * (k - self.mean) ** order for k, p in zip(self.exponents, self.probs)), Fraction(0))

    def cdf(self) -> list[Fraction]:
        out, acc = [], Fraction(0)
        for p in self.probs:
            acc += p
            out.append(acc)
        return out


def standardize(family: str, n: int, precision: int = DEFAULT_PRECISION) -> StandardizedDistribution:
    fam = check_family(family)
    summary = summarize(fam, n, precision)
    if summary.degenerate:
        raise DomainError(f"type {fam} distribution at n={n} has zero variance")
    poly = d_poly(fam, n)
    total = derangement_count(fam, n)
    items = list(poly.items())
    return StandardizedDistribution(
        n=n,
        family=fam,
        exponents=tuple(k for k, _ in items),
        probs=tuple(Fraction(c, total) for _, c in items),
        mean=summary.mean,
        sigma=summary.sigma,
        precision=precision,
    )


def _erf_series(ctx, z):
    # 2/sqrt(pi) * sum_m (-1)^m z^(2m+1) / (m! (2m+1))
    z2 = z * z
    power = z
    total = ctx.zero
    eps = ctx.mpf(10) ** (-ctx.dps)
    m = 0
    while True:
        term = power / (2 * m + 1)
        total += term
        if abs(term) < eps:
            break
        m += 1
        power = -power * z2 / m
    return 2 * total / ctx.sqrt(ctx.pi)


def _erfc_continued_fraction(ctx, z):
    # erfc(z) = exp(-z^2)/sqrt(pi) / (z + (1/2)/(z + 1/(z + (3/2)/(z + ...)))), z > 0
    tiny = ctx.mpf(10) ** (-2 * ctx.dps)
    eps = ctx.mpf(10) ** (-ctx.dps)
    f = z
    c = z
    d = ctx.zero
    k = 1
    while True:
        a = ctx.mpf(k) / 2
        d = z + a * d
        if d == 0:
            d = tiny
        c = z + a / c
        if c == 0:
            c = tiny
        d = 1 / d
        delta = c * d
        f *= delta
        if abs(delta - 1) < eps:
            break
        k += 1
        if k > 1_000_000:
            raise RuntimeError("erfc continued fraction failed to converge")
    return ctx.exp(-z * z) / ctx.sqrt(ctx.pi) / f


def normal_cdf(x, precision: int = DEFAULT_PRECISION):
    """Standard normal CDF with absolute error below 10^-(precision-10)."""
    work = real_context(precision + GUARD_DIGITS)
    out = real_context(precision)
    xv = to_real(work, x)
    z = abs(xv) / work.sqrt(2)
    if abs(xv) <= 3:
        value = (1 + _erf_series(work, xv / work.sqrt(2))) / 2
    else:
        tail = _erfc_continued_fraction(work, z) / 2
        value = tail if xv < 0 else 1 - tail
    return out.convert(value)


def ks_to_normal(d: StandardizedDistribution):
    """sup_x |F(x) - Phi(x)|, attained at a jump of the step CDF F."""
    ctx = real_context(d.precision)
    best = ctx.zero
    prev = ctx.zero
    for x, cum in zip(d.support, d.cdf()):
        phi = normal_cdf(x, d.precision)
        here = to_real(ctx, cum)
        best = max(best, abs(here - phi), abs(prev - phi))
        prev = here
    return best


def mgf_standardized(family: str, n: int, t, precision: int = DEFAULT_PRECISION):
    """E exp(t (statistic - mean)/sigma), summed over positive terms."""
    fam = check_family(family)
    summary = summarize(fam, n, precision)
    if summary.degenerate:
        raise DomainError(f"type {fam} distribution at n={n} has zero variance")
    ctx = real_context(precision)
    scale = to_real(ctx, t) / summary.sigma
    mean = to_real(ctx, summary.mean)
    total = ctx.zero
    for k, c in d_poly(fam, n).items():
        total += c * ctx.exp(scale * (k - mean))
    return total / derangement_count(fam, n)


def _bracket_real(ctx, q, j: int):
    # [j]_q = 1 + q + ... + q^(j-1), summed directly so q = 1 needs no special case
    total, power = ctx.zero, ctx.one
    for _ in range(j):
        total += power
        power *= q
    return total


def tannery_target(family: str, x, precision: int = DEFAULT_PRECISION):
    """Limit of the Tannery partial sums: e^x (type A), e^(x/2) (type B)."""
    ctx = real_context(precision)
    xv = to_real(ctx, x)
    return ctx.exp(xv) if check_family(family) == "A" else ctx.exp(xv / 2)


def _alternating_q_sum(ctx, family: str, n: int, x, u):
    # type A: sum_k x^k / [k]_{e^-u}!;  type B: sum_k x^k / ([2k]_{e^-u}!! e^(k u))
    q = ctx.exp(-u)
    shift = ctx.exp(u)
    total = ctx.zero
    denom = ctx.one
    xpow = ctx.one
    for k in range(n + 1):
        if k:
            xpow *= x
            if family == "A":
                denom *= _bracket_real(ctx, q, k)
            else:
                denom *= _bracket_real(ctx, q, 2 * k) * shift
        total += xpow / denom
    return total


def tannery_partial_sum(family: str, n: int, x, t, precision: int = DEFAULT_PRECISION):
    """Partial sum over k <= n with q-factorials taken at q = exp(-t/sigma_n)."""
    fam = check_family(family)
    ctx = real_context(precision)
    xv = to_real(ctx, x)
    if abs(xv) > 1:
        raise DomainError(f"|x| must be at most 1, got {x}")
    summary = summarize(fam, n, precision)
    if summary.degenerate:
        raise DomainError(f"type {fam} distribution at n={n} has zero variance")
    u = to_real(ctx, t) / summary.sigma
    return _alternating_q_sum(ctx, fam, n, xv, u)


def _bernoulli_coefficients(family: str, n: int, i_min: int, i_max: int) -> list[tuple[int, Fraction]]:
    # B_2i / ((2i) (2i)!) * sum_{j<=n} (j^2i - 1), with j -> 2j for type B
    out = []
    for i in range(i_min, i_max + 1):
        m = 2 * i
        if family == "A":
            s = power_sum(n, m) - n
        else:
            s = (power_sum(n, m) << m) - n
        out.append((i, bernoulli(m) * s / (m * factorial(m))))
    return out


def bernoulli_series(family: str, n: int, x, i_max: int, precision: int = DEFAULT_PRECISION, i_min: int = 1):
    """sum_{i=i_min}^{i_max} B_2i x^2i / ((2i)(2i)!) * sum_j (j^2i - 1) (type B: (2j)^2i)."""
    fam = check_family(family)
    ctx = real_context(precision)
    xv = to_real(ctx, x)
    total = ctx.zero
    for i, coef in _bernoulli_coefficients(fam, n, i_min, i_max):
        total += to_real(ctx, coef) * xv ** (2 * i)
    return total


def bernoulli_tail_terms(family: str, n: int, t, i_max: int, precision: int = DEFAULT_PRECISION) -> list:
    """Terms i = 2..i_max of the Bernoulli series at x = t/sigma_n.

    sigma_n^(2i) is taken exactly as V_n^i, so each coefficient is rational.
    """
    fam = check_family(family)
    if i_max < 2:
        raise DomainError(f"i_max must be at least 2, got {i_max}")
    summary = summarize(fam, n, precision)
    if summary.degenerate:
        raise DomainError(f"type {fam} distribution at n={n} has zero variance")
    ctx = real_context(precision)
    tv = to_real(ctx, t)
    return [
        to_real(ctx, coef / summary.variance**i) * tv ** (2 * i)
        for i, coef in _bernoulli_coefficients(fam, n, 2, i_max)
    ]


def bernoulli_tail(family: str, n: int, t, i_max: int, precision: int = DEFAULT_PRECISION):
    ctx = real_context(precision)
    return ctx.fsum(bernoulli_tail_terms(family, n, t, i_max, precision))


def _rel(ctx, a, b):
    return abs(a - b) / abs(a)


def q_factorial_bernoulli_discrepancy(family: str, n: int, x, i_max: int, precision: int = DEFAULT_PRECISION):
    """Relative gap between [n]_{e^x}! (type B: [2n]_{e^x}!!) and its Bernoulli-exponential form."""
    fam = check_family(family)
    ctx = real_context(precision)
    xv = to_real(ctx, x)
    series = bernoulli_series(fam, n, xv, i_max, precision)
    if fam == "A":
        direct = eval_real(q_factorial(n), ctx.exp(xv), precision)
        product = factorial(n) * ctx.exp(n * (n - 1) * xv / 4 + series)
    else:
        direct = eval_real(q_double_factorial_even(n), ctx.exp(xv), precision)
        product = double_factorial_even(n) * ctx.exp(xv * n * n / 2 + series)
    return _rel(ctx, direct, product)


def mgf_bernoulli_identity_check(family: str, n: int, x, i_max: int, precision: int = DEFAULT_PRECISION):
    """Relative discrepancy between the MGF d_n(e^x)/D_n and its Bernoulli product form.

    The q-factorial factorization is checked as well; the larger of the two
    relative discrepancies is returned.
    """
    fam = check_family(family)
    if i_max < 1:
        raise DomainError(f"i_max must be positive, got {i_max}")
    ctx = real_context(precision)
    xv = to_real(ctx, x)
    total = derangement_count(fam, n)
    direct = eval_real(d_poly(fam, n), ctx.exp(xv), precision) / total
    series = bernoulli_series(fam, n, xv, i_max, precision)
    alternating = _alternating_q_sum(ctx, fam, n, ctx.mpf(-1), xv)
    if fam == "A":
        prefactor = ctx.mpf(factorial(n)) / total * ctx.exp(n * (n - 1) * xv / 4 + series)
    else:
        prefactor = ctx.mpf(double_factorial_even(n)) / total * ctx.exp(xv * n * n / 2 + series)
    mgf_gap = _rel(ctx, direct, prefactor * alternating)
    return max(mgf_gap, q_factorial_bernoulli_discrepancy(fam, n, xv, i_max, precision))


def q_reciprocal_identity_check(k: int, q: Fraction | int) -> bool:
    """Exactly test q^C(k,2)/[k]_q! == 1/[k]_{1/q}! and q^(k^2)/[2k]_q!! == 1/[2k]_{1/q}!!."""
    q = Fraction(q)
    if q <= 0:
        raise DomainError(f"q must be positive, got {q}")
    if k < 0:
        raise DomainError(f"k must be non-negative, got {k}")
    inv = 1 / q
    fact, dfact = q_factorial(k), q_double_factorial_even(k)
    type_a = q ** (k * (k - 1) // 2) / eval_rational(fact, q) == 1 / eval_rational(fact, inv)
    type_b = q ** (k * k) / eval_rational(dfact, q) == 1 / eval_rational(dfact, inv)
    return type_a and type_b


def normalized_power_sum(family: str, n: int) -> Fraction:
    """sum_j (j^2 - 1) / V_n (type B: sum_j ((2j)^2 - 1) / V_n^B), exactly."""
    fam = check_family(family)
    summary = summarize(fam, n, DEFAULT_PRECISION)
    if summary.degenerate:
        raise DomainError(f"type {fam} distribution at n={n} has zero variance")
    s = power_sum(n, 2) - n if fam == "A" else 4 * power_sum(n, 2) - n
    return s / summary.variance


@dataclass(frozen=True)
class ConvergenceReport:
    n_grid: tuple[int, ...]
    values: tuple
    target: object

    def __post_init__(self) -> None:
        if any(b <= a for a, b in zip(self.n_grid, self.n_grid[1:])):
            raise DomainError(f"n grid must be strictly increasing, got {self.n_grid}")
        if len(self.values) != len(self.n_grid):
            raise DomainError("one value per grid point is required")

    @property
    def deltas(self) -> tuple:
        return tuple(abs(v - self.target) for v in self.values)

    def strictly_decreasing(self) -> bool:
        d = self.deltas
        return all(b < a for a, b in zip(d, d[1:]))


def convergence_report(fn: Callable[[int], object], n_grid: Sequence[int], target) -> ConvergenceReport:
    grid = tuple(n_grid)
    return ConvergenceReport(grid, tuple(fn(n) for n in grid), target)
