"""Exact integer/rational helpers and the Bernoulli number table.

Integers are Python ``int`` and rationals are :class:`fractions.Fraction`
(always reduced, positive denominator).
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction

from qmaj.errors import DomainError

Rational = Fraction

__all__ = [
    "Rational",
    "BernoulliTable",
    "bernoulli",
    "bernoulli_magnitude_estimate",
    "factorial",
    "double_factorial_even",
    "binomial",
    "falling_factorial",
    "power_sum",
]


class BernoulliTable:
    """Monotone-growing cache of Bernoulli numbers B_0, B_1, ...

    Uses the convention B_1 = -1/2.  Readers may call :meth:`get` from any
    thread; extension of the cache is serialized by a lock.
    """

    def __init__(self) -> None:
        self._cache: list[Fraction] = [Fraction(1)]
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._cache)

    def get(self, k: int) -> Fraction:
        if k < 0:
            raise DomainError(f"Bernoulli index must be non-negative, got {k}")
        cache = self._cache
        if k < len(cache):
            return cache[k]
        with self._lock:
            self._extend(k)
        return self._cache[k]

    def _extend(self, k: int) -> None:
        # sum_{j=0}^{m} C(m+1, j) B_j = 0  =>  B_m = -sum_{j<m} C(m+1, j) B_j / (m+1)
        cache = list(self._cache)
        for m in range(len(cache), k + 1):
            if m >= 3 and m % 2 == 1:
                cache.append(Fraction(0))
                continue
            acc = sum((math.comb(m + 1, j) * cache[j] for j in range(m)), Fraction(0))
            cache.append(-acc / (m + 1))
        # publish the longer list in one assignment so readers never see a partial table
        self._cache = cache


_TABLE = BernoulliTable()


def bernoulli(k: int) -> Fraction:
    """Return the Bernoulli number B_k (B_1 = -1/2)."""
    return _TABLE.get(k)


def bernoulli_magnitude_estimate(m: int) -> float:
    """Asymptotic magnitude 2 m! / (2 pi)^m of |B_m| for even m >= 2."""
    if m < 2 or m % 2:
        raise DomainError(f"magnitude estimate needs an even index >= 2, got {m}")
    return 2.0 * math.factorial(m) / (2.0 * math.pi) ** m


def factorial(n: int) -> int:
    if n < 0:
        raise DomainError(f"factorial of negative number {n}")
    return math.factorial(n)


def double_factorial_even(n: int) -> int:
    """(2n)!! = 2 * 4 * ... * 2n = 2^n n!."""
    if n < 0:
        raise DomainError(f"(2n)!! needs n >= 0, got {n}")
    return math.factorial(n) << n


def binomial(n: int, k: int) -> int:
    if n < 0 or k < 0:
        raise DomainError(f"binomial({n}, {k}) needs non-negative arguments")
    return math.comb(n, k)


def falling_factorial(k: int, i: int) -> int:
    """Lower factorial (k)_i = k (k-1) ... (k-i+1); empty product for i = 0."""
    if i < 0:
        raise DomainError(f"falling factorial length must be >= 0, got {i}")
    return math.prod(range(k - i + 1, k + 1))


def power_sum(n: int, p: int) -> int:
    """1^p + 2^p + ... + n^p."""
    return sum(j**p for j in range(1, n + 1))
