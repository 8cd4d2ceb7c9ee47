"""Brute-force enumeration of derangements with maj / fmaj statistics.

Signed permutations store barred letters as negative integers, so the order
n-bar < ... < 1-bar < 1 < ... < n is ordinary integer order.
"""

from __future__ import annotations

import itertools
import os
from collections import Counter
from collections.abc import Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from qmaj.errors import DomainError, ResourceLimitError
from qmaj.qpoly import QPoly

MAX_N_A = 9
MAX_N_B = 7

__all__ = [
    "SignedPerm",
    "CoefficientHistogram",
    "maj_A",
    "maj_B",
    "neg",
    "fmaj",
    "is_derangement",
    "iter_derangements_B",
    "enumerate_derangements_A",
    "enumerate_derangements_B",
]


@dataclass(frozen=True)
class SignedPerm:
    """A signed permutation pi_1 ... pi_n; negative entries are barred letters."""

    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        entries = tuple(int(e) for e in self.entries)
        object.__setattr__(self, "entries", entries)
        if sorted(abs(e) for e in entries) != list(range(1, len(entries) + 1)) or 0 in entries:
            raise DomainError(f"{entries} is not a signed permutation of [{len(entries)}]")

    @classmethod
    def parse(cls, text: str) -> SignedPerm:
        """Parse whitespace- or comma-separated letters; ``-3`` or ``3'`` denote 3-bar."""
        out = []
        for tok in text.replace(",", " ").split():
            out.append(-int(tok[:-1]) if tok.endswith("'") else int(tok))
        return cls(tuple(out))

    @property
    def n(self) -> int:
        return len(self.entries)

    def __str__(self) -> str:
        return " ".join(f"{-e}'" if e < 0 else str(e) for e in self.entries)


class CoefficientHistogram(Counter):
    """Statistic value -> number of objects attaining it."""

    @property
    def total(self) -> int:
        return sum(self.values())

    def to_qpoly(self) -> QPoly:
        return QPoly.from_mapping(self)

    def merge(self, other: CoefficientHistogram) -> CoefficientHistogram:
        out = CoefficientHistogram(self)
        out.update(other)
        return out


def _descent_sum(seq: Sequence[int]) -> int:
    return sum(i for i in range(1, len(seq)) if seq[i - 1] > seq[i])


def maj_A(perm: Sequence[int]) -> int:
    """Sum of the (1-based) descent positions of an ordinary permutation."""
    return _descent_sum(perm)


def maj_B(perm: SignedPerm) -> int:
    return _descent_sum(perm.entries)


def neg(perm: SignedPerm) -> int:
    return sum(1 for e in perm.entries if e < 0)


def fmaj(perm: SignedPerm) -> int:
    """Flag major index 2 maj + neg."""
    return 2 * maj_B(perm) + neg(perm)


def is_derangement(entries: Sequence[int]) -> bool:
    """True when pi_i != i for all i; a barred i in position i is allowed."""
    return all(e != i for i, e in enumerate(entries, start=1))


def _check_limit(n: int, limit: int, family: str) -> None:
    if n < 0:
        raise DomainError(f"n must be non-negative, got {n}")
    if n > limit:
        raise ResourceLimitError(f"type {family} enumeration is limited to n <= {limit}, got {n}")


def _shards_A(n: int) -> list[tuple[int, int]]:
    return [(n, first) for first in range(1, n + 1)]


def _shards_B(n: int) -> list[tuple[int, int]]:
    return [(n, sign * first) for first in range(1, n + 1) for sign in (1, -1)]


def _shard_A(args: tuple[int, int]) -> CoefficientHistogram:
    n, first = args
    hist = CoefficientHistogram()
    if first == 1:
        return hist
    rest = [v for v in range(1, n + 1) if v != first]
    for tail in itertools.permutations(rest):
        perm = (first, *tail)
        if is_derangement(perm):
            hist[_descent_sum(perm)] += 1
    return hist


def _signed_tails(values: Sequence[int]) -> Iterator[tuple[int, ...]]:
    for perm in itertools.permutations(values):
        for signs in itertools.product((1, -1), repeat=len(perm)):
            yield tuple(s * v for s, v in zip(signs, perm))


def _shard_B(args: tuple[int, int]) -> CoefficientHistogram:
    n, first = args
    hist = CoefficientHistogram()
    if first == 1:
        return hist
    rest = [v for v in range(1, n + 1) if v != abs(first)]
    for tail in _signed_tails(rest):
        perm = (first, *tail)
        if is_derangement(perm):
            hist[2 * _descent_sum(perm) + sum(1 for e in perm if e < 0)] += 1
    return hist


def _run(shard_fn, shards: list[tuple[int, int]], workers: int | None) -> CoefficientHistogram:
    if workers is None:
        workers = os.cpu_count() or 1
    if workers <= 1 or len(shards) <= 1:
        parts = [shard_fn(s) for s in shards]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(shards))) as pool:
            parts = list(pool.map(shard_fn, shards))
    merged = CoefficientHistogram()
    for part in parts:
        merged.update(part)
    return merged


def iter_derangements_B(n: int) -> Iterator[SignedPerm]:
    """Every B_n-derangement, filtered from all 2^n n! signed permutations."""
    _check_limit(n, MAX_N_B, "B")
    for entries in _signed_tails(range(1, n + 1)):
        if is_derangement(entries):
            yield SignedPerm(entries)


def enumerate_derangements_A(n: int, workers: int | None = 1) -> CoefficientHistogram:
    """Histogram of maj over all derangements of [n], for 0 <= n <= 9.

    Work is sharded by the value of pi_1; ``workers=None`` uses every core.
    """
    _check_limit(n, MAX_N_A, "A")
    if n == 0:
        return CoefficientHistogram({0: 1})
    return _run(_shard_A, _shards_A(n), workers)


def enumerate_derangements_B(n: int, workers: int | None = 1) -> CoefficientHistogram:
    """Histogram of fmaj over all B_n-derangements, for 0 <= n <= 7.

    Shards are keyed by the signed value of pi_1.
    """
    _check_limit(n, MAX_N_B, "B")
    if n == 0:
        return CoefficientHistogram({0: 1})
    return _run(_shard_B, _shards_B(n), workers)
