"""Dense univariate polynomials in q with exact integer coefficients.

Real-valued evaluation goes through an mpmath context created per decimal
precision, so no global precision state is touched.
"""

from __future__ import annotations

import functools
import os
from collections.abc import Iterable, Mapping
from fractions import Fraction

import mpmath

from qmaj.errors import DomainError

DEFAULT_PRECISION = 60
MIN_PRECISION = 20

__all__ = [
    "DEFAULT_PRECISION",
    "QPoly",
    "add",
    "mul",
    "scale_shift",
    "eval_rational",
    "eval_real",
    "derivative",
    "real_context",
    "to_real",
    "default_precision",
]


@functools.lru_cache(maxsize=None)
def real_context(precision: int = DEFAULT_PRECISION) -> mpmath.MPContext:
    """Return an mpmath context working at ``precision`` decimal digits.

    Contexts are cached per precision and must not be mutated by callers.
    """
    if precision < MIN_PRECISION:
        raise DomainError(f"precision must be at least {MIN_PRECISION} digits, got {precision}")
    ctx = mpmath.MPContext()
    ctx.dps = precision
    return ctx


def default_precision() -> int:
    """Default decimal precision; the QMAJ_PRECISION environment variable overrides it."""
    raw = os.environ.get("QMAJ_PRECISION")
    if not raw:
        return DEFAULT_PRECISION
    try:
        value = int(raw)
    except ValueError:
        raise DomainError(f"QMAJ_PRECISION must be an integer, got {raw!r}") from None
    if value < MIN_PRECISION:
        raise DomainError(f"QMAJ_PRECISION must be at least {MIN_PRECISION}, got {value}")
    return value


def to_real(ctx: mpmath.MPContext, value):
    """Convert an int, Fraction, float, string or mpf into ``ctx``."""
    if isinstance(value, Fraction):
        return ctx.mpf(value.numerator) / value.denominator
    return ctx.convert(value)


def _trim(coeffs: list[int]) -> tuple[int, ...]:
    end = len(coeffs)
    while end and coeffs[end - 1] == 0:
        end -= 1
    return tuple(coeffs[:end])


class QPoly:
    """Immutable dense polynomial sum_k c_k q^k with integer coefficients.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("_coeffs", "_hash")

    def __init__(self, coefficients: Iterable[int] = ()) -> None:
        coeffs = [int(c) for c in coefficients]
        self._coeffs = _trim(coeffs)
        self._hash: int | None = None

    @classmethod
    def from_mapping(cls, counts: Mapping[int, int]) -> QPoly:
        """Build a polynomial from an exponent -> coefficient mapping."""
        if not counts:
            return cls()
        if min(counts) < 0:
            raise DomainError("negative exponent in coefficient mapping")
        coeffs = [0] * (max(counts) + 1)
        for k, c in counts.items():
            coeffs[k] += c
        return cls(coeffs)

    @classmethod
    def monomial(cls, c: int, m: int) -> QPoly:
        return cls([0] * m + [c])

    @property
    def coefficients(self) -> tuple[int, ...]:
        return self._coeffs

    @property
    def degree(self) -> int:
        return len(self._coeffs) - 1

    def is_zero(self) -> bool:
        return not self._coeffs

    def coefficient(self, k: int) -> int:
        return self._coeffs[k] if 0 <= k < len(self._coeffs) else 0

    def items(self) -> Iterable[tuple[int, int]]:
        """(exponent, coefficient) pairs with nonzero coefficient, ascending."""
        return ((k, c) for k, c in enumerate(self._coeffs) if c)

    def __len__(self) -> int:
        return len(self._coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, QPoly):
            return self._coeffs == other._coeffs
        if isinstance(other, int):
            return self._coeffs == _trim([other])
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._coeffs)
        return self._hash

    def __repr__(self) -> str:
        return f"QPoly({list(self._coeffs)})"

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for k, c in self.items():
            mono = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __add__(self, other: QPoly | int) -> QPoly:
        return add(self, _coerce(other))

    __radd__ = __add__

    def __neg__(self) -> QPoly:
        return QPoly(-c for c in self._coeffs)

    def __sub__(self, other: QPoly | int) -> QPoly:
        return add(self, -_coerce(other))

    def __rsub__(self, other: QPoly | int) -> QPoly:
        return add(_coerce(other), -self)

    def __mul__(self, other: QPoly | int) -> QPoly:
        return mul(self, _coerce(other))

    __rmul__ = __mul__

    def __call__(self, x):
        if isinstance(x, (int, Fraction)):
            return eval_rational(self, x)
        raise TypeError("use eval_real() for real-valued evaluation")

    def divmod(self, divisor: QPoly) -> tuple[QPoly, QPoly]:
        """Polynomial long division; the divisor must be monic up to sign."""
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        lead = divisor._coeffs[-1]
        if lead not in (1, -1):
            raise DomainError("integer polynomial division needs a leading coefficient of +-1")
        rem = list(self._coeffs)
        dd = divisor.degree
        if len(rem) - 1 < dd:
            return QPoly(), self
        quot = [0] * (len(rem) - dd)
        dcoeffs = divisor._coeffs
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i] * lead
            if c:
                quot[i - dd] = c
                base = i - dd
                for j, dc in enumerate(dcoeffs):
                    rem[base + j] -= c * dc
        return QPoly(quot), QPoly(rem)

    def exact_div(self, divisor: QPoly) -> QPoly:
        quot, rem = self.divmod(divisor)
        if not rem.is_zero():
            raise DomainError(f"{divisor!r} does not divide {self!r}")
        return quot


def _coerce(value: QPoly | int) -> QPoly:
    if isinstance(value, QPoly):
        return value
    if isinstance(value, int):
        return QPoly([value])
    raise TypeError(f"cannot combine QPoly with {type(value).__name__}")


def add(p: QPoly, r: QPoly) -> QPoly:
    a, b = p.coefficients, r.coefficients
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return QPoly(out)


def mul(p: QPoly, r: QPoly) -> QPoly:
    """Schoolbook product."""
    a, b = p.coefficients, r.coefficients
    if not a or not b:
        return QPoly()
    if len(a) < len(b):
        a, b = b, a
    out = [0] * (len(a) + len(b) - 1)
    for j, cb in enumerate(b):
        if cb:
            for i, ca in enumerate(a):
                out[i + j] += ca * cb
    return QPoly(out)


def scale_shift(p: QPoly, c: int, m: int) -> QPoly:
    """Return c * q^m * p."""
    if m < 0:
        raise DomainError(f"shift must be non-negative, got {m}")
    if c == 0 or p.is_zero():
        return QPoly()
    return QPoly([0] * m + [c * x for x in p.coefficients])


def eval_rational(p: QPoly, r: Fraction | int) -> Fraction:
    """Exact Horner evaluation at a rational point."""
    acc = Fraction(0)
    for c in reversed(p.coefficients):
        acc = acc * r + c
    return acc


def eval_real(p: QPoly, x, precision: int = DEFAULT_PRECISION):
    """Horner evaluation at ``x`` in an mpmath context of ``precision`` digits."""
    ctx = real_context(precision)
    x = to_real(ctx, x)
    acc = ctx.zero
    for c in reversed(p.coefficients):
        acc = acc * x + c
    return acc


def derivative(p: QPoly) -> QPoly:
    return QPoly(k * c for k, c in enumerate(p.coefficients) if k)
