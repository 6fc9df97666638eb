"""Exact real numbers as fast-converging streams of rational approximations.

A real ``x`` is queried through ``approx(k)``, a rational within ``2**-k`` of
``x``.  Approximations at different precisions cohere: for every ``n`` and
``i``, ``|approx(n) - approx(n+i)| <= 2**-n``.  Equality of two reals is never
decided; the toolkit only ever produces apartness certificates (a precision at
which the approximations visibly separate) or the verdict "indistinguishable
at this precision".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .errors import BudgetExhausted

Rational = Fraction


def parse_rational(text: str) -> Fraction:
    """Parse a "p/q" (or bare integer) string into an exact rational."""
    return Fraction(text.strip())


def format_rational(q: Fraction) -> str:
    """Render a rational as "p/q" (or "p" when the denominator is 1)."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class ExactReal:
    """A real number given by precision-indexed rational approximations.

    Public contract: ``|approx(k) - x| <= 2**-k`` and
    ``|approx(n) - approx(n+i)| <= 2**-n`` for all ``n, i >= 0``.

    Internally every constructor maintains the stronger bound
    ``|approx(k) - x| <= 2**-(k+1)`` (each operation asks its operands for one
    extra digit of precision), which is what makes both public guarantees
    hold with the closed inequality.
    """

    __slots__ = ("_fn", "_cache", "exact_rational")

    def __init__(self, fn: Callable[[int], Fraction], exact_rational: Optional[Fraction] = None):
        # fn(k) must be within 2**-(k+1) of the represented real.
        self._fn = fn
        self._cache: dict[int, Fraction] = {}
        self.exact_rational = exact_rational

    def approx(self, k: int) -> Fraction:
        """The k-th approximation; within 2**-k of the represented real."""
        if k < 0:
            raise ValueError("precision index must be >= 0")
        if self.exact_rational is not None:
            return self.exact_rational
        got = self._cache.get(k)
        if got is None:
            got = self._fn(k)
            self._cache[k] = got
        return got

    def __repr__(self) -> str:
        if self.exact_rational is not None:
            return f"ExactReal({format_rational(self.exact_rational)})"
        return f"ExactReal(~{format_rational(self.approx(10))} @2^-10)"


def from_rational(q: Fraction) -> ExactReal:
    """The real equal to ``q``: a constant approximation stream."""
    q = Fraction(q)
    return ExactReal(lambda k: q, exact_rational=q)


def from_cauchy(fn: Callable[[int], Fraction]) -> ExactReal:
    """Wrap a standard stream (``|fn(k) - x| <= 2**-k``), renormalizing.

    The wrapper asks for one extra digit so the stored stream meets the
    internal ``2**-(k+1)`` discipline.
    """
    return ExactReal(lambda k: fn(k + 1))


def _binary(x: ExactReal, y: ExactReal, op: Callable[[Fraction, Fraction], Fraction],
            extra: int) -> ExactReal:
    exact = None
    if x.exact_rational is not None and y.exact_rational is not None:
        exact = op(x.exact_rational, y.exact_rational)
    return ExactReal(lambda k: op(x.approx(k + extra), y.approx(k + extra)), exact_rational=exact)


def add(x: ExactReal, y: ExactReal) -> ExactReal:
    return _binary(x, y, lambda a, b: a + b, 1)


def sub(x: ExactReal, y: ExactReal) -> ExactReal:
    return _binary(x, y, lambda a, b: a - b, 1)


def neg(x: ExactReal) -> ExactReal:
    exact = None if x.exact_rational is None else -x.exact_rational
    return ExactReal(lambda k: -x.approx(k), exact_rational=exact)


def absolute(x: ExactReal) -> ExactReal:
    exact = None if x.exact_rational is None else abs(x.exact_rational)
    return ExactReal(lambda k: abs(x.approx(k)), exact_rational=exact)


def minimum(x: ExactReal, y: ExactReal) -> ExactReal:
    # |min(a,b) - min(x,y)| <= max(|a-x|, |b-y|): no extra digit needed.
    return _binary(x, y, min, 0)


def maximum(x: ExactReal, y: ExactReal) -> ExactReal:
    return _binary(x, y, max, 0)


def midpoint(x: ExactReal, y: ExactReal) -> ExactReal:
    # Averaging halves the operand error, so same-precision queries suffice.
    return _binary(x, y, lambda a, b: (a + b) / 2, 0)


_ARITH = {
    "add": add,
    "sub": sub,
    "neg": neg,
    "abs": absolute,
    "min": minimum,
    "max": maximum,
    "midpoint": midpoint,
}


def arith(op: str, x: ExactReal, y: Optional[ExactReal] = None) -> ExactReal:
    """Name-dispatched arithmetic: add, sub, neg, abs, min, max, midpoint."""
    fn = _ARITH.get(op)
    if fn is None:
        raise ValueError(f"unknown operation {op!r}")
    if op in ("neg", "abs"):
        if y is not None:
            raise ValueError(f"{op} is unary")
        return fn(x)
    if y is None:
        raise ValueError(f"{op} needs two operands")
    return fn(x, y)


@dataclass(frozen=True)
class Comparison:
    """Outcome of comparing two reals at a precision.

    kind is "less", "greater", or "indistinguishable".  A less/greater verdict
    is sound: the real order agrees, with separation witnessed by the
    precision-(k+2) approximants.  "indistinguishable" only says the gap, if
    any, is below resolution 2**-k.
    """

    kind: str
    precision: int

    @property
    def decided(self) -> bool:
        return self.kind != "indistinguishable"


def cmp_at_precision(x: ExactReal, y: ExactReal, k: int) -> Comparison:
    """Compare ``x`` and ``y`` up to resolution ``2**-k``."""
    gap = Fraction(1, 2 ** (k + 1))
    a = x.approx(k + 2)
    b = y.approx(k + 2)
    if a + gap < b:
        return Comparison("less", k)
    if b + gap < a:
        return Comparison("greater", k)
    return Comparison("indistinguishable", k)


def separation_certificate(x: ExactReal, y: ExactReal, budget: Optional[int] = None) -> int:
    """Least tried precision m with ``|approx(x,m) - approx(y,m)| > 2**-m+1``.

    Such an m certifies the reals are distinct.  The search semidecides
    apartness: on equal inputs it diverges unless a budget is supplied, in
    which case BudgetExhausted reports "indistinguishable so far".
    """
    m = 0
    while budget is None or m < budget:
        if abs(x.approx(m) - y.approx(m)) > Fraction(2, 2 ** m):
            return m
        m += 1
    raise BudgetExhausted(f"no separation found at precisions 0..{budget - 1}", steps=budget)
