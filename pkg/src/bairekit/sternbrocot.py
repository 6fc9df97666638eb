"""Canonical rational enumerations and bounded-denominator geometry.

The toolkit fixes one deterministic, duplicate-free, dense enumeration of the
rationals in any interval: the Stern-Brocot order (each node is the
least-denominator fraction of its subinterval, visited breadth-first).  The
unit-interval enumeration prepends the endpoints 0 and 1.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from typing import Iterator, Tuple

ZERO = Fraction(0)
ONE = Fraction(1)


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """The least-denominator rational strictly between ``lo`` and ``hi``.

    Requires ``0 <= lo < hi``.  Among denominator-1 candidates the smallest
    integer wins, so the result is unique and deterministic.
    """
    if not (0 <= lo < hi):
        raise ValueError("need 0 <= lo < hi")
    floor_lo = lo.numerator // lo.denominator
    if hi > floor_lo + 1:
        return Fraction(floor_lo + 1)
    f_lo = lo - floor_lo
    f_hi = hi - floor_lo
    if f_lo == 0:
        # Simplest in (0, f_hi) is 1/n for the least n with 1/n < f_hi.
        n = f_hi.denominator // f_hi.numerator + 1
        return floor_lo + Fraction(1, n)
    inner = simplest_between(1 / f_hi, 1 / f_lo)
    return floor_lo + 1 / inner


def rationals_between(lo: Fraction, hi: Fraction) -> Iterator[Fraction]:
    """All rationals in the open interval (lo, hi), Stern-Brocot order.

    Breadth-first over the subinterval tree rooted at the simplest fraction;
    every rational of the interval appears exactly once.
    """
    queue: deque[Tuple[Fraction, Fraction]] = deque([(lo, hi)])
    while queue:
        a, b = queue.popleft()
        mid = simplest_between(a, b)
        yield mid
        queue.append((a, mid))
        queue.append((mid, b))


def interval_rationals(lo: Fraction, hi: Fraction) -> Iterator[Fraction]:
    """Canonical enumeration of [lo, hi]: both endpoints, then the interior."""
    yield lo
    yield hi
    yield from rationals_between(lo, hi)


_unit_cache: list[Fraction] = []
_unit_source = interval_rationals(ZERO, ONE)


def canonical_rational(n: int) -> Fraction:
    """The n-th rational of [0,1] in the canonical order: 0, 1, 1/2, 1/3, 2/3, ..."""
    if n < 0:
        raise ValueError("index must be >= 0")
    while len(_unit_cache) <= n:
        _unit_cache.append(next(_unit_source))
    return _unit_cache[n]


def farey_bracket(x: Fraction, n: int) -> Tuple[Fraction, Fraction]:
    """Consecutive denominator-<=n fractions bracketing ``x``.

    Requires ``0 < x < 1`` with ``x.denominator > n``.  Runs the Stern-Brocot
    walk with multiplicative jumps, so the cost is polynomial in the bit size
    of ``x`` and ``n`` rather than in ``n`` itself.
    """
    p, q = x.numerator, x.denominator
    if q <= n:
        raise ValueError("x itself has denominator <= n")
    if not (0 < x < 1):
        raise ValueError("x must lie strictly inside (0, 1)")
    a, b, c, d = 0, 1, 1, 1
    while b + d <= n:
        if p * (b + d) < q * (a + c):
            # x below the mediant: pull the right endpoint in k times.
            num, den = q * c - p * d, p * b - q * a
            k = (num + den - 1) // den - 1
            k = min(k, (n - d) // b)
            c, d = c + k * a, d + k * b
        else:
            num, den = p * b - q * a, q * c - p * d
            k = (num + den - 1) // den - 1
            k = min(k, (n - b) // d)
            a, b = a + k * c, b + k * d
    return Fraction(a, b), Fraction(c, d)


def denominator_bounded_distance(x: Fraction, n: int) -> Fraction:
    """Distance from ``x`` in [0,1] to the nearest fraction with denominator <= n.

    Zero when ``x`` itself qualifies; points outside [0,1] get 0 (no
    information), matching the witness convention for subsets of the unit
    interval.
    """
    if n < 1:
        raise ValueError("denominator bound must be >= 1")
    if x < 0 or x > 1:
        return ZERO
    if x.denominator <= n:
        return ZERO
    left, right = farey_bracket(x, n)
    return min(x - left, right - x)


def fractions_up_to_denominator(n: int) -> list[Fraction]:
    """All canonical fractions of [0,1] with denominator <= n, sorted."""
    if n < 1:
        return []
    out = [ZERO, ONE]
    for den in range(2, n + 1):
        for num in range(1, den):
            f = Fraction(num, den)
            if f.denominator == den:
                out.append(f)
    out.sort()
    return out
