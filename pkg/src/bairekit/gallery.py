"""Oscillation-enriched functions of the first Baire class.

Every function here comes packaged with its oscillation data: the exact
oscillation value at rational probes, a witness that the oscillation at a
probe exceeds a power-of-two threshold, an optional oscillation-zero decision
hook, and radius witnesses for the complements of the closed level sets

    level-k set  =  { x in [0,1] : osc(x) >= 2**-k }.

Reductions consume only this enrichment; they never evaluate a function at an
irrational point (pointwise evaluation of a discontinuous function on exact
reals is not computable, and nothing downstream needs it).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .errors import NeedsMembershipDecision
from .exact import ExactReal, from_rational
from .opensets import (OpenR2, OpenR4, RationalInterval, finite_complement_r2,
                       full_r2, intersect_r2, r4_to_r2)
from .sternbrocot import (ONE, ZERO, denominator_bounded_distance,
                          fractions_up_to_denominator)


@dataclass(frozen=True)
class EnrichedBaire1:
    """A Baire-class-1 function together with its oscillation data.

    ``osc_positive_witness(q, budget)`` returns a precision m certifying
    osc(q) >= 2**-m, or None if no certificate was found within the budget
    (None is never a proof of continuity).  ``osc_zero_decision`` and
    ``has_rational_continuity_point`` are instance-supplied decidability
    hooks; gallery members answer them exactly.
    """

    name: str
    eval_at_rational: Callable[[Fraction], ExactReal]
    osc_at_rational: Callable[[Fraction], ExactReal]
    osc_positive_witness: Callable[[Fraction, int], Optional[int]]
    complement_of_Dk: Callable[[int], OpenR2]
    osc_zero_decision: Optional[Callable[[Fraction], bool]] = None
    has_rational_continuity_point: Optional[bool] = None


def rational_evaluator(f: EnrichedBaire1) -> Callable[[Fraction], Fraction]:
    """Exact rational-to-rational view of a gallery function (oracle duty)."""

    def ev(q: Fraction) -> Fraction:
        v = f.eval_at_rational(q)
        if v.exact_rational is None:
            raise ValueError(f"{f.name} has no exact rational values")
        return v.exact_rational

    return ev


def _threshold_precision(value: Fraction) -> int:
    """Least m with value >= 2**-m, for 0 < value <= 1."""
    m = 0
    while Fraction(1, 2 ** m) > value:
        m += 1
    return m


def thomae() -> EnrichedBaire1:
    """The ruler function: 1/q at a canonical fraction p/q, 0 off the rationals.

    Its oscillation at p/q is exactly 1/q (nearby values shrink with the
    denominator), so the function is its own oscillation on rational probes;
    the oscillation level-k set is the finite set of fractions with
    denominator <= 2**k, and the complement witness is the exact distance to
    the nearest such fraction.
    """

    def ev(q: Fraction) -> ExactReal:
        return from_rational(Fraction(1, q.denominator))

    def witness_osc(q: Fraction, budget: int) -> Optional[int]:
        return _threshold_precision(Fraction(1, q.denominator))

    def complement(k: int) -> OpenR2:
        bound = 2 ** k
        return OpenR2(lambda x, p: denominator_bounded_distance(x, bound),
                      exact_distance=True,
                      label=f"thomae-level-{k}-complement")

    return EnrichedBaire1(
        name="thomae",
        eval_at_rational=ev,
        osc_at_rational=ev,
        osc_positive_witness=witness_osc,
        complement_of_Dk=complement,
        osc_zero_decision=lambda q: False,
        has_rational_continuity_point=False,
    )


def thomae_Dk(k: int) -> list[Fraction]:
    """The level-k oscillation set of the ruler function: all canonical
    fractions of [0,1] with denominator <= 2**k, sorted."""
    if k < 0:
        raise ValueError("level index must be >= 0")
    return fractions_up_to_denominator(2 ** k)


@dataclass(frozen=True)
class ClosedNowhereDenseSeq:
    """A sequence of closed nowhere dense sets X_n, given through open data.

    ``complement_at(n)`` is the interval-union view of [0,1] minus X_n.
    ``membership_level(q)`` is the least n with q in X_n (None when q avoids
    every X_n); it is the hook that makes pointwise evaluation terminate.
    ``distance_to(x, n)``, when supplied, is the exact distance from x to X_n
    and yields far stronger complement witnesses than scanning interval
    stages (structured instances provide it; generic ones fall back to the
    stage-scanning conversion).
    """

    complement_at: Callable[[int], OpenR4]
    membership_level: Optional[Callable[[Fraction], Optional[int]]] = None
    distance_to: Optional[Callable[[Fraction, int], Fraction]] = None
    label: str = ""

    def complement_r2(self, n: int) -> OpenR2:
        if self.distance_to is not None:
            dist = self.distance_to
            return OpenR2(lambda x, p, _n=n: dist(x, _n),
                          exact_distance=True,
                          label=f"{self.label}-complement-{n}")
        return r4_to_r2(self.complement_at(n))


def make_h(seq: ClosedNowhereDenseSeq) -> EnrichedBaire1:
    """The least-level indicator of a closed nowhere dense sequence.

    Value 2**-(n+1) on a point whose least containing set is X_n, and 0 on
    points avoiding every X_n.  This function equals its own oscillation
    everywhere, so the enrichment is exact: the oscillation level-k set is
    X_0 | ... | X_{k-1} (empty for k = 0), and complement witnesses are the
    pointwise minima of the member complements.
    """

    def level_of(q: Fraction) -> Optional[int]:
        if seq.membership_level is None:
            raise NeedsMembershipDecision(
                f"instance {seq.label or '?'} has no membership hook")
        return seq.membership_level(q)

    def ev(q: Fraction) -> ExactReal:
        n = level_of(q)
        if n is None:
            return from_rational(ZERO)
        return from_rational(Fraction(1, 2 ** (n + 1)))

    def witness_osc(q: Fraction, budget: int) -> Optional[int]:
        n = level_of(q)
        if n is None:
            return None
        return n + 1

    def complement(k: int) -> OpenR2:
        if k == 0:
            return full_r2(label=f"{seq.label}-level-0-complement")
        parts = [seq.complement_r2(j) for j in range(k)]
        return intersect_r2(parts, label=f"{seq.label}-level-{k}-complement")

    return EnrichedBaire1(
        name=f"least-level({seq.label or 'closed-seq'})",
        eval_at_rational=ev,
        osc_at_rational=ev,
        osc_positive_witness=witness_osc,
        complement_of_Dk=complement,
        osc_zero_decision=lambda q: level_of(q) is None,
        has_rational_continuity_point=True if seq.membership_level is not None else None,
    )


def dyadic_closed_seq() -> ClosedNowhereDenseSeq:
    """X_n = the odd multiples of 2**-(n+1) in [0,1]: {1/2}, {1/4, 3/4}, ...

    Each point of [0,1] belongs to at most one X_n, complements are unions of
    2**n + 1 open intervals (produced lazily), and the distance to X_n is
    computable in closed form.
    """

    def complement_at(n: int) -> OpenR4:
        scale = 2 ** (n + 1)

        def attempt(j: int) -> Optional[RationalInterval]:
            if j > 2 ** n:
                return None
            return RationalInterval(Fraction(2 * j - 1, scale), Fraction(2 * j + 1, scale))

        return OpenR4(attempt, size=2 ** n + 1, label=f"dyadic-complement-{n}")

    def membership_level(q: Fraction) -> Optional[int]:
        den = q.denominator
        if den >= 2 and den & (den - 1) == 0:
            return den.bit_length() - 2
        return None

    def distance_to(x: Fraction, n: int) -> Fraction:
        if x < 0 or x > 1:
            return ZERO
        scale = 2 ** (n + 1)
        y = x * scale
        lower_odd = 2 * ((y.numerator // y.denominator - 1) // 2) + 1
        best: Optional[Fraction] = None
        for o in (lower_odd, lower_odd + 2, lower_odd + 4):
            if 1 <= o <= scale - 1:
                d = abs(y - o) / scale
                if best is None or d < best:
                    best = d
        assert best is not None
        return best

    return ClosedNowhereDenseSeq(
        complement_at=complement_at,
        membership_level=membership_level,
        distance_to=distance_to,
        label="dyadic",
    )


def finite_indicator(points) -> EnrichedBaire1:
    """The indicator of a finite set: 1 on the set, 0 elsewhere.

    The indicator is its own oscillation (jump height 1 at each listed point,
    locally constant elsewhere), so every oscillation level set equals the
    set itself and the complement witness is the exact distance to it.
    """
    pts = sorted(set(Fraction(p) for p in points))
    for p in pts:
        if p < 0 or p > 1:
            raise ValueError("indicator points must lie in [0,1]")
    member = set(pts)
    complement = finite_complement_r2(pts, label=f"indicator-{len(pts)}-complement")

    def ev(q: Fraction) -> ExactReal:
        return from_rational(ONE if q in member else ZERO)

    def witness_osc(q: Fraction, budget: int) -> Optional[int]:
        return 0 if q in member else None

    return EnrichedBaire1(
        name=f"indicator({','.join(str(p) for p in pts) or 'empty'})",
        eval_at_rational=ev,
        osc_at_rational=ev,
        osc_positive_witness=witness_osc,
        complement_of_Dk=lambda k: complement,
        osc_zero_decision=lambda q: q not in member,
        has_rational_continuity_point=True,
    )


def brute_force_osc(f: Callable[[Fraction], Fraction], q: Fraction,
                    window_exponent: int, grid_exponent: int) -> Fraction:
    """Finite oscillation oracle: max - min of ``f`` over the rational grid
    q + i*2**-g for |i*2**-g| <= 2**-m, clipped to [0,1].

    Used as an independent check of oscillation values; converges to the true
    oscillation at q as both exponents grow.
    """
    if grid_exponent < window_exponent:
        raise ValueError("grid must refine the window")
    half = 2 ** (grid_exponent - window_exponent)
    den = q.denominator << grid_exponent
    num0 = q.numerator << grid_exponent
    step = q.denominator
    lo_val: Optional[Fraction] = None
    hi_val: Optional[Fraction] = None
    for i in range(-half, half + 1):
        num = num0 + i * step
        if num < 0 or num > den:
            continue
        v = f(Fraction(num, den))
        if lo_val is None or v < lo_val:
            lo_val = v
        if hi_val is None or v > hi_val:
            hi_val = v
    assert lo_val is not None and hi_val is not None
    return hi_val - lo_val
