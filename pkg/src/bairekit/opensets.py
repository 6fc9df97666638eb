"""Representations of open subsets of the unit interval and their conversions.

Four views, carrying increasing computational information:

* R1 -- a bare membership probe at rational points (interface only; nothing in
  the pipeline consumes it except as a post-check).
* R2 -- a radius witness: ``witness(x, p) = r > 0`` promises
  ``(x - r, x + r) & [0,1]`` is inside the set.  Zero means "no information".
* R3 -- a stage-indexed lower bound on the distance to the complement,
  monotone in the stage and converging to the true distance.
* R4 -- a (possibly infinite) union of open rational intervals, consumed
  through monotone finite stages.

The exact R2-to-R3 upgrade is an oracle hook (see ``reductions``); everything
here is budgeted and sound at every stage.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, Tuple

from .errors import BudgetExhausted
from .sternbrocot import ONE, ZERO, canonical_rational, interval_rationals


@dataclass(frozen=True)
class RationalInterval:
    """A nondegenerate open rational interval (lo, hi)."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("interval needs lo < hi")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, q: Fraction) -> bool:
        return self.lo < q < self.hi

    def inradius(self, q: Fraction) -> Fraction:
        """Distance from an interior point to the nearer endpoint (0 outside)."""
        if not self.contains(q):
            return ZERO
        return min(q - self.lo, self.hi - q)


UNIT = RationalInterval(ZERO, ONE)


@dataclass(frozen=True)
class OpenR1:
    """Membership probe at rationals; declared open, no witness data."""

    member_at: Callable[[Fraction], bool]
    label: str = ""


@dataclass(frozen=True)
class OpenR2:
    """Radius-witness view.

    ``witness(x, p)`` may depend on a probe effort ``p``; any positive return
    is sound for every larger effort.  ``exact_distance`` marks instances
    whose witness equals the true distance to the complement at every probe
    (finite-set complements and other structured sets); those admit the exact
    distance upgrade.
    """

    witness: Callable[[Fraction, int], Fraction]
    exact_distance: bool = False
    label: str = ""


@dataclass(frozen=True)
class OpenR3:
    """Stage-indexed distance lower bounds, monotone and convergent."""

    lower_bound: Callable[[Fraction, int], Fraction]
    label: str = ""


class OpenR4:
    """Union of open rational intervals, revealed through finite stages.

    ``stage(m)`` returns the intervals visible after ``m`` enumeration steps;
    stages are monotone (later stages extend earlier ones).  List-backed
    instances reveal one listed interval per step; stream-backed instances
    (products of conversions) may take several steps per emitted interval,
    which keeps them total on empty sets.
    """

    def __init__(self, attempt: Callable[[int], Optional[RationalInterval]],
                 size: Optional[int] = None, label: str = ""):
        self._attempt = attempt
        self._emitted: list[Optional[RationalInterval]] = []
        self.size = size
        self.label = label

    @staticmethod
    def from_intervals(intervals: Sequence[RationalInterval], label: str = "") -> "OpenR4":
        ivs = tuple(intervals)
        return OpenR4(lambda n: ivs[n] if n < len(ivs) else None, size=len(ivs), label=label)

    @staticmethod
    def from_stream(attempt: Callable[[int], Optional[RationalInterval]], label: str = "") -> "OpenR4":
        return OpenR4(attempt, size=None, label=label)

    def stage(self, m: int) -> list[RationalInterval]:
        if self.size is not None:
            m = min(m, self.size)
        while len(self._emitted) < m:
            self._emitted.append(self._attempt(len(self._emitted)))
        return [iv for iv in self._emitted[:m] if iv is not None]

    def interval_at(self, n: int) -> Optional[RationalInterval]:
        """The n-th listed interval of a finite instance (None past the end)."""
        if self.size is None:
            raise ValueError("stream-backed unions are consumed through stage()")
        if n >= self.size:
            return None
        self.stage(n + 1)
        return self._emitted[n]


@dataclass(frozen=True)
class InsideWithRadius:
    radius: Fraction


@dataclass(frozen=True)
class UnknownAt:
    stage: int


def r4_membership(o: OpenR4, q: Fraction, m: int):
    """Semidecide membership of ``q`` against the first ``m`` intervals.

    Inside verdicts report the largest endpoint gap found and stay sound at
    every later stage; UnknownAt(m) is a value, not an error.
    """
    best = ZERO
    for iv in o.stage(m):
        best = max(best, iv.inradius(q))
    if best > 0:
        return InsideWithRadius(best)
    return UnknownAt(m)


def merge_open_intervals(intervals: Iterable[RationalInterval]) -> list[RationalInterval]:
    """Disjoint sorted union of open intervals.

    Abutting intervals such as (0,1/2) and (1/2,1) are NOT fused: their shared
    endpoint is not covered by either.
    """
    ordered = sorted(intervals, key=lambda iv: (iv.lo, iv.hi))
    merged: list[RationalInterval] = []
    for iv in ordered:
        if merged and iv.lo < merged[-1].hi:
            if iv.hi > merged[-1].hi:
                merged[-1] = RationalInterval(merged[-1].lo, iv.hi)
        else:
            merged.append(iv)
    return merged


def complement_components(intervals: Iterable[RationalInterval],
                          lo: Fraction = ZERO, hi: Fraction = ONE) -> list[Tuple[Fraction, Fraction]]:
    """Closed components [a, b] (possibly single points a == b) of [lo, hi]
    minus the union of the given open intervals."""
    comps: list[Tuple[Fraction, Fraction]] = []
    cursor = lo
    for iv in merge_open_intervals(intervals):
        if iv.lo > hi:
            break
        if iv.lo >= cursor:
            comps.append((cursor, min(iv.lo, hi)))
        cursor = max(cursor, iv.hi)
        if cursor > hi:
            return comps
    if cursor <= hi:
        comps.append((cursor, hi))
    return comps


def _distance_to_components(x: Fraction, comps: Sequence[Tuple[Fraction, Fraction]]) -> Fraction:
    best: Optional[Fraction] = None
    for a, b in comps:
        if a <= x <= b:
            return ZERO
        d = a - x if x < a else x - b
        if best is None or d < best:
            best = d
    assert best is not None
    return best


def r4_to_r3_lower_bound(o: OpenR4, x: Fraction, m: int) -> Fraction:
    """Stage-m distance lower bound: the exact distance from ``x`` to the
    complement of the first m intervals (merged).

    Monotone non-decreasing in m, converging to the distance to the true
    complement.  Reports the constant 1 once the revealed union covers all of
    [0,1] (the full-set convention), and 0 for probes outside [0,1].
    """
    if x < 0 or x > 1:
        return ZERO
    comps = complement_components(o.stage(m))
    if not comps:
        return ONE
    return _distance_to_components(x, comps)


def r4_to_r3(o: OpenR4) -> OpenR3:
    return OpenR3(lambda x, m: r4_to_r3_lower_bound(o, x, m),
                  label=f"distance({o.label})" if o.label else "")


def r4_to_r2(o: OpenR4) -> OpenR2:
    """Weaken an interval union to a radius witness.

    ``witness(x, p)`` scans the first p intervals and returns the best
    inradius found (0 when none contains x).  Sound at every p; complete in
    the limit for members.
    """

    def witness(x: Fraction, p: int) -> Fraction:
        if x < 0 or x > 1:
            return ZERO
        best = ZERO
        for iv in o.stage(p):
            best = max(best, iv.inradius(x))
        return best

    return OpenR2(witness, label=f"witness({o.label})" if o.label else "")


def diagonal_pair(t: int) -> Tuple[int, int]:
    # Cantor-style diagonal: t -> (i, m) visiting every pair exactly once.
    import math
    s = (math.isqrt(8 * t + 1) - 1) // 2
    j = t - s * (s + 1) // 2
    return j, s - j


def r3_to_r4(o: OpenR3, label: str = "") -> OpenR4:
    """Enumerate an interval union from distance lower bounds.

    Dovetails (canonical rational q_i, stage m); whenever the stage-m bound at
    q_i is positive, the interval (q_i - lb, q_i + lb) is emitted.  Every
    emission is inside the set; the union of all emissions recovers it.
    """

    def attempt(t: int) -> Optional[RationalInterval]:
        i, m = diagonal_pair(t)
        q = canonical_rational(i)
        lb = o.lower_bound(q, m)
        if lb > 0:
            return RationalInterval(q - lb, q + lb)
        return None

    return OpenR4.from_stream(attempt, label=label or (f"intervals({o.label})" if o.label else ""))


def full_r2(label: str = "unit-interval") -> OpenR2:
    """The whole unit interval: constant witness 1."""
    return OpenR2(lambda x, p: ONE if 0 <= x <= 1 else ZERO,
                  exact_distance=True, label=label)


def finite_complement_r2(points: Iterable[Fraction], label: str = "") -> OpenR2:
    """The complement of a finite set, witnessed by exact distance."""
    pts = sorted(set(Fraction(p) for p in points))
    if not pts:
        return full_r2(label or "complement-of-empty")

    import bisect

    def witness(x: Fraction, p: int) -> Fraction:
        if x < 0 or x > 1:
            return ZERO
        i = bisect.bisect_left(pts, x)
        best: Optional[Fraction] = None
        if i < len(pts):
            best = pts[i] - x
        if i > 0:
            d = x - pts[i - 1]
            best = d if best is None else min(best, d)
        return best

    return OpenR2(witness, exact_distance=True,
                  label=label or f"complement-of-{len(pts)}-points")


def intersect_r2(sets: Sequence[OpenR2], label: str = "") -> OpenR2:
    """Finite intersection: the least witness is sound for every member set."""
    if len(sets) == 1:
        return sets[0]

    def witness(x: Fraction, p: int) -> Fraction:
        return min(s.witness(x, p) for s in sets)

    return OpenR2(witness,
                  exact_distance=all(s.exact_distance for s in sets),
                  label=label or "intersection")


@dataclass(frozen=True)
class SearchHit:
    """Result of a dense witness search: an open ball inside O and the target
    interval, plus the probe bookkeeping needed to re-verify it."""

    center: Fraction
    radius: Fraction
    probe_precision: int
    steps: int


@dataclass(frozen=True)
class DenseOpenSequence:
    """A sequence of dense open sets in executable (radius-witness) form."""

    set_at: Callable[[int], OpenR2]
    r4_at: Optional[Callable[[int], OpenR4]] = None
    label: str = ""


def dense_witness_search(o: OpenR2, interval: RationalInterval,
                         budget: Optional[int] = None) -> SearchHit:
    """Find a rational ball inside ``o`` and strictly inside ``interval``.

    Probes the canonical rationals of the interval, dovetailed against
    increasing probe effort; the returned radius is the witness radius clipped
    to keep the ball inside the interval.  The first hit in dovetail order
    wins, so results are deterministic.  Exact-distance witnesses ignore probe
    effort, so for them the probes advance linearly instead of re-querying
    every earlier probe at higher effort.  A budget turns divergence on
    non-dense instances into BudgetExhausted.
    """
    probes: list[Fraction] = []
    source = interval_rationals(interval.lo, interval.hi)
    steps = 0

    def probe(i: int) -> Fraction:
        while len(probes) <= i:
            probes.append(next(source))
        return probes[i]

    def attempt(i: int, p: int) -> Optional[SearchHit]:
        nonlocal steps
        if budget is not None and steps >= budget:
            raise BudgetExhausted(
                f"no witness ball found in {steps} probes", steps=steps)
        steps += 1
        q = probe(i)
        r = min(o.witness(q, p), q - interval.lo, interval.hi - q)
        if r > 0:
            return SearchHit(center=q, radius=r, probe_precision=p, steps=steps)
        return None

    if o.exact_distance:
        for i in itertools.count():
            hit = attempt(i, 0)
            if hit is not None:
                return hit
    for t in itertools.count():
        for i in range(t + 1):
            hit = attempt(i, t - i)
            if hit is not None:
                return hit
