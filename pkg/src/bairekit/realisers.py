"""Executable realisers with machine-checkable certificates.

* ``bct_realiser`` -- the constructive nested-interval argument: given radius
  witnesses for a sequence of dense open sets, produce a point of the
  intersection together with a per-stage trace (ball inside set n, interval
  halving) that re-verifies from the instance data alone.
* ``cantor_avoid`` -- trisection against an enumerated sequence of reals:
  a point apart from every listed real, with a positive separation certificate
  per index.
* ``omega_fin`` -- the finiteness realiser on enumerated finite sets.
* ``strong_cantor_realiser`` -- a point outside a height-countable set, by
  either route (through the category realiser, or through enumeration plus
  avoidance).
* ``enumerate_finite_closed`` -- locate the finitely many points of a closed
  set given by an interval enumeration of its complement.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Tuple

from .errors import BudgetExhausted, CertificateFailure
from .exact import ExactReal, from_rational
from .opensets import (UNIT, DenseOpenSequence, OpenR4, RationalInterval,
                       complement_components, dense_witness_search,
                       finite_complement_r2)
from .sternbrocot import ZERO, canonical_rational


@dataclass(frozen=True)
class Stage:
    """One step of the nested-interval construction.

    The stage-n witness ball (center +- witness_radius) lies inside set n and
    inside the previous interval; the stage interval shrinks it to
    radius = min(witness_radius / 2, 2**-(n+1)), so the final point sits at
    distance >= witness_radius / 2 from everything the ball excludes.
    """

    index: int
    center: Fraction
    probe_precision: int
    witness_radius: Fraction
    radius: Fraction
    steps: int

    @property
    def lo(self) -> Fraction:
        return self.center - self.radius

    @property
    def hi(self) -> Fraction:
        return self.center + self.radius

    @property
    def interval(self) -> RationalInterval:
        return RationalInterval(self.lo, self.hi)


class BairePoint:
    """A certified member of the intersection of a dense open sequence.

    Stages extend lazily, so the value answers arbitrary precision queries;
    approximation k is the center of stage k+1, which is within 2**-(k+2) of
    the limit.
    """

    def __init__(self, seq: DenseOpenSequence, budget: Optional[int] = None):
        self._seq = seq
        self._budget = budget
        self._stages: list[Stage] = []
        self._value: Optional[ExactReal] = None

    @property
    def sequence(self) -> DenseOpenSequence:
        return self._seq

    def stage(self, n: int) -> Stage:
        while len(self._stages) <= n:
            idx = len(self._stages)
            parent = self._stages[idx - 1].interval if idx > 0 else UNIT
            hit = dense_witness_search(self._seq.set_at(idx), parent, self._budget)
            radius = min(hit.radius / 2, Fraction(1, 2 ** (idx + 1)))
            self._stages.append(Stage(idx, hit.center, hit.probe_precision,
                                      hit.radius, radius, hit.steps))
        return self._stages[n]

    def stages(self, depth: int) -> list[Stage]:
        return [self.stage(n) for n in range(depth)]

    @property
    def value(self) -> ExactReal:
        if self._value is None:
            self._value = ExactReal(lambda k: self.stage(k + 1).center)
        return self._value

    def separation_from(self, target: Fraction, stage_index: int) -> Fraction:
        """Certified distance from the limit to a point the stage ball excludes.

        Only sound when set ``stage_index`` genuinely excludes ``target``
        (the witness ball then cannot contain it); raises when the geometry
        contradicts that assumption.
        """
        s = self.stage(stage_index)
        sep = abs(target - s.center) - s.radius
        if sep <= 0:
            raise CertificateFailure(
                f"stage {stage_index} ball does not exclude {target}")
        return sep


def bct_realiser(seq: DenseOpenSequence, depth: int = 32,
                 budget: Optional[int] = None) -> BairePoint:
    """Run the nested-interval construction for ``depth`` certified stages.

    Start from (0,1); at stage n search set n for a ball inside the current
    interval, then shrink.  Interval widths obey width <= 2**-n, so the limit
    is fast-Cauchy by construction.  Budget exhaustion (a non-dense or
    adversarial set) propagates from the witness search.
    """
    point = BairePoint(seq, budget=budget)
    point.stages(depth)
    return point


@dataclass(frozen=True)
class AvoidStage:
    """One trisection step: the kept closed interval [lo, hi] and the excluded
    approximation ball (center +- 2**-ball_precision) around sequence entry
    ``index``, separated by ``separation`` > 0."""

    index: int
    ball_center: Fraction
    ball_precision: int
    lo: Fraction
    hi: Fraction
    separation: Fraction

    @property
    def separation_precision(self) -> int:
        """A precision m with 2**-m < separation / 4, suitable for checking
        the separation on approximants alone."""
        m = 0
        while Fraction(4, 2 ** m) >= self.separation:
            m += 1
        return m


class AvoidancePoint:
    """A point avoiding every entry of an enumerated sequence of reals."""

    def __init__(self, entry_at: Callable[[int], ExactReal]):
        self._entry_at = entry_at
        self._stages: list[AvoidStage] = []
        self._value: Optional[ExactReal] = None

    def entry(self, n: int) -> ExactReal:
        return self._entry_at(n)

    def stage(self, n: int) -> AvoidStage:
        while len(self._stages) <= n:
            idx = len(self._stages)
            if idx == 0:
                lo, hi = ZERO, Fraction(1)
            else:
                prev = self._stages[idx - 1]
                lo, hi = prev.lo, prev.hi
            width = hi - lo
            # Ball radius below a sixth of the width: the ball then clears at
            # least one of the outer thirds entirely.
            k = (6 * 3 ** idx).bit_length()
            rho = Fraction(1, 2 ** k)
            center = self._entry_at(idx).approx(k)
            third = width / 3
            if center <= lo + width / 2:
                new_lo, new_hi = hi - third, hi
                sep = new_lo - (center + rho)
            else:
                new_lo, new_hi = lo, lo + third
                sep = (center - rho) - new_hi
            assert sep > 0
            self._stages.append(AvoidStage(idx, center, k, new_lo, new_hi, sep))
        return self._stages[n]

    def stages(self, depth: int) -> list[AvoidStage]:
        return [self.stage(n) for n in range(depth)]

    @property
    def value(self) -> ExactReal:
        if self._value is None:
            def fn(k: int) -> Fraction:
                s = self.stage(k + 1)
                return (s.lo + s.hi) / 2
            self._value = ExactReal(fn)
        return self._value


def cantor_avoid(entry_at: Callable[[int], ExactReal]) -> AvoidancePoint:
    """Diagonalize against an arbitrary enumerated sequence of reals.

    Stage n keeps one of three equal parts of the current closed interval
    whose closure misses the stage-n approximation ball of entry n, so the
    limit is apart from every entry with a positive certified radius.  Interval
    widths are exactly 3**-n regardless of the input.
    """
    return AvoidancePoint(entry_at)


def omega_fin(points: Sequence[Fraction]) -> list[ExactReal]:
    """Finiteness realiser on enumerated input: the set as exact reals,
    canonically deduplicated and sorted."""
    return [from_rational(q) for q in sorted(set(Fraction(p) for p in points))]


@dataclass(frozen=True)
class HeightCountableSet:
    """A set presented as nested finite slices A_n (all height-< n elements)."""

    slice_at: Callable[[int], list[Fraction]]
    label: str = ""


def merged_enumeration(a: HeightCountableSet, scan_margin: int = 16) -> Callable[[int], Fraction]:
    """Flatten nested slices into one enumerated sequence.

    Element n scans slices up to index 2n + scan_margin; if the slices stall
    below n+1 elements, previously seen elements repeat (avoiding an already
    avoided point is harmless).  Results are memoized for determinism.
    """
    collected: list[Fraction] = []
    seen: set[Fraction] = set()
    state = {"scanned": 0}
    memo: dict[int, Fraction] = {}

    def entry(n: int) -> Fraction:
        got = memo.get(n)
        if got is not None:
            return got
        cap = 2 * n + scan_margin
        while len(collected) <= n and state["scanned"] <= cap:
            for q in a.slice_at(state["scanned"]):
                if q not in seen:
                    seen.add(q)
                    collected.append(q)
            state["scanned"] += 1
        if len(collected) > n:
            out = collected[n]
        elif collected:
            out = collected[n % len(collected)]
        else:
            out = ZERO
        memo[n] = out
        return out

    return entry


@dataclass
class StrongCantorResult:
    """A point outside a height-countable set, with the route that built it."""

    value: ExactReal
    route: str
    baire: Optional[BairePoint] = None
    avoidance: Optional[AvoidancePoint] = None
    enumeration: Optional[Callable[[int], Fraction]] = None


def complement_sequence(a: HeightCountableSet) -> DenseOpenSequence:
    """The dense open sequence [0,1] minus slice n, distance-witnessed."""
    return DenseOpenSequence(
        set_at=lambda n: finite_complement_r2(a.slice_at(n),
                                              label=f"{a.label}-slice-{n}-complement"),
        label=f"complement({a.label})")


def strong_cantor_realiser(a: HeightCountableSet, route: str = "via_baire",
                           depth: int = 32, budget: Optional[int] = None) -> StrongCantorResult:
    """Produce a point of [0,1] outside a height-countable set.

    ``via_baire`` feeds the slice complements to the category realiser;
    ``via_enumeration`` flattens the slices and diagonalizes.  Either way the
    result carries apartness certificates for every element of every queried
    slice.
    """
    if route == "via_baire":
        point = bct_realiser(complement_sequence(a), depth=depth, budget=budget)
        return StrongCantorResult(value=point.value, route=route, baire=point)
    if route == "via_enumeration":
        entry = merged_enumeration(a)
        avoid = cantor_avoid(lambda n: from_rational(entry(n)))
        avoid.stages(depth)
        return StrongCantorResult(value=avoid.value, route=route,
                                  avoidance=avoid, enumeration=entry)
    raise ValueError(f"unknown route {route!r}")


@dataclass(frozen=True)
class ClosedComponent:
    lo: Fraction
    hi: Fraction
    stage: int

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


def _refine_component(o: OpenR4, comp: Tuple[Fraction, Fraction], start_stage: int,
                      stage_budget: int) -> ExactReal:
    state = {"m": start_stage, "comp": comp}

    def fn(k: int) -> Fraction:
        target = Fraction(1, 2 ** (k + 1))
        m, cur = state["m"], state["comp"]
        while cur[1] - cur[0] > target:
            if (o.size is not None and m >= o.size) or m >= stage_budget:
                raise BudgetExhausted(
                    f"component near {cur[0]} stuck above width 2^-{k + 1}", steps=m)
            m *= 2
            comps = complement_components(o.stage(m))
            inside = [c for c in comps if c[1] >= cur[0] and c[0] <= cur[1]]
            if len(inside) != 1:
                raise BudgetExhausted(
                    "component did not stabilize under refinement", steps=m)
            cur = inside[0]
        state["m"], state["comp"] = m, cur
        return (cur[0] + cur[1]) / 2

    return ExactReal(fn)


@dataclass
class EnumeratedClosedSet:
    points: list[ExactReal]
    components: list[ClosedComponent]
    stage: int


def enumerate_finite_closed(complement: OpenR4, bound: int, precision_index: int,
                            stage_budget: int = 4096) -> EnumeratedClosedSet:
    """Enumerate the points of a finite closed set C = [0,1] minus the union.

    Reveals interval stages until the uncovered part of [0,1] has at most
    ``bound`` closed components, each of width <= 2**-precision_index, then
    returns the component midpoints as exact reals (refined further on
    demand).  The unit-interval endpoints belong to C whenever uncovered.
    Raises BudgetExhausted when the component count will not drop to the
    bound: the caller's finiteness promise failed or the bound is too small.
    """
    if bound < 0 or precision_index < 0:
        raise ValueError("bound and precision index must be >= 0")
    target = Fraction(1, 2 ** precision_index)
    m = 1
    while True:
        comps = complement_components(complement.stage(m))
        if len(comps) <= bound and all(b - a <= target for a, b in comps):
            break
        if complement.size is not None and m >= complement.size:
            raise BudgetExhausted(
                f"{len(comps)} components remain with all intervals revealed "
                f"(bound {bound})", steps=m)
        if m >= stage_budget:
            raise BudgetExhausted(
                f"{len(comps)} components above bound {bound} after {m} stages",
                steps=m)
        m *= 2
    points = []
    for comp in comps:
        if comp[0] == comp[1]:
            points.append(from_rational(comp[0]))
        else:
            points.append(_refine_component(complement, comp, m, stage_budget))
    return EnumeratedClosedSet(
        points=points,
        components=[ClosedComponent(a, b, m) for a, b in comps],
        stage=m)


def rational_complement_sequence(label: str = "avoid-all-rationals") -> DenseOpenSequence:
    """Set n = [0,1] minus the n-th canonical rational (distance-witnessed)."""
    return DenseOpenSequence(
        set_at=lambda n: finite_complement_r2([canonical_rational(n)],
                                              label=f"complement-of-q{n}"),
        label=label)
