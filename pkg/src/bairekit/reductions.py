"""Reduction combinators between the realiser classes.

Each combinator takes an oracle for one class (as a plain callable) plus
instance data and returns a certified answer for another class:

* category realiser -> continuity-point finder (feed the oscillation level
  complements);
* continuity-point finder -> category realiser (through the least-level
  indicator of the closed sets, with independent re-certification);
* the Volterra splitters in both directions, including the forced-irrational
  construction (intersect with complements of the canonical rationals);
* the two-function and function-sequence variants;
* the min-max-window reduction back to a category realiser;
* the countable-dense-set splitter;
* the witness pipeline: continuity points from a witness producer, and the
  finiteness-realiser recovery for finite indicators through the exact
  distance hook.

Rationality of an output is never tested after the fact; it is declared and
certified through the tag on the returned point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Union

from . import certificates as certs
from .errors import (BudgetExhausted, CertificateFailure, DeltaHookUnavailable,
                     InjectivityViolation, NeedsOscZeroDecision)
from .exact import ExactReal, from_rational
from .gallery import ClosedNowhereDenseSeq, EnrichedBaire1, make_h, thomae
from .opensets import (DenseOpenSequence, OpenR2, OpenR3, OpenR4,
                       finite_complement_r2, intersect_r2, r3_to_r4)
from .realisers import (BairePoint, EnumeratedClosedSet, bct_realiser,
                        enumerate_finite_closed)
from .sternbrocot import canonical_rational

BaireOracle = Callable[[DenseOpenSequence], BairePoint]


def builtin_baire_oracle(depth: int = 16, budget: Optional[int] = None) -> BaireOracle:
    return lambda seq: bct_realiser(seq, depth=depth, budget=budget)


@dataclass(frozen=True)
class RationalLiteral:
    """Tag: the point is exactly this rational."""

    q: Fraction


@dataclass(frozen=True)
class ApartFromRationals:
    """Tag: certified apartness from every canonical rational, on demand."""

    separation_at: Callable[[int], dict]


Tag = Union[RationalLiteral, ApartFromRationals, None]


@dataclass
class TaggedPoint:
    value: ExactReal
    tag: Tag
    records: list = field(default_factory=list)
    baire: Optional[BairePoint] = None


@dataclass
class CertifiedReal:
    value: ExactReal
    records: list = field(default_factory=list)


@dataclass
class RationalDiscontinuity:
    q: Fraction
    precision: int
    records: list = field(default_factory=list)


@dataclass
class IrrationalContinuity:
    point: TaggedPoint
    records: list = field(default_factory=list)


VolterraAnswer = Union[RationalDiscontinuity, IrrationalContinuity]


def _separation_precision(sep: Fraction) -> int:
    m = 0
    while Fraction(4, 2 ** m) >= sep:
        m += 1
    return m


def _rational_separation(point: BairePoint, index: int) -> dict:
    """Separation of the point from canonical rational ``index``, derived from
    the trace stage that excluded it (stage index+1 of a forced sequence)."""
    target = canonical_rational(index)
    stage = index + 1
    sep = point.separation_from(target, stage)
    m = _separation_precision(sep)
    return certs.separation_record(target=target, radius=sep, precision=m,
                                   value_approx=point.value.approx(m),
                                   stage=stage, target_index=index)


def continuity_point_from_baire(f: EnrichedBaire1, baire: BaireOracle,
                                depth: int = 16) -> TaggedPoint:
    """A continuity point of ``f`` from a category realiser.

    Feeds the oscillation level complements; the stage-k certificate places
    the point in a ball where the oscillation stays below 2**-k, which is the
    continuity certificate (and serves the quasi-continuity, lower
    semi-continuity, and intermediate-value variants as well).
    """
    seq = DenseOpenSequence(set_at=f.complement_of_Dk,
                            label=f"{f.name}-level-complements")
    point = baire(seq)
    records = [certs.stage_record(s) for s in point.stages(depth)]
    return TaggedPoint(value=point.value, tag=None, records=records, baire=point)


def forced_irrational_sequence(f: EnrichedBaire1) -> DenseOpenSequence:
    """Level complements intersected with complements of the first k canonical
    rationals; still dense open, and the intersection point avoids every
    rational."""

    def set_at(k: int) -> OpenR2:
        comp = f.complement_of_Dk(k)
        if k == 0:
            return comp
        rats = [canonical_rational(j) for j in range(k)]
        return intersect_r2(
            [comp, finite_complement_r2(rats, label=f"first-{k}-rationals-complement")],
            label=f"{f.name}-forced-level-{k}")

    return DenseOpenSequence(set_at=set_at, label=f"{f.name}-forced-irrational")


def rational_discontinuity_search(f: EnrichedBaire1, budget: int = 4096):
    """Dovetailed hunt for a certified rational discontinuity.

    Interleaves the canonical rational enumeration against growing witness
    budgets; returns (q, precision, records) for the first certificate found,
    or None when the budget runs out.  None is absence-so-far, never a proof
    that no discontinuity exists.
    """
    steps = 0
    t = 0
    while steps < budget:
        for i in range(t + 1):
            if steps >= budget:
                break
            steps += 1
            q = canonical_rational(i)
            m = f.osc_positive_witness(q, t - i)
            if m is not None:
                return q, m, [certs.osc_bound_record(q, m)]
        t += 1
    return None


def volterra_from_baire(f: EnrichedBaire1, baire: BaireOracle,
                        mode: str = "dovetail", depth: int = 16) -> VolterraAnswer:
    """Split a function into a rational discontinuity or an irrational
    continuity point, powered by a category realiser.

    force_irrational always takes the second branch: the realiser absorbs the
    countably many extra "avoid this rational" constraints for free.  dovetail
    interleaves the discontinuity search with that construction and returns
    whichever certifies first (the search moves first).
    """
    if mode not in ("dovetail", "force_irrational"):
        raise ValueError(f"unknown mode {mode!r}")
    seq = forced_irrational_sequence(f)

    if mode == "dovetail":
        point: Optional[BairePoint] = None
        for t in range(depth):
            for i in range(t + 1):
                q = canonical_rational(i)
                m = f.osc_positive_witness(q, t - i)
                if m is not None:
                    return RationalDiscontinuity(q=q, precision=m,
                                                 records=[certs.osc_bound_record(q, m)])
            if point is None:
                point = baire(seq)
            point.stage(t)
    else:
        point = baire(seq)

    assert point is not None
    stage_records = [certs.stage_record(s) for s in point.stages(depth)]
    sep_records = [_rational_separation(point, n) for n in range(depth)]
    tagged = TaggedPoint(
        value=point.value,
        tag=ApartFromRationals(lambda n: _rational_separation(point, n)),
        records=stage_records + sep_records,
        baire=point)
    return IrrationalContinuity(point=tagged, records=tagged.records)


def continuity_from_volterra(f: EnrichedBaire1,
                             volterra: Callable[[EnrichedBaire1], VolterraAnswer],
                             search_budget: int = 4096) -> TaggedPoint:
    """A continuity point from a Volterra splitter.

    Searches the canonical rationals with the instance's oscillation-zero
    decision hook; the first zero is a rational continuity point.  When the
    instance certifies that no rational continuity point exists, the splitter
    is called and must return its irrational-continuity branch (a rational
    discontinuity, though valid for the splitter itself, cannot witness a
    continuity point).
    """
    if f.osc_zero_decision is None:
        raise NeedsOscZeroDecision(f"{f.name} has no oscillation-zero hook")

    if f.has_rational_continuity_point is False:
        answer = volterra(f)
        if isinstance(answer, IrrationalContinuity):
            return answer.point
        raise CertificateFailure(
            "splitter returned a rational discontinuity, which cannot serve "
            "as a continuity point")

    for i in range(search_budget):
        q = canonical_rational(i)
        if f.osc_zero_decision(q):
            return TaggedPoint(value=from_rational(q), tag=RationalLiteral(q),
                               records=[certs.osc_zero_record(q)])

    if f.has_rational_continuity_point:
        raise BudgetExhausted(
            f"instance promises a rational continuity point but none of the "
            f"first {search_budget} canonical rationals qualified",
            steps=search_budget)
    raise NeedsOscZeroDecision(
        "search exhausted and the instance does not rule out rational "
        "continuity points")


def pair_sequence(f: EnrichedBaire1, g: EnrichedBaire1) -> DenseOpenSequence:
    def set_at(n: int) -> OpenR2:
        return intersect_r2([f.complement_of_Dk(n), g.complement_of_Dk(n)],
                            label=f"{f.name}&{g.name}-level-{n}")

    return DenseOpenSequence(set_at=set_at, label=f"pair({f.name},{g.name})")


def pair_reduction(f: EnrichedBaire1, g: EnrichedBaire1, baire: BaireOracle,
                   depth: int = 12) -> TaggedPoint:
    """A common continuity point of two functions: intersect the level
    complements (least witness of the two) and run the category realiser."""
    seq = pair_sequence(f, g)
    point = baire(seq)
    records = [certs.stage_record(s) for s in point.stages(depth)]
    return TaggedPoint(value=point.value, tag=None, records=records, baire=point)


def volterra_from_pair(f: EnrichedBaire1,
                       pair_oracle: Callable[[EnrichedBaire1, EnrichedBaire1], TaggedPoint],
                       budget: int = 4096) -> VolterraAnswer:
    """Volterra splitting from a both-continuous-or-both-discontinuous oracle.

    Pair ``f`` with the ruler function, which is discontinuous at every
    rational and continuous everywhere else; the oracle's tag then decides the
    branch, and a rational answer must re-certify positive oscillation of
    ``f`` there.
    """
    result = pair_oracle(f, thomae())
    if result.tag is None:
        raise CertificateFailure("pair oracle must declare rationality of its output")
    if isinstance(result.tag, RationalLiteral):
        q = result.tag.q
        m = f.osc_positive_witness(q, budget)
        if m is None:
            raise CertificateFailure(
                f"no positive-oscillation certificate for {f.name} at {q}")
        return RationalDiscontinuity(q=q, precision=m,
                                     records=[certs.osc_bound_record(q, m)])
    spot = [result.tag.separation_at(n) for n in range(8)]
    return IrrationalContinuity(point=result, records=list(result.records) + spot)


def tagged_pair_oracle(baire: BaireOracle, depth: int = 12
                       ) -> Callable[[EnrichedBaire1, EnrichedBaire1], TaggedPoint]:
    """A conforming two-function oracle that always declares its tag.

    Intersects the pair's level complements with the complements of the first
    k canonical rationals, so the produced common continuity point is
    certifiably apart from every rational.
    """

    def oracle(f: EnrichedBaire1, g: EnrichedBaire1) -> TaggedPoint:
        base = pair_sequence(f, g)

        def set_at(k: int) -> OpenR2:
            if k == 0:
                return base.set_at(0)
            rats = [canonical_rational(j) for j in range(k)]
            return intersect_r2([base.set_at(k), finite_complement_r2(rats)],
                                label=f"{base.label}-forced-{k}")

        point = baire(DenseOpenSequence(set_at=set_at, label=f"{base.label}-forced"))
        records = [certs.stage_record(s) for s in point.stages(depth)]
        records += [_rational_separation(point, n) for n in range(depth)]
        return TaggedPoint(
            value=point.value,
            tag=ApartFromRationals(lambda n: _rational_separation(point, n)),
            records=records, baire=point)

    return oracle


def functions_square_sequence(f_at: Callable[[int], EnrichedBaire1]) -> DenseOpenSequence:
    memo: dict[int, EnrichedBaire1] = {}

    def fn(n: int) -> EnrichedBaire1:
        if n not in memo:
            memo[n] = f_at(n)
        return memo[n]

    def set_at(m: int) -> OpenR2:
        parts = [fn(n).complement_of_Dk(k)
                 for n in range(m + 1) for k in range(m + 1)]
        return intersect_r2(parts, label=f"sequence-level-{m}")

    return DenseOpenSequence(set_at=set_at, label="function-sequence")


def common_continuity_point(f_at: Callable[[int], EnrichedBaire1], baire: BaireOracle,
                            depth: int = 12) -> TaggedPoint:
    """A simultaneous continuity point of countably many functions.

    The m-th fed set intersects every level-k complement of every function n
    with k, n <= m; the realiser's point is then continuous for each function,
    certified per stage."""
    seq = functions_square_sequence(f_at)
    point = baire(seq)
    records = [certs.stage_record(s) for s in point.stages(depth)]
    return TaggedPoint(value=point.value, tag=None, records=records, baire=point)


def _certify_outside_all(seq: ClosedNowhereDenseSeq, point: TaggedPoint,
                         depth: int, probe_slack: int) -> list:
    """Re-certify, per level n < depth, that the point lies in the complement
    of the n-th closed set; raises CertificateFailure when no positive ball
    can be found."""
    records: list = []
    literal = point.tag.q if isinstance(point.tag, RationalLiteral) else None
    if literal is not None and seq.membership_level is not None:
        level = seq.membership_level(literal)
        if level is not None:
            raise CertificateFailure(
                f"point {literal} lies in closed set {level}")
        records.append(certs.level_record(literal, None))
    for n in range(depth):
        witness = seq.complement_r2(n)
        if literal is not None:
            hit = None
            for p in range(probe_slack):
                r = witness.witness(literal, p)
                if r > 0:
                    hit = certs.ball_record(n, literal, p, r, exact=True)
                    break
            if hit is None:
                raise CertificateFailure(
                    f"no positive complement witness for {literal} at level {n}")
            records.append(hit)
            continue
        hit = None
        for p in range(n + 2, n + 2 + probe_slack):
            probe = point.value.approx(p)
            r = witness.witness(probe, p)
            if r > Fraction(1, 2 ** p):
                hit = certs.ball_record(n, probe, p, r, exact=False)
                break
        if hit is None:
            raise CertificateFailure(
                f"cannot re-certify membership in complement {n} within "
                f"{probe_slack} probe refinements")
        records.append(hit)
    return records


def baire_from_continuity(seq: ClosedNowhereDenseSeq,
                          continuity_oracle: Callable[[EnrichedBaire1], TaggedPoint],
                          depth: int = 16, probe_slack: int = 64) -> CertifiedReal:
    """A category-realiser answer from a continuity-point finder.

    Builds the least-level indicator of the closed sets (its own oscillation,
    so the enrichment is available), asks the oracle for a continuity point,
    and independently re-certifies that the point avoids every queried closed
    set; a non-conforming oracle fails certification."""
    f = make_h(seq)
    point = continuity_oracle(f)
    records = _certify_outside_all(seq, point, depth, probe_slack)
    return CertifiedReal(value=point.value, records=list(point.records) + records)


def baire_from_minmax(seq: ClosedNowhereDenseSeq,
                      minmax_oracle: Callable[[EnrichedBaire1], tuple],
                      depth: int = 16, probe_slack: int = 64) -> CertifiedReal:
    """A category-realiser answer from a min-max-window oracle.

    On the least-level indicator, a valid (a, b) answer forces value 0 at
    ``a`` (a positive value leaves only finitely many points in the window),
    so ``a`` must avoid every closed set; that is re-certified here and the
    point is returned as the realiser output."""
    f = make_h(seq)
    a_point, _b_point = minmax_oracle(f)
    records = _certify_outside_all(seq, a_point, depth, probe_slack)
    return CertifiedReal(value=a_point.value, records=list(a_point.records) + records)


@dataclass(frozen=True)
class CountableDenseSet:
    """An enumerated dense set with an injective height: pairs (d_i, Y(d_i))."""

    element_at: Callable[[int], Fraction]
    height_of: Callable[[int], int]
    label: str = ""


@dataclass
class DenseDiscontinuity:
    index: int
    element: Fraction
    precision: int
    records: list = field(default_factory=list)


@dataclass
class DenseAvoidingContinuity:
    point: TaggedPoint
    records: list = field(default_factory=list)


DenseAnswer = Union[DenseDiscontinuity, DenseAvoidingContinuity]


def dense_excluded_at(dense: CountableDenseSet, n: int,
                      scan_bound: Optional[Callable[[int], int]] = None
                      ) -> list[tuple[int, Fraction]]:
    scan = scan_bound or (lambda s: s + 1)
    return [(i, dense.element_at(i)) for i in range(scan(n))
            if dense.height_of(i) <= n]


def dense_exclusion_sequence(dense: CountableDenseSet, f: EnrichedBaire1,
                             scan_bound: Optional[Callable[[int], int]] = None
                             ) -> DenseOpenSequence:
    def set_at(n: int) -> OpenR2:
        pts = [q for _i, q in dense_excluded_at(dense, n, scan_bound)]
        return intersect_r2(
            [f.complement_of_Dk(n),
             finite_complement_r2(pts, label=f"{dense.label}-height-le-{n}-complement")],
            label=f"{f.name}-vs-{dense.label}-level-{n}")

    return DenseOpenSequence(set_at=set_at, label=f"{f.name}-vs-{dense.label}")


def countable_dense_volterra(dense: CountableDenseSet, f: EnrichedBaire1,
                             baire: BaireOracle, mode: str = "avoidance",
                             depth: int = 16,
                             scan_bound: Optional[Callable[[int], int]] = None) -> DenseAnswer:
    """Split against an arbitrary countable dense set.

    Either a certified discontinuity at some enumerated element, or a
    continuity point apart from every element excluded at the queried stages.
    Stage n excludes the height-<= n elements found on the scanned enumeration
    prefix (prefix length n+1 by default, exact when heights are enumeration
    ranks); duplicate heights on the scanned prefix raise InjectivityViolation.
    """
    if mode not in ("avoidance", "dovetail"):
        raise ValueError(f"unknown mode {mode!r}")
    scan = scan_bound or (lambda n: n + 1)

    max_scan = max(scan(n) for n in range(depth))
    heights = [dense.height_of(i) for i in range(max_scan)]
    if len(set(heights)) != len(heights):
        raise InjectivityViolation(
            f"duplicate heights on the first {max_scan} elements of {dense.label}")

    def excluded(n: int) -> list[tuple[int, Fraction]]:
        return dense_excluded_at(dense, n, scan_bound)

    seq = dense_exclusion_sequence(dense, f, scan_bound)

    if mode == "dovetail":
        for t in range(depth):
            for i in range(t + 1):
                d = dense.element_at(i)
                m = f.osc_positive_witness(d, t - i)
                if m is not None:
                    return DenseDiscontinuity(index=i, element=d, precision=m,
                                              records=[certs.osc_bound_record(d, m)])

    point = baire(seq)
    records = [certs.stage_record(s) for s in point.stages(depth)]
    recorded: set[int] = set()
    for n in range(depth):
        for i, q in excluded(n):
            if i in recorded:
                continue
            recorded.add(i)
            sep = point.separation_from(q, n)
            m = _separation_precision(sep)
            records.append(certs.separation_record(
                target=q, radius=sep, precision=m,
                value_approx=point.value.approx(m),
                stage=n, target_index=i))
    tagged = TaggedPoint(value=point.value, tag=None, records=records, baire=point)
    return DenseAvoidingContinuity(point=tagged, records=records)


def continuity_point_from_witnesses(witness_at: Callable[[int], OpenR2],
                                    baire: BaireOracle, depth: int = 16) -> TaggedPoint:
    """Continuity point from a level-complement witness producer: the witness
    pipeline's realiser leg."""
    seq = DenseOpenSequence(set_at=witness_at, label="witness-producer")
    point = baire(seq)
    records = [certs.stage_record(s) for s in point.stages(depth)]
    return TaggedPoint(value=point.value, tag=None, records=records, baire=point)


def delta_exact_distance(o: OpenR2) -> OpenR3:
    """The radius-to-distance upgrade, available only as an oracle hook.

    The shipped stub serves exactly the witnesses that already are exact
    distances (finite-set complements and structured instances); everything
    else raises DeltaHookUnavailable.
    """
    if not o.exact_distance:
        raise DeltaHookUnavailable(
            f"witness {o.label or '?'} is not exact-distance-backed")
    return OpenR3(lambda x, m: o.witness(x, 0), label=f"distance({o.label})")


def recover_indicator_support(f: EnrichedBaire1, bound: int, precision_index: int,
                              level: int = 0, stage_budget: int = 4096) -> EnumeratedClosedSet:
    """Finiteness-realiser recovery: enumerate the support of a finite
    indicator given only its enrichment.

    Takes the level complement witness, upgrades it to exact distances
    (oracle hook), converts to an interval enumeration, and locates the
    complement's points.
    """
    witnesses = f.complement_of_Dk(level)
    r3 = delta_exact_distance(witnesses)
    r4 = r3_to_r4(r3, label=f"{f.name}-level-{level}-complement-intervals")
    return enumerate_finite_closed(r4, bound, precision_index, stage_budget=stage_budget)


def strong_cantor_records(result, a, slice_depth: int = 20,
                          stage_depth: int = 32) -> list:
    """Certificate records for a strong-Cantor result: the construction trace
    plus one separation per element of the depth-``slice_depth`` slice."""
    records: list = []
    targets = a.slice_at(slice_depth)
    if result.route == "via_baire":
        point = result.baire
        records.extend(certs.stage_record(s) for s in point.stages(stage_depth))
        for q in targets:
            # every element of the slice is excluded by the slice_depth stage ball
            sep = point.separation_from(q, slice_depth)
            m = _separation_precision(sep)
            records.append(certs.separation_record(
                target=q, radius=sep, precision=m,
                value_approx=point.value.approx(m), stage=slice_depth))
        return records
    avoid = result.avoidance
    entry = result.enumeration
    wanted = set(targets)
    index_of: dict[Fraction, int] = {}
    for i in range(4 * (len(targets) + 4)):
        if len(index_of) == len(wanted):
            break
        q = entry(i)
        if q in wanted and q not in index_of:
            index_of[q] = i
    missing = wanted - set(index_of)
    if missing:
        raise CertificateFailure(
            f"enumeration never produced {sorted(missing)[:3]} from slice {slice_depth}")
    records.extend(certs.avoid_stage_record(avoid.stage(n))
                   for n in range(max(stage_depth, max(index_of.values(), default=0) + 1)))
    for q in targets:
        idx = index_of[q]
        s = avoid.stage(idx)
        m = s.separation_precision
        records.append(certs.separation_record(
            target=q, radius=s.separation, precision=m,
            value_approx=avoid.value.approx(m), stage=idx, target_index=idx))
    return records


# ---------------------------------------------------------------------------
# Non-conforming oracle stubs, used to exercise certificate rejection.

def stub_constant_continuity_oracle(q: Fraction) -> Callable[[EnrichedBaire1], TaggedPoint]:
    """A "continuity point finder" that always answers the rational q."""

    def oracle(_f: EnrichedBaire1) -> TaggedPoint:
        return TaggedPoint(value=from_rational(q), tag=RationalLiteral(q))

    return oracle


def stub_constant_pair_oracle(q: Fraction) -> Callable[[EnrichedBaire1, EnrichedBaire1], TaggedPoint]:
    """A "common continuity/discontinuity point" oracle answering the rational q."""

    def oracle(_f: EnrichedBaire1, _g: EnrichedBaire1) -> TaggedPoint:
        return TaggedPoint(value=from_rational(q), tag=RationalLiteral(q))

    return oracle


def stub_constant_minmax_oracle(q: Fraction) -> Callable[[EnrichedBaire1], tuple]:
    """A min-max-window oracle answering (q, q)."""

    def oracle(_f: EnrichedBaire1) -> tuple:
        pt = TaggedPoint(value=from_rational(q), tag=RationalLiteral(q))
        return pt, pt

    return oracle


def honest_minmax_oracle(baire: BaireOracle,
                         depth: int = 16) -> Callable[[EnrichedBaire1], tuple]:
    """A conforming min-max-window oracle: a continuity point y has the whole
    set of small values inside its window, so (y, y) is a valid answer."""

    def oracle(f: EnrichedBaire1) -> tuple:
        pt = continuity_point_from_baire(f, baire, depth=depth)
        return pt, pt

    return oracle
