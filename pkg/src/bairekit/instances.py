"""Instance files and named generators.

A set instance is one of

    {"kind": "r4", "intervals": [["1/4", "3/4"], ...]}
    {"kind": "complement-of-finite", "points": ["1/2", ...]}
    {"kind": "generator", "name": ..., "params": {...}}

Sequence instances are {"kind": "sequence", "sets": [...]} (arrays cycle past
their length) or a named generator; function, pair, function-sequence,
countable-dense, height-countable, and finite-set instances follow the same
pattern.  Generator names shipped: "thomae", "h-dyadic", "finite-indicator",
"avoid-all-rationals", "height-denominator".
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Optional

from .errors import MalformedInstance
from .exact import parse_rational
from .gallery import (ClosedNowhereDenseSeq, EnrichedBaire1, dyadic_closed_seq,
                      finite_indicator, make_h, thomae)
from .opensets import (DenseOpenSequence, OpenR2, OpenR4, RationalInterval,
                       finite_complement_r2, r4_to_r2)
from .realisers import (HeightCountableSet, complement_sequence,
                        rational_complement_sequence)
from .reductions import CountableDenseSet
from .sternbrocot import canonical_rational, fractions_up_to_denominator


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise MalformedInstance(message)


def _parse_points(raw) -> list[Fraction]:
    _require(isinstance(raw, list), "points must be a list of rational strings")
    try:
        return [parse_rational(p) for p in raw]
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedInstance(f"bad rational in points: {exc}") from exc


def parse_r4(spec: dict) -> OpenR4:
    _require(spec.get("kind") == "r4", "expected an r4 instance")
    raw = spec.get("intervals")
    _require(isinstance(raw, list), "r4 needs an intervals list")
    ivs = []
    for pair in raw:
        _require(isinstance(pair, list) and len(pair) == 2,
                 "each interval is a [lo, hi] pair")
        try:
            lo, hi = parse_rational(pair[0]), parse_rational(pair[1])
            ivs.append(RationalInterval(lo, hi))
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedInstance(f"bad interval {pair}: {exc}") from exc
    return OpenR4.from_intervals(ivs, label="r4-instance")


def parse_set_r2(spec: dict) -> OpenR2:
    kind = spec.get("kind")
    if kind == "r4":
        return r4_to_r2(parse_r4(spec))
    if kind == "complement-of-finite":
        return finite_complement_r2(_parse_points(spec.get("points")),
                                    label="complement-of-finite")
    raise MalformedInstance(f"unknown set kind {kind!r}")


def _dyadic_dense() -> CountableDenseSet:
    # level order: 1/2, 1/4, 3/4, 1/8, 3/8, 5/8, 7/8, ...
    def element_at(i: int) -> Fraction:
        level = 1
        base = 0
        while i >= base + 2 ** (level - 1):
            base += 2 ** (level - 1)
            level += 1
        j = i - base
        return Fraction(2 * j + 1, 2 ** level)

    return CountableDenseSet(element_at=element_at, height_of=lambda i: i,
                             label="dyadics")


def _canonical_dense() -> CountableDenseSet:
    return CountableDenseSet(element_at=canonical_rational, height_of=lambda i: i,
                             label="canonical-rationals")


def parse_function(spec: dict) -> EnrichedBaire1:
    kind = spec.get("kind", "function")
    _require(kind in ("function", "generator"), f"unknown function kind {kind!r}")
    name = spec.get("name")
    params = spec.get("params", {})
    if name == "thomae":
        return thomae()
    if name == "h-dyadic":
        return make_h(dyadic_closed_seq())
    if name == "finite-indicator":
        return finite_indicator(_parse_points(params.get("points", [])))
    raise MalformedInstance(f"unknown function generator {name!r}")


def parse_closed_seq(spec: dict) -> ClosedNowhereDenseSeq:
    name = spec.get("name")
    if spec.get("kind") == "generator" and name == "h-dyadic":
        return dyadic_closed_seq()
    if spec.get("kind") == "closed-seq":
        complements = spec.get("complements")
        _require(isinstance(complements, list) and complements,
                 "closed-seq needs a non-empty complements list")
        r4s = [parse_r4(c) for c in complements]
        points = spec.get("points")
        level_hook: Optional[Callable[[Fraction], Optional[int]]] = None
        if points is not None:
            _require(isinstance(points, list), "points must be a list of lists")
            slices = [set(_parse_points(p)) for p in points]

            def level_hook(q: Fraction) -> Optional[int]:
                for n, s in enumerate(slices):
                    if q in s:
                        return n
                return None

        return ClosedNowhereDenseSeq(
            complement_at=lambda n: r4s[n % len(r4s)],
            membership_level=level_hook,
            label="closed-seq-instance")
    raise MalformedInstance(f"unknown closed-sequence instance {name!r}")


def parse_sequence(spec: dict) -> DenseOpenSequence:
    kind = spec.get("kind")
    if kind == "generator":
        name = spec.get("name")
        if name == "avoid-all-rationals":
            return rational_complement_sequence()
        if name == "h-dyadic":
            seq = dyadic_closed_seq()
            return DenseOpenSequence(set_at=seq.complement_r2,
                                     label="dyadic-complements")
        if name == "thomae":
            return DenseOpenSequence(set_at=thomae().complement_of_Dk,
                                     label="thomae-level-complements")
        if name == "height-denominator":
            return complement_sequence(height_denominator())
        raise MalformedInstance(f"unknown sequence generator {name!r}")
    if kind == "sequence":
        sets = spec.get("sets")
        _require(isinstance(sets, list) and sets, "sequence needs a non-empty sets list")
        members = [parse_set_r2(s) for s in sets]
        return DenseOpenSequence(set_at=lambda n: members[n % len(members)],
                                 label="sequence-instance")
    raise MalformedInstance(f"unknown sequence kind {kind!r}")


def height_denominator() -> HeightCountableSet:
    """Slice n = all canonical fractions of [0,1] with denominator <= n."""
    memo: dict[int, list[Fraction]] = {}

    def slice_at(n: int) -> list[Fraction]:
        if n not in memo:
            memo[n] = fractions_up_to_denominator(n) if n >= 1 else []
        return memo[n]

    return HeightCountableSet(slice_at=slice_at, label="height-denominator")


def parse_height_set(spec: dict) -> HeightCountableSet:
    kind = spec.get("kind")
    if kind == "generator" and spec.get("name") == "height-denominator":
        return height_denominator()
    if kind == "height-countable":
        raw = spec.get("slices")
        _require(isinstance(raw, list) and raw, "height-countable needs slices")
        slices = [sorted(set(_parse_points(s))) for s in raw]
        for a, b in zip(slices, slices[1:]):
            _require(set(a) <= set(b), "slices must be nested")

        def slice_at(n: int) -> list[Fraction]:
            return slices[min(n, len(slices) - 1)]

        return HeightCountableSet(slice_at=slice_at, label="height-instance")
    raise MalformedInstance("unknown height-countable instance")


def parse_dense_set(name: str) -> CountableDenseSet:
    if name == "dyadics":
        return _dyadic_dense()
    if name == "canonical-rationals":
        return _canonical_dense()
    raise MalformedInstance(f"unknown dense set {name!r}")


def parse_finite_set(spec: dict) -> list[Fraction]:
    _require(spec.get("kind") == "finite-set", "expected a finite-set instance")
    return _parse_points(spec.get("points", []))
