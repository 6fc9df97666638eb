import random
from fractions import Fraction as F

import pytest

from bairekit.errors import BudgetExhausted
from bairekit.exact import from_rational
from bairekit.gallery import dyadic_closed_seq, finite_indicator
from bairekit.opensets import (DenseOpenSequence, OpenR3, OpenR4,
                               RationalInterval, finite_complement_r2, r4_to_r2,
                               r3_to_r4)
from bairekit.realisers import (HeightCountableSet, bct_realiser, cantor_avoid,
                                complement_sequence, enumerate_finite_closed,
                                merged_enumeration, omega_fin,
                                rational_complement_sequence,
                                strong_cantor_realiser)
from bairekit.reductions import delta_exact_distance
from bairekit.sternbrocot import canonical_rational, fractions_up_to_denominator


def r4(*pairs):
    return OpenR4.from_intervals([RationalInterval(F(a), F(b)) for a, b in pairs])


def check_trace_invariants(point, depth):
    stages = point.stages(depth)
    for s in stages:
        assert s.hi - s.lo <= F(1, 2 ** s.index)
        assert 0 < s.radius <= s.witness_radius / 2
    for a, b in zip(stages, stages[1:]):
        assert a.lo <= b.lo and b.hi <= a.hi
    mid = (stages[-1].lo + stages[-1].hi) / 2
    for s in stages:
        assert abs(mid - s.center) < s.witness_radius


def test_bct_avoids_all_rationals():
    point = bct_realiser(rational_complement_sequence(), depth=32)
    check_trace_invariants(point, 32)
    for n in range(32):
        sep = point.separation_from(canonical_rational(n), n)
        assert sep > 0
        m = 0
        while F(4, 2 ** m) >= sep:
            m += 1
        assert abs(point.value.approx(m) - canonical_rational(n)) > F(2, 2 ** m)


def test_bct_unconstrained_halves():
    seq = DenseOpenSequence(set_at=lambda n: r4_to_r2(r4(("0", "1"))))
    point = bct_realiser(seq, depth=16)
    check_trace_invariants(point, 16)


def test_bct_on_dyadic_complements():
    closed = dyadic_closed_seq()
    point = bct_realiser(DenseOpenSequence(set_at=closed.complement_r2), depth=32)
    check_trace_invariants(point, 32)
    # the value stays apart from every dyadic listed at the queried stages
    for n in range(8):
        scale = 2 ** (n + 1)
        for j in range(2 ** n):
            sep = point.separation_from(F(2 * j + 1, scale), n)
            assert sep > 0


def test_bct_budget_exhaustion_on_non_dense():
    sets = [r4_to_r2(r4(("1/4", "3/4"))), r4_to_r2(r4(("7/8", "1")))]
    seq = DenseOpenSequence(set_at=lambda n: sets[n % 2])
    with pytest.raises(BudgetExhausted):
        bct_realiser(seq, depth=4, budget=500)


def test_bct_value_extends_past_requested_depth():
    point = bct_realiser(rational_complement_sequence(), depth=4)
    # precision 10 forces stage 11 lazily
    a = point.value.approx(10)
    assert abs(a - point.value.approx(20)) <= F(1, 2 ** 10)


def test_avoid_all_rationals_sequence():
    avoid = cantor_avoid(lambda n: from_rational(canonical_rational(n)))
    for n in range(100):
        s = avoid.stage(n)
        assert s.separation > 0
        m = s.separation_precision
        gap = abs(avoid.value.approx(m) - canonical_rational(n))
        assert gap > F(2, 2 ** m)


def test_avoid_constant_sequence():
    avoid = cantor_avoid(lambda n: from_rational(F(1, 2)))
    v = avoid.value.approx(10)
    assert v > F(1, 2) + F(1, 8) or v < F(1, 2) - F(1, 8)


def test_avoid_structural_invariants_any_input():
    rng = random.Random(9)
    entries = [from_rational(F(rng.randrange(0, 65), 64)) for _ in range(40)]
    avoid = cantor_avoid(lambda n: entries[n % len(entries)])
    stages = avoid.stages(40)
    for s in stages:
        assert s.hi - s.lo == F(1, 3 ** (s.index + 1))
    for a, b in zip(stages, stages[1:]):
        assert a.lo <= b.lo and b.hi <= a.hi


def test_omega_fin():
    got = omega_fin([F(1, 3), F(2, 3)])
    assert [g.exact_rational for g in got] == [F(1, 3), F(2, 3)]
    assert omega_fin([]) == []
    got = omega_fin([F(1, 2), F(2, 4)])
    assert [g.exact_rational for g in got] == [F(1, 2)]


def height_denominator():
    return HeightCountableSet(
        slice_at=lambda n: fractions_up_to_denominator(n) if n >= 1 else [],
        label="height-denominator")


def test_merged_enumeration_collects_slices():
    entry = merged_enumeration(height_denominator())
    seen = set(entry(i) for i in range(140))
    assert set(fractions_up_to_denominator(10)) <= seen


def test_merged_enumeration_pads_on_finite_sets():
    a = HeightCountableSet(slice_at=lambda n: [F(1, 2)] if n >= 1 else [])
    entry = merged_enumeration(a)
    assert entry(0) == F(1, 2)
    assert entry(5) == F(1, 2)
    empty = HeightCountableSet(slice_at=lambda n: [])
    assert merged_enumeration(empty)(3) == F(0)


@pytest.mark.parametrize("route", ["via_baire", "via_enumeration"])
def test_strong_cantor_routes(route):
    a = height_denominator()
    result = strong_cantor_realiser(a, route=route, depth=32)
    targets = a.slice_at(20)
    assert len(targets) > 100
    if route == "via_baire":
        for q in targets:
            assert result.baire.separation_from(q, 20) > 0
    else:
        entry = result.enumeration
        index_of = {}
        i = 0
        while len(index_of) < len(targets):
            q = entry(i)
            if q in set(targets) and q not in index_of:
                index_of[q] = i
            i += 1
        for q in targets:
            s = result.avoidance.stage(index_of[q])
            assert s.separation > 0
            m = s.separation_precision
            assert abs(result.avoidance.value.approx(m) - q) > F(2, 2 ** m)


def test_strong_cantor_empty_slices():
    a = HeightCountableSet(slice_at=lambda n: [])
    result = strong_cantor_realiser(a, route="via_baire", depth=8)
    assert 0 <= result.value.approx(8) <= 1


def test_enumerate_closed_three_points():
    enum = enumerate_finite_closed(r4(("0", "1/2"), ("1/2", "1")), bound=3,
                                   precision_index=10)
    got = [p.exact_rational for p in enum.points]
    assert got == [F(0), F(1, 2), F(1)]


def test_enumerate_closed_boundary_convention():
    enum = enumerate_finite_closed(r4(("0", "1")), bound=2, precision_index=10)
    assert [p.exact_rational for p in enum.points] == [F(0), F(1)]
    with pytest.raises(BudgetExhausted):
        enumerate_finite_closed(r4(("0", "1")), bound=0, precision_index=10)


def test_enumerate_closed_rejects_fat_complement():
    with pytest.raises(BudgetExhausted):
        enumerate_finite_closed(r4(("0", "1/3")), bound=5, precision_index=6)


def test_enumerate_closed_from_distance_stream():
    witness = finite_complement_r2([F(1, 3), F(2, 3)])
    stream = r3_to_r4(delta_exact_distance(witness))
    enum = enumerate_finite_closed(stream, bound=2, precision_index=8)
    assert len(enum.points) == 2
    tol = F(1, 2 ** 8)
    approxes = sorted(p.approx(8) for p in enum.points)
    assert abs(approxes[0] - F(1, 3)) <= tol
    assert abs(approxes[1] - F(2, 3)) <= tol


def test_complement_sequence_slices():
    seq = complement_sequence(height_denominator())
    assert seq.set_at(2).witness(F(1, 2), 0) == 0
    assert seq.set_at(2).witness(F(1, 3), 0) > 0
