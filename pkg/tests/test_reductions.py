from dataclasses import replace
from fractions import Fraction as F

import pytest

from bairekit.errors import (BudgetExhausted, CertificateFailure,
                             DeltaHookUnavailable, InjectivityViolation,
                             NeedsOscZeroDecision)
from bairekit.exact import from_rational
from bairekit.gallery import (dyadic_closed_seq, finite_indicator, make_h,
                              thomae, thomae_Dk)
from bairekit.opensets import r4_to_r2
from bairekit.realisers import bct_realiser
from bairekit.reductions import (ApartFromRationals, CountableDenseSet,
                                 DenseAvoidingContinuity, DenseDiscontinuity,
                                 IrrationalContinuity, RationalDiscontinuity,
                                 RationalLiteral, TaggedPoint,
                                 baire_from_continuity, baire_from_minmax,
                                 builtin_baire_oracle, common_continuity_point,
                                 continuity_from_volterra,
                                 continuity_point_from_baire,
                                 continuity_point_from_witnesses,
                                 countable_dense_volterra, delta_exact_distance,
                                 honest_minmax_oracle, pair_reduction,
                                 rational_discontinuity_search,
                                 recover_indicator_support,
                                 stub_constant_continuity_oracle,
                                 stub_constant_minmax_oracle,
                                 stub_constant_pair_oracle, volterra_from_baire,
                                 volterra_from_pair)
from bairekit.sternbrocot import canonical_rational

ORACLE = builtin_baire_oracle(depth=16)


def dyadic_dense():
    def element_at(i):
        level, base = 1, 0
        while i >= base + 2 ** (level - 1):
            base += 2 ** (level - 1)
            level += 1
        return F(2 * (i - base) + 1, 2 ** level)

    return CountableDenseSet(element_at=element_at, height_of=lambda i: i,
                             label="dyadics")


def test_continuity_point_thomae_avoids_level_sets():
    pt = continuity_point_from_baire(thomae(), ORACLE, depth=16)
    assert pt.baire is not None
    for k in (1, 2, 4):
        for q in thomae_Dk(k):
            assert pt.baire.separation_from(q, k) > 0
    assert len(pt.records) == 16


def test_continuity_point_indicator():
    pt = continuity_point_from_baire(finite_indicator([F(1, 3), F(2, 3)]), ORACLE, depth=8)
    for q in (F(1, 3), F(2, 3)):
        assert pt.baire.separation_from(q, 3) > 0


def test_continuity_point_empty_indicator_unconstrained():
    pt = continuity_point_from_baire(finite_indicator([]), ORACLE, depth=8)
    stages = pt.baire.stages(8)
    assert all(s.hi - s.lo <= F(1, 2 ** s.index) for s in stages)


def test_rational_discontinuity_search_values():
    q, m, recs = rational_discontinuity_search(thomae(), budget=64)
    assert (q, m) == (F(0), 0)
    assert rational_discontinuity_search(finite_indicator([]), budget=10_000) is None
    q, m, _ = rational_discontinuity_search(finite_indicator([F(1, 3)]), budget=256)
    assert (q, m) == (F(1, 3), 0)


def test_volterra_dovetail_prefers_search():
    ans = volterra_from_baire(thomae(), ORACLE, mode="dovetail")
    assert isinstance(ans, RationalDiscontinuity)
    assert ans.q == 0 and ans.precision == 0


def test_volterra_force_irrational_on_empty_indicator():
    ans = volterra_from_baire(finite_indicator([]), ORACLE, mode="force_irrational", depth=16)
    assert isinstance(ans, IrrationalContinuity)
    tag = ans.point.tag
    assert isinstance(tag, ApartFromRationals)
    for n in range(32):
        rec = tag.separation_at(n)
        assert rec["radius"] > 0
        gap = abs(rec["value_approx"] - canonical_rational(n))
        assert gap > F(2, 2 ** rec["precision"])


def test_volterra_force_irrational_on_thomae():
    ans = volterra_from_baire(thomae(), ORACLE, mode="force_irrational", depth=12)
    assert isinstance(ans, IrrationalContinuity)
    for n in range(12):
        rec = ans.point.tag.separation_at(n)
        assert rec["radius"] > 0


def test_volterra_dovetail_empty_indicator_falls_through():
    ans = volterra_from_baire(finite_indicator([]), ORACLE, mode="dovetail", depth=12)
    assert isinstance(ans, IrrationalContinuity)


def test_continuity_from_volterra_rational_branch():
    pt = continuity_from_volterra(finite_indicator([F(1, 3)]),
                                  lambda f: volterra_from_baire(f, ORACLE, "force_irrational"))
    assert isinstance(pt.tag, RationalLiteral)
    assert pt.tag.q == 0


def test_continuity_from_volterra_irrational_branch():
    pt = continuity_from_volterra(thomae(),
                                  lambda f: volterra_from_baire(f, ORACLE, "force_irrational"))
    assert isinstance(pt.tag, ApartFromRationals)


def test_continuity_from_volterra_needs_hook():
    f = replace(finite_indicator([]), osc_zero_decision=None)
    with pytest.raises(NeedsOscZeroDecision):
        continuity_from_volterra(f, lambda g: volterra_from_baire(g, ORACLE, "dovetail"))


def test_continuity_from_volterra_rejects_useless_answer():
    with pytest.raises(CertificateFailure):
        continuity_from_volterra(thomae(),
                                 lambda f: volterra_from_baire(f, ORACLE, "dovetail"))


def test_pair_reduction_constraints():
    pt = pair_reduction(thomae(), finite_indicator([F(1, 3)]), ORACLE, depth=12)
    assert pt.baire.separation_from(F(1, 3), 1) > 0
    for q in thomae_Dk(2):
        assert pt.baire.separation_from(q, 2) > 0


def test_pair_reduction_idempotent_constraints():
    pt = pair_reduction(thomae(), thomae(), ORACLE, depth=8)
    for q in thomae_Dk(2):
        assert pt.baire.separation_from(q, 2) > 0


def test_volterra_from_pair_rational_branch():
    oracle = stub_constant_pair_oracle(F(1, 3))
    ans = volterra_from_pair(finite_indicator([F(1, 3)]), oracle)
    assert isinstance(ans, RationalDiscontinuity)
    assert ans.q == F(1, 3) and ans.precision == 0


def test_volterra_from_pair_irrational_branch():
    from bairekit.reductions import tagged_pair_oracle

    ans = volterra_from_pair(finite_indicator([]), tagged_pair_oracle(ORACLE, depth=10))
    assert isinstance(ans, IrrationalContinuity)


def test_volterra_from_pair_rejects_untagged_pair_reduction():
    def honest_but_untagged(f, g):
        return pair_reduction(f, g, ORACLE, depth=10)

    with pytest.raises(CertificateFailure):
        volterra_from_pair(finite_indicator([]), honest_but_untagged)


def test_volterra_from_pair_rejects_zero_oscillation():
    oracle = stub_constant_pair_oracle(F(1, 2))
    with pytest.raises(CertificateFailure):
        volterra_from_pair(finite_indicator([]), oracle)


def test_volterra_from_pair_requires_tag():
    def untagged(f, g):
        return TaggedPoint(value=from_rational(F(1, 7)), tag=None)

    with pytest.raises(CertificateFailure):
        volterra_from_pair(finite_indicator([]), untagged)


def test_common_continuity_point_dyadic_indicators():
    def f_at(n):
        scale = 2 ** (n + 1)
        return finite_indicator([F(2 * j + 1, scale) for j in range(2 ** n)])

    pt = common_continuity_point(f_at, ORACLE, depth=10)
    for n in range(4):
        scale = 2 ** (n + 1)
        for j in range(2 ** n):
            assert pt.baire.separation_from(F(2 * j + 1, scale), max(n, 1)) > 0


def test_common_continuity_point_constant_functions():
    pt = common_continuity_point(lambda n: finite_indicator([]), ORACLE, depth=8)
    assert len(pt.records) == 8


def test_baire_from_continuity_round_trip():
    closed = dyadic_closed_seq()
    result = baire_from_continuity(
        closed, lambda f: continuity_point_from_baire(f, ORACLE, depth=16), depth=16)
    balls = [r for r in result.records if r["kind"] == "ball-in-set"]
    assert len(balls) == 16
    for rec in balls:
        assert rec["radius"] > F(1, 2 ** rec["probe_precision"])


def test_baire_from_continuity_rejects_point_in_first_set():
    closed = dyadic_closed_seq()
    with pytest.raises(CertificateFailure):
        baire_from_continuity(closed, stub_constant_continuity_oracle(F(1, 2)), depth=4)


def test_baire_from_continuity_rejects_untagged_member():
    closed = dyadic_closed_seq()

    def sneaky(_f):
        return TaggedPoint(value=from_rational(F(1, 2)), tag=None)

    with pytest.raises(CertificateFailure):
        baire_from_continuity(closed, sneaky, depth=4)


def test_baire_from_continuity_accepts_full_complements():
    from bairekit.gallery import ClosedNowhereDenseSeq
    from bairekit.opensets import OpenR4, RationalInterval

    empty = ClosedNowhereDenseSeq(
        complement_at=lambda n: OpenR4.from_intervals(
            [RationalInterval(F(-1), F(2))]),
        membership_level=lambda q: None,
        label="empty-sets")
    result = baire_from_continuity(
        empty, lambda f: continuity_point_from_baire(f, ORACLE, depth=8), depth=8)
    assert result.records


def test_baire_from_minmax_honest_oracle():
    closed = dyadic_closed_seq()
    result = baire_from_minmax(closed, honest_minmax_oracle(ORACLE, depth=16), depth=12)
    assert [r for r in result.records if r["kind"] == "ball-in-set"]


def test_baire_from_minmax_accepts_constant_outside():
    closed = dyadic_closed_seq()
    result = baire_from_minmax(closed, stub_constant_minmax_oracle(F(1, 3)), depth=12)
    assert result.value.exact_rational == F(1, 3)
    level = [r for r in result.records if r["kind"] == "membership-level"]
    assert level and level[0]["level"] is None


def test_baire_from_minmax_rejects_positive_value_point():
    closed = dyadic_closed_seq()
    with pytest.raises(CertificateFailure):
        baire_from_minmax(closed, stub_constant_minmax_oracle(F(1, 2)), depth=8)


def test_countable_dense_dovetail_finds_dyadic_jump():
    ans = countable_dense_volterra(dyadic_dense(), thomae(), ORACLE, mode="dovetail")
    assert isinstance(ans, DenseDiscontinuity)
    assert ans.element == F(1, 2) and ans.precision == 1


def test_countable_dense_avoidance_constant_function():
    ans = countable_dense_volterra(dyadic_dense(), finite_indicator([]), ORACLE,
                                   mode="avoidance", depth=16)
    assert isinstance(ans, DenseAvoidingContinuity)
    seps = [r for r in ans.records if r["kind"] == "separation"]
    assert len(seps) == 16
    for rec in seps:
        gap = abs(rec["value_approx"] - rec["target"])
        assert gap > F(2, 2 ** rec["precision"])


def test_countable_dense_rationals_reduce_to_plain_volterra():
    dense = CountableDenseSet(element_at=canonical_rational, height_of=lambda i: i,
                              label="rationals")
    ans = countable_dense_volterra(dense, thomae(), ORACLE, mode="dovetail")
    assert isinstance(ans, DenseDiscontinuity)
    assert ans.element == F(0)


def test_countable_dense_injectivity_check():
    dense = CountableDenseSet(element_at=canonical_rational,
                              height_of=lambda i: i // 2, label="broken")
    with pytest.raises(InjectivityViolation):
        countable_dense_volterra(dense, finite_indicator([]), ORACLE, mode="avoidance")


def test_witness_pipeline_continuity_leg():
    f = thomae()
    pt = continuity_point_from_witnesses(f.complement_of_Dk, ORACLE, depth=12)
    assert pt.baire.separation_from(F(1, 2), 2) > 0


def test_delta_hook_scope():
    from bairekit.opensets import OpenR4, RationalInterval

    f = thomae()
    assert delta_exact_distance(f.complement_of_Dk(3)).lower_bound(F(5, 12), 0) > 0
    generic = r4_to_r2(OpenR4.from_intervals([RationalInterval(F(0), F(1))]))
    with pytest.raises(DeltaHookUnavailable):
        delta_exact_distance(generic)


def test_recover_indicator_support():
    enum = recover_indicator_support(finite_indicator([F(1, 3), F(2, 3)]),
                                     bound=2, precision_index=8)
    tol = F(1, 2 ** 8)
    approxes = sorted(p.approx(8) for p in enum.points)
    assert len(approxes) == 2
    assert abs(approxes[0] - F(1, 3)) <= tol and abs(approxes[1] - F(2, 3)) <= tol


def test_recover_empty_indicator_support():
    enum = recover_indicator_support(finite_indicator([]), bound=0, precision_index=8)
    assert enum.points == []
