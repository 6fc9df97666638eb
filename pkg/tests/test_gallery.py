import random
from dataclasses import replace
from fractions import Fraction as F

import pytest

from bairekit.errors import NeedsMembershipDecision
from bairekit.gallery import (ClosedNowhereDenseSeq, brute_force_osc,
                              dyadic_closed_seq, finite_indicator, make_h,
                              rational_evaluator, thomae, thomae_Dk)
from bairekit.opensets import RationalInterval, dense_witness_search

T = thomae()
H = make_h(dyadic_closed_seq())
IND = finite_indicator([F(1, 3), F(2, 3)])


def test_thomae_values():
    assert T.eval_at_rational(F(1, 2)).exact_rational == F(1, 2)
    assert T.eval_at_rational(F(2, 4)).exact_rational == F(1, 2)
    assert T.eval_at_rational(F(0)).exact_rational == 1
    assert T.osc_at_rational(F(1, 3)).exact_rational == F(1, 3)
    assert T.osc_zero_decision(F(5, 7)) is False
    assert T.has_rational_continuity_point is False


def test_thomae_osc_witness():
    assert T.osc_positive_witness(F(0), 0) == 0
    assert T.osc_positive_witness(F(1, 2), 0) == 1
    assert T.osc_positive_witness(F(1, 3), 0) == 2
    assert T.osc_positive_witness(F(1, 4), 0) == 2


def test_thomae_level_sets():
    assert thomae_Dk(0) == [F(0), F(1)]
    assert thomae_Dk(1) == [F(0), F(1, 2), F(1)]
    assert thomae_Dk(2) == [F(0), F(1, 4), F(1, 3), F(1, 2), F(2, 3), F(3, 4), F(1)]


def test_thomae_level_sets_nested():
    for k in range(4):
        assert set(thomae_Dk(k)) <= set(thomae_Dk(k + 1))


def test_thomae_complement_witness_geometry():
    o = T.complement_of_Dk(2)
    # nearest denominator-<=4 fraction to 5/12 is either 1/3 or 1/2
    assert o.witness(F(5, 12), 0) == F(1, 12)
    assert o.witness(F(1, 3), 0) == 0
    assert o.exact_distance


def test_brute_force_osc_oracle():
    ev = rational_evaluator(T)
    got = brute_force_osc(ev, F(1, 3), 6, 12)
    assert F(1, 3) - F(1, 2 ** 6) <= got <= F(1, 3)
    assert brute_force_osc(lambda q: F(0), F(1, 2), 4, 8) == 0
    ind = rational_evaluator(finite_indicator([F(1, 3)]))
    assert brute_force_osc(ind, F(1, 3), 6, 12) == 1
    with pytest.raises(ValueError):
        brute_force_osc(ev, F(1, 2), 8, 4)


def test_thomae_grid_self_oscillation_sample():
    ev = rational_evaluator(T)
    tol = F(1, 2 ** 10)
    for q in (F(0), F(1, 2), F(1, 3), F(5, 7), F(63, 64), F(17, 64)):
        got = brute_force_osc(ev, q, 10, 20)
        assert abs(got - F(1, q.denominator)) <= tol


def test_least_level_values():
    assert H.eval_at_rational(F(1, 2)).exact_rational == F(1, 2)
    assert H.eval_at_rational(F(1, 3)).exact_rational == 0
    assert H.eval_at_rational(F(1, 4)).exact_rational == F(1, 4)
    assert H.eval_at_rational(F(3, 8)).exact_rational == F(1, 8)
    assert H.eval_at_rational(F(0)).exact_rational == 0
    assert H.eval_at_rational(F(1)).exact_rational == 0


def test_least_level_is_its_own_oscillation():
    for q in (F(1, 2), F(1, 4), F(5, 8), F(2, 7), F(0)):
        assert H.osc_at_rational(q).exact_rational == H.eval_at_rational(q).exact_rational


def test_least_level_osc_agrees_with_grid_sample():
    ev = rational_evaluator(H)
    tol = F(1, 2 ** 10)
    rng = random.Random(3)
    probes = [F(1, 2), F(3, 4), F(5, 8), F(1, 3), F(2, 5)]
    probes += [F(rng.randrange(0, 257), 256) for _ in range(10)]
    for q in probes:
        got = brute_force_osc(ev, q, 10, 20)
        assert abs(got - ev(q)) <= tol


def test_grid_oracle_sees_neighbor_jumps_at_fine_levels():
    # at window 2^-10 a level-11 dyadic sits next to a much coarser dyadic,
    # so the fixed-window oracle reports the neighbor's jump; only shrinking
    # windows recover the true pointwise value
    ev = rational_evaluator(H)
    q = F(63, 2048)
    assert ev(q) == F(1, 2048)
    wide = brute_force_osc(ev, q, 10, 20)
    assert wide >= F(1, 32) - F(1, 2 ** 19)  # the 1/32 jump is inside the window
    narrow = brute_force_osc(ev, q, 14, 24)
    assert abs(narrow - ev(q)) <= F(1, 2 ** 14)


def test_least_level_hooks():
    assert H.osc_zero_decision(F(1, 3)) is True
    assert H.osc_zero_decision(F(1, 4)) is False
    assert H.osc_positive_witness(F(1, 4), 0) == 2
    assert H.osc_positive_witness(F(1, 3), 0) is None
    assert H.has_rational_continuity_point is True


def test_make_h_requires_membership_hook():
    bare = ClosedNowhereDenseSeq(complement_at=dyadic_closed_seq().complement_at)
    f = make_h(bare)
    with pytest.raises(NeedsMembershipDecision):
        f.eval_at_rational(F(1, 2))


def test_dyadic_distance_hook():
    seq = dyadic_closed_seq()
    assert seq.distance_to(F(1, 3), 0) == F(1, 6)
    assert seq.distance_to(F(1, 2), 0) == 0
    assert seq.distance_to(F(0), 1) == F(1, 4)
    assert seq.distance_to(F(1), 2) == F(1, 8)


def test_dyadic_complement_intervals():
    r4 = dyadic_closed_seq().complement_at(1)
    ivs = r4.stage(10)
    assert len(ivs) == 3
    assert ivs[0].lo < 0 < ivs[0].hi
    assert ivs[-1].lo < 1 < ivs[-1].hi


def test_indicator_values():
    assert IND.eval_at_rational(F(1, 3)).exact_rational == 1
    assert IND.eval_at_rational(F(1, 2)).exact_rational == 0
    assert IND.osc_at_rational(F(1, 3)).exact_rational == 1
    assert IND.osc_positive_witness(F(1, 3), 0) == 0
    assert IND.osc_positive_witness(F(1, 2), 0) is None
    assert IND.osc_zero_decision(F(1, 2)) is True


def test_indicator_canonicalizes_and_validates():
    f = finite_indicator([F(1, 2), F(2, 4)])
    assert f.eval_at_rational(F(1, 2)).exact_rational == 1
    with pytest.raises(ValueError):
        finite_indicator([F(3, 2)])


def test_indicator_every_level_is_the_support():
    for k in (0, 3, 9):
        o = IND.complement_of_Dk(k)
        assert o.witness(F(1, 3), 0) == 0
        assert o.witness(F(1, 2), 0) == F(1, 6)


def test_level_complements_dense_for_gallery():
    rng = random.Random(5)
    for f in (T, H, IND, finite_indicator([])):
        for k in range(0, 9, 2):
            o = f.complement_of_Dk(k)
            for _ in range(8):
                a = F(rng.randrange(0, 56), 64)
                b = a + F(rng.randrange(4, 9), 64)
                hit = dense_witness_search(o, RationalInterval(a, min(b, F(1))),
                                           budget=50_000)
                assert hit.radius > 0


def test_level_complement_witnesses_shrink_with_level():
    # deeper levels exclude more, so witnesses can only shrink
    for q in (F(5, 12), F(2, 7), F(9, 11)):
        prev = None
        for k in range(6):
            w = T.complement_of_Dk(k).witness(q, 0)
            if prev is not None:
                assert w <= prev
            prev = w
