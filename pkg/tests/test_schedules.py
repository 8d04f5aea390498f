from fractions import Fraction

import pytest

from meandim import (
    FiniteSubset,
    ScheduleError,
    TilingSchedule,
    Z,
    Z2,
    generate_interval_schedule,
    verify_congruent,
    verify_partition,
    verify_primely_congruent,
)


def test_balanced_growth_values():
    s = generate_interval_schedule(1, 2, 3)
    boxes = [s.level_box(n) for n in range(1, 5)]
    assert [(b.lows[0], b.highs[0]) for b in boxes] == [(-1, 2), (-5, 6), (-17, 18), (-53, 54)]
    assert [s.periods(n)[0] for n in range(1, 5)] == [4, 12, 36, 108]


def test_alignment_invariant():
    s = generate_interval_schedule(1, 2, 3)
    for n in range(1, 8):
        q, qn = s.periods(n)[0], s.periods(n + 1)[0]
        assert qn % q == 0
        a, an = -s.level_box(n).lows[0], -s.level_box(n + 1).lows[0]
        assert (an - a) % q == 0


def test_single_level_schedule_valid():
    s = generate_interval_schedule(0, 1, 2)
    assert s.level_box(1).volume == 2


def test_non_integer_growth_rejected():
    s = generate_interval_schedule(1, 2, Fraction(5, 2))
    with pytest.raises(ScheduleError, match="level 2"):
        s.level_box(2)


def test_small_multiplier_rejected():
    s = generate_interval_schedule(1, 2, 1)
    with pytest.raises(ScheduleError):
        s.level_box(2)


def test_materialize_level_resolver():
    s = generate_interval_schedule(1, 2, 3)
    t1 = s.materialize_level(1)
    assert t1.tile_of((5,)) == (1, (4,))
    for n in range(1, 5):
        t = s.materialize_level(n)
        assert t.tile_of((0,)) == (1, (0,) * 1)
        W = FiniteSubset.interval(-1000, 1000)
        assert verify_partition(t, W).ok


def test_consecutive_levels_primely_congruent():
    s = generate_interval_schedule(1, 2, 3)
    for n in range(1, 4):
        fine, coarse = s.materialize_level(n), s.materialize_level(n + 1)
        W = FiniteSubset.interval(-3 * s.volume(n + 1), 3 * s.volume(n + 1))
        assert verify_congruent(fine, coarse, W).ok
        assert verify_primely_congruent(fine, coarse, W).ok


def test_invariance_profile_doubling():
    s = generate_interval_schedule(4, 5, 2)
    K_list = [Z.ball(k) for k in range(1, 7)]
    eps_list = [Fraction(1, k) for k in range(1, 7)]
    assert s.verify_invariance_profile(K_list, eps_list).ok


def test_invariance_profile_failures():
    s = generate_interval_schedule(1, 2, 3)
    res = s.verify_invariance_profile([Z.ball(1)], [Fraction(0)])
    assert res.ok is False  # eps = 0 can never hold, strict inequality
    res = s.verify_invariance_profile([Z.ball(1), Z.ball(2)], [2, Fraction(1, 10**9)])
    assert res.ok is False and res.violations == [2]  # first failing level named
    singleton = FiniteSubset(Z, [(0,)])
    assert s.verify_invariance_profile([singleton] * 3, [Fraction(1, 10**9)] * 3).ok
    with pytest.raises(ValueError):
        s.verify_invariance_profile([Z.ball(1)], [1, 1])


def test_nesting_coverage():
    s = generate_interval_schedule(1, 2, 3)
    res = s.verify_nesting(100)
    assert res.ok and res.violations[0] <= 5
    assert s.verify_nesting(1).violations[0] == 1  # g_1 = 0 sits in level 1


def test_nesting_one_sided_failure():
    s = generate_interval_schedule(0, 3, 3, balance="right")
    res = s.verify_nesting(10, max_level=20)
    assert res.ok is False
    assert res.violations == [(-1,)]  # negative integers never covered


def test_serialization_round_trip():
    s = generate_interval_schedule(1, 2, 3)
    s.ensure(6)
    text = s.serialize(6)
    back = TilingSchedule.parse(text)
    assert back.serialize(6) == text
    assert back.level_box(6) == s.level_box(6)


def test_serialization_rejects_tampered_arrays():
    s = generate_interval_schedule(1, 2, 3)
    text = s.serialize(4).replace("17", "16")
    with pytest.raises(ScheduleError):
        TilingSchedule.parse(text)


def test_z2_schedule_as_axis_product():
    s = generate_interval_schedule(1, 1, 3, group=Z2)
    assert s.level_box(2) == type(s.level_box(2))((-4, -4), (4, 4))
    t = s.materialize_level(1)
    assert t.tile_of((4, -4)) == (1, (3, -3))
    W = FiniteSubset.box2(-20, 20, -20, 20)
    assert verify_partition(t, W).ok
    fine, coarse = s.materialize_level(1), s.materialize_level(2)
    assert verify_primely_congruent(fine, coarse, W).ok


def test_even_multiplier_alternates_sides():
    s = generate_interval_schedule(1, 1, 2)
    a = [-s.level_box(n).lows[0] for n in range(1, 9)]
    b = [s.level_box(n).highs[0] for n in range(1, 9)]
    assert a[-1] > a[0] and b[-1] > b[0]  # both ends grow without bound
