from fractions import Fraction

import pytest

from meandim import HASH, BuildParams, Construction, Polyhedron, generate_interval_schedule
from meandim.analysis import (
    densities,
    free_set,
    lower_bound_estimate,
    mdim_report,
    minimality_check,
    upper_bound_estimate,
    verify_free_nesting,
)
from meandim.cube import net_schedule
from meandim.groups import Box


def test_densities_seed_tile(toy_cfg, toy_words):
    tile = {g: toy_words.w1[g] for g in toy_cfg.levels[1].box.cells()}
    rep = densities(tile, "seed tile")
    assert rep.star_density == Fraction(3, 4)
    assert rep.hash_density == Fraction(1, 4)


def test_densities_all_hash():
    rep = densities({(i,): HASH for i in range(7)})
    assert rep.star_density == 0 and rep.hash_density == 1
    with pytest.raises(ValueError):
        densities({})


def test_coded_word_consumes_stars(toy_cfg, toy_words):
    host = {g: toy_words.w1_coded[g] for g in toy_cfg.steps[1].host_box.cells()}
    raw = {g: toy_words.w1[g] for g in toy_cfg.steps[1].host_box.cells()}
    assert densities(host).star_density < densities(raw).star_density
    assert densities(host).star_density == Fraction(3, 36)


def test_free_set_level1(toy_cfg):
    J1 = free_set(toy_cfg, 1)
    assert J1.size == 163
    assert J1.density == Fraction(163, 324) > toy_cfg.rho
    elems = J1.elements()
    assert len(elems) == 163
    assert all(g in J1 for g in elems)
    # the shift is the level-1 link center
    assert J1.shift == toy_cfg.steps[1].link_center
    stars = toy_cfg.star_positions(2)
    assert sorted(elems) == sorted((p[0] - J1.shift[0],) for p in stars)


def test_free_set_nesting(toy_cfg):
    assert verify_free_nesting(toy_cfg, 1).ok  # J_0 empty
    res = verify_free_nesting(toy_cfg, 2)
    assert res.ok is True


def test_free_set_restrict(toy_cfg):
    J1 = free_set(toy_cfg, 1)
    window = list(Box((-20,), (20,)).cells())
    got = J1.restrict(window)
    assert got == [g for g in window if g in J1]


def test_lower_bound_estimates(matrix_cfg):
    rho = matrix_cfg.rho
    for n in (1, 2):
        lo = lower_bound_estimate(matrix_cfg, n)
        vol = matrix_cfg.levels[n + 1].volume
        assert rho < lo <= rho + Fraction(1, vol)
    # the window slack shrinks with the level
    assert lower_bound_estimate(matrix_cfg, 2) - rho < lower_bound_estimate(matrix_cfg, 1) - rho


def test_lower_bound_scales_with_dimension():
    sched = generate_interval_schedule(1, 2, 3)
    cfg2 = Construction(
        BuildParams(
            schedule=sched,
            rho=Fraction(1, 2),
            cube=Polyhedron(2),
            nets=net_schedule(2, 2),
            depth=2,
        )
    )
    # the estimate is the free-coordinate density times the cube dimension
    density = free_set(cfg2, 1).density
    assert lower_bound_estimate(cfg2, 1) == 2 * density
    assert cfg2.rho < density <= cfg2.rho + Fraction(1, cfg2.levels[2].volume)


def brute_force_worst_class(cfg, n, window):
    # independent per-class counting over every translation class
    lvl = cfg.levels[n]
    q = cfg.schedule.periods(lvl.sched_level)[0]
    lo, hi = window.lows[0], window.highs[0]
    blo, bhi = lvl.box.lows[0], lvl.box.highs[0]
    worst = None
    for o in range(q):
        centers = [c for c in range(lo - q, hi + q + 1) if c % q == o and lo <= c + blo and c + bhi <= hi]
        whole = len(centers)
        free = whole * lvl.stars + (window.volume - whole * lvl.volume)
        worst = free if worst is None else max(worst, free)
    return Fraction(worst, window.volume)


def test_upper_bound_level1_exact(toy_cfg):
    est = upper_bound_estimate(toy_cfg, 1)
    assert est.exhaustive and est.class_count == 4
    want = brute_force_worst_class(toy_cfg, 1, toy_cfg.levels[2].box)
    assert est.free_fraction == want == Fraction(244, 324)
    assert est.free_fraction <= est.envelope_fraction
    assert est.envelope_fraction == Fraction(1, 2) + Fraction(1, 4) + est.boundary_fraction


def test_upper_bound_level2(toy_cfg):
    est = upper_bound_estimate(toy_cfg, 2)
    assert est.exhaustive and est.class_count == 324
    assert est.free_fraction <= est.envelope_fraction
    assert est.free_fraction - toy_cfg.rho < Fraction(1, 100)


def test_upper_bound_closed_form_branch(toy_cfg):
    # level-3 tiling has an astronomical class count; only arithmetic works
    q3 = toy_cfg.schedule.periods(toy_cfg.levels[3].sched_level)[0]
    lo = toy_cfg.levels[3].box.lows[0]
    window = Box((lo,), (lo + 3 * q3 - 1,))  # exactly three tiles wide
    est = upper_bound_estimate(toy_cfg, 3, window=window)
    assert not est.exhaustive
    assert est.whole_tiles_min == 2  # the worst class cuts one tile
    assert est.free_fraction <= est.envelope_fraction


def test_upper_bound_custom_window(toy_cfg):
    est = upper_bound_estimate(toy_cfg, 1, window=Box((-1,), (10,)))
    want = brute_force_worst_class(toy_cfg, 1, Box((-1,), (10,)))
    assert est.free_fraction == want
    assert upper_bound_estimate(toy_cfg, 1, window=Box((0,), (1,))) is None  # inconclusive


def test_minimality_check_passes(toy_cfg):
    for n in (1, 2):
        rep = minimality_check(toy_cfg, n, sample_size=15, seed=11)
        assert rep.ok and rep.recurrence_ok and rep.syndetic_ok
        assert rep.sampled == 15 and rep.mismatches == []


def test_minimality_identity_shift_trivial(toy_cfg):
    rep = minimality_check(toy_cfg, 1, sample_size=1, seed=0)
    assert rep.ok  # only the identity shift sampled


def test_minimality_mutation_detected_directly(toy_cfg, monkeypatch):
    # corrupt the value at one specific copy coordinate and sample that copy
    import meandim.analysis as analysis_mod

    q = toy_cfg.schedule.periods(toy_cfg.levels[2].sched_level)[0]

    class Rigged:
        def __init__(self, *a, **k):
            pass

        def randrange(self, lo, hi):
            return 7

    monkeypatch.setattr(analysis_mod.random, "Random", Rigged)
    original = type(toy_cfg).eval_x
    victim = (q * 7 + 1,)

    def corrupted(self, g):
        if tuple(g) == victim:
            return (Fraction(9, 10),)
        return original(self, g)

    monkeypatch.setattr(type(toy_cfg), "eval_x", corrupted)
    rep = minimality_check(toy_cfg, 1, sample_size=2, seed=0)
    assert not rep.recurrence_ok
    assert rep.mismatches and rep.mismatches[0][0] == (q * 7,)


def test_mdim_report(matrix_cfg):
    rep = mdim_report(matrix_cfg)
    assert len(rep.rows) == 2
    assert rep.gaps_monotone and rep.brackets_contain_target
    target = matrix_cfg.rho * matrix_cfg.params.cube.dim
    for row in rep.rows:
        assert row.certified_low <= target <= row.upper_scaled
        assert row.lower > target  # the raw window estimate sits above rho
        assert row.gap >= 0
    assert rep.rows[1].gap <= rep.rows[0].gap
    assert not rep.approximate
