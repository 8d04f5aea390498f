"""Hierarchical word construction with exact density control.

The engine plans a tower of construction levels over a nested tiling
schedule and evaluates the resulting configuration lazily, one coordinate
at a time, with arbitrary-precision arithmetic throughout.

Level words.  ``V_1`` is the seed word on the level-1 tile: a fixed star
cell set of density just above ``rho``, hash elsewhere.  For n >= 2, ``V_n``
lives on the level-n tile and is assembled from level n-1 in two zones:

* the host zone: a designated sub-tile (a schedule level between n-1 and n,
  anchored at the tile center) carries the coded word ``C_{n-1}``;
* the thinning zone: the remaining level-(n-1) tiles keep their words, with
  stars greedily converted to hashes, never dropping any single tile below
  its density floor, until the whole tile's star count reaches the target
  floor(rho * volume) + 1.

The coded word ``C_n`` modifies ``V_n``-copies inside the host: the first
``code_count`` level-n tiles (identity first, then lexicographic center
order) have their stars replaced by net points, tile k receiving the base-B
digits of k (B = net size, big-endian over the stars in canonical order),
so the code tiles realize every possible star assignment exactly once.  The
next tile after the code block, the link tile, is left untouched, which
makes each level word reappear inside the next one.

Because the identity tile is always code tile 0, stars near the origin
resolve at the first level that reaches them, and the limit configuration
has no stars anywhere it is defined.
"""

from __future__ import annotations

import itertools
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .cube import Net, Polyhedron, net_schedule
from .errors import (
    CapacityError,
    DepthError,
    NotRealizedError,
    ScheduleError,
    SizeGuardError,
)
from .groups import Box, Element
from .schedules import TilingSchedule

# Refuse exact code counts beyond roughly this many bits.
MAX_CODE_BITS = 1_000_000
# Give up scanning schedule levels beyond this index.
MAX_SCHED_LEVEL = 100_000
# Materialization bound, in cells.
MATERIALIZE_GUARD = 500_000


class Symbol:
    """Placeholder symbol (star or hash); net points are Fraction tuples."""

    __slots__ = ("label",)

    def __init__(self, label: str):
        self.label = label

    def __repr__(self) -> str:
        return self.label


STAR = Symbol("*")
HASH = Symbol("#")


def render_value(v) -> str:
    """Render a symbol for dumps: '*', '#', or 'num/den[,num/den]'."""
    if v is STAR or v is HASH:
        return v.label
    return ",".join(f"{c.numerator}/{c.denominator}" for c in v)


@dataclass(frozen=True)
class BuildParams:
    """Everything a construction run depends on.

    ``depth`` is the number of fully planned construction levels: levels
    1..depth+1 are laid out and all coordinates of the level-``depth`` tile
    (and of its recurrence copies) are determined.
    """

    schedule: TilingSchedule
    rho: Fraction
    cube: Polyhedron
    nets: tuple
    depth: int
    mode: str = "exact"  # "exact" or "capped"
    cap: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "rho", Fraction(self.rho))
        if not 0 < self.rho < 1:
            raise ValueError("rho must lie strictly between 0 and 1")
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        if self.mode not in ("exact", "capped"):
            raise ValueError("mode must be 'exact' or 'capped'")
        if self.mode == "capped":
            if self.cap is None or self.cap < 2:
                raise ValueError("capped mode needs cap >= 2")
        elif self.cap is not None:
            raise ValueError("cap is only meaningful in capped mode")
        if len(self.nets) < self.depth:
            raise ValueError("need one net per construction level")
        for net in self.nets:
            if net.dim != self.cube.dim:
                raise ValueError("net dimension does not match the cube")
            if net.size < 2:
                raise ValueError("nets must have at least two points")
        for a, b in zip(self.nets, self.nets[1:]):
            if not b.is_superset_of(a):
                raise ValueError("nets must be nested (each refines the previous)")

    @staticmethod
    def toy(
        schedule: TilingSchedule,
        rho,
        dim: int = 1,
        depth: int = 2,
        mode: str = "exact",
        cap: Optional[int] = None,
        first_delta=Fraction(1, 2),
    ) -> "BuildParams":
        """Convenience constructor with the default halving net schedule."""
        return BuildParams(
            schedule=schedule,
            rho=Fraction(rho),
            cube=Polyhedron(dim),
            nets=net_schedule(dim, depth, first_delta),
            depth=depth,
            mode=mode,
            cap=cap,
        )


@dataclass(frozen=True)
class LevelPlan:
    """One construction level: its schedule level, tile box and star count."""

    n: int
    sched_level: int
    box: Box
    volume: int
    stars: int  # star count of the level word V_n


@dataclass(frozen=True)
class StepPlan:
    """Data linking level n to level n+1 (host, code block, link, thinning)."""

    n: int
    host_level: int
    host_box: Box
    cand_lo: tuple  # per-axis j-range of level-n tiles inside the host box
    cand_hi: tuple
    n_cand: int
    e_lexrank: int  # lexicographic rank of the identity tile among candidates
    code_count: int
    code_exact: Optional[int]  # None when too large to represent
    approximate: bool
    link_center: Element
    next_level: int
    tile_lo: tuple  # per-axis j-range of level-n tiles inside the next box
    tile_hi: tuple
    n_out: int
    thin_total: int
    thin_per_tile: int
    thin_full: int
    thin_rem: int
    net: Net
    radix: int


@dataclass
class MaterializedWords:
    """Literal small-instance words, used as the evaluator's oracle."""

    window: Box  # the level-2 tile
    w1: dict
    w1_coded: dict  # the coded word on the host box of step 1
    v11: dict  # the level-2 word (greedy thinning applied)
    stable: Optional[dict]  # v11 with its stars resolved by code tile 0 of step 2


# -- box-lattice counting helpers -------------------------------------------


def _count_lex_below(j: tuple, lows: tuple, highs: tuple) -> int:
    """Number of integer tuples in the box that are lexicographically < j."""
    rank = len(lows)
    suffix = [1] * (rank + 1)
    for i in range(rank - 1, -1, -1):
        suffix[i] = suffix[i + 1] * (highs[i] - lows[i] + 1)
    total = 0
    for i in range(rank):
        cnt = j[i] - lows[i]
        if cnt < 0:
            cnt = 0
        size = highs[i] - lows[i] + 1
        if cnt > size:
            cnt = size
        total += cnt * suffix[i + 1]
        if not lows[i] <= j[i] <= highs[i]:
            break
    return total


def _lex_at(index: int, lows: tuple, highs: tuple) -> tuple:
    """Inverse of the lexicographic rank within a box."""
    rank = len(lows)
    suffix = [1] * (rank + 1)
    for i in range(rank - 1, -1, -1):
        suffix[i] = suffix[i + 1] * (highs[i] - lows[i] + 1)
    if not 0 <= index < suffix[0]:
        raise ValueError("lexicographic index out of range")
    out = []
    for i in range(rank):
        d, index = divmod(index, suffix[i + 1])
        out.append(lows[i] + d)
    return tuple(out)


def _exact_div(a: int, b: int) -> int:
    q, r = divmod(a, b)
    if r:
        raise ScheduleError(f"alignment broken: {a} not a multiple of {b}")
    return q


class Construction:
    """A fully planned construction with a lazy pointwise evaluator.

    Plans are immutable after construction and evaluation is pure, so
    instances are safe to share across threads: the memo caches only ever
    receive the same value for the same key.
    """

    def __init__(self, params: BuildParams):
        self.params = params
        self.schedule = params.schedule
        self.group = params.schedule.group
        self.rho = params.rho
        self.levels: dict = {}
        self.steps: dict = {}
        self._word_memo: dict = {}
        self._rank_memo: dict = {}
        self._plan()

    # -- planning ----------------------------------------------------------

    def _target_stars(self, volume: int) -> int:
        """Smallest star count whose density strictly exceeds rho."""
        return (self.rho.numerator * volume) // self.rho.denominator + 1

    def _plan(self) -> None:
        sched = self.schedule
        rho = self.rho
        box1 = sched.level_box(1)
        vol1 = box1.volume
        s1 = self._target_stars(vol1)
        if s1 > vol1:
            raise CapacityError("rho too close to 1 for the seed tile")
        self.levels[1] = LevelPlan(1, 1, box1, vol1, s1)
        cells = itertools.islice(box1.cells(), s1)
        self.seed_stars = tuple(cells)  # lexicographically first cells
        self._seed_set = frozenset(self.seed_stars)
        for n in range(1, self.params.depth + 1):
            self._plan_step(n)

    def _code_count(self, n: int, stars: int, radix: int):
        """Code block size at step n: radix**stars, possibly capped."""
        too_big = stars * (radix.bit_length() - 1) > MAX_CODE_BITS
        exact = None if too_big else radix**stars
        if exact is not None and exact.bit_length() > MAX_CODE_BITS:
            exact, too_big = None, True
        if self.params.mode == "exact":
            if too_big:
                raise DepthError(
                    f"step {n + 1} needs a code block of {radix}^{stars} tiles, "
                    "beyond exact representation; rerun in capped mode"
                )
            return exact, exact, False
        cap = self.params.cap
        if too_big:
            return cap, None, True
        return min(cap, exact), exact, exact > cap

    def _plan_step(self, n: int) -> None:
        sched = self.schedule
        rho = self.rho
        fine = self.levels[n]
        q = sched.periods(fine.sched_level)
        net = self.params.nets[n - 1]
        radix = net.size
        code, code_exact, approximate = self._code_count(n, fine.stars, radix)

        # Host level: first level whose tile holds more than `code` fine
        # tiles.  The ratio is monotone in the level, so probe exponentially
        # and then bisect (hosts can sit thousands of levels up).
        def fits(level: int) -> bool:
            return sched.volume(level) // fine.volume > code

        host = fine.sched_level + 1
        step_up = 1
        while not fits(host):
            if host >= MAX_SCHED_LEVEL:
                raise CapacityError(f"no host level found for step {n + 1}")
            host = min(host + step_up, MAX_SCHED_LEVEL)
            step_up *= 2
        lo = max(fine.sched_level + 1, host - step_up // 2)
        while lo < host:
            mid = (lo + host) // 2
            if fits(mid):
                host = mid
            else:
                lo = mid + 1
        host_box = sched.level_box(host)
        cand_lo, cand_hi = self._tile_jrange(fine, host_box)
        n_cand = 1
        for lo, hi in zip(cand_lo, cand_hi):
            n_cand *= hi - lo + 1
        assert n_cand == sched.volume(host) // fine.volume
        assert n_cand > code
        zeros = (0,) * self.group.rank
        e_lexrank = _count_lex_below(zeros, cand_lo, cand_hi)
        link_j = self._cand_at_raw(code, cand_lo, cand_hi, e_lexrank)
        link_center = tuple(jj * qq for jj, qq in zip(link_j, q))

        # Next level: first level satisfying the anchor, star-mass and
        # thinning-capacity requirements.
        g_n = self.group.enumerate_element(n)
        shift = self._link_shift_through(n - 1)
        anchor = self.group.mul(g_n, self.group.mul(shift, link_center))
        per_tile = fine.stars - (rho.numerator * fine.volume) // rho.denominator
        assert per_tile >= 1
        # The host zone is never thinned, so its surplus stars over rho must
        # fit under the sandwich ceiling no matter how large the next level
        # is; when rho*|S_n| is an integer this bound does not improve with
        # the level, so an oversized host is detectably hopeless up front.
        surplus = (n_cand - code) * fine.stars
        host_ceiling = rho * host_box.volume + 1
        if rho * fine.volume == (rho.numerator * fine.volume) // rho.denominator and surplus > host_ceiling:
            raise CapacityError(
                f"step {n + 1}: the {n_cand - code} uncoded host tiles hold "
                f"{surplus} stars, over the sandwich ceiling {host_ceiling}; "
                "the schedule jumps too coarsely past the code block"
            )
        m = host + 1
        reason = ""
        futile = 0
        while m <= MAX_SCHED_LEVEL:
            box_m = sched.level_box(m)
            n_tiles = sched.volume(m) // fine.volume
            n_out = n_tiles - n_cand
            target = self._target_stars(box_m.volume)
            ok_anchor = anchor in box_m
            ok_mass = fine.stars * n_out * rho.denominator > rho.numerator * box_m.volume
            thin_total = (n_cand - code) * fine.stars + n_out * fine.stars - target
            ok_capacity = ok_mass and 0 <= thin_total <= n_out * per_tile
            if ok_anchor and ok_mass and ok_capacity:
                break
            reason = (
                "anchor containment"
                if not ok_anchor
                else ("outside star mass" if not ok_mass else "thinning capacity")
            )
            futile += 1 if (ok_anchor and ok_mass) else 0
            if futile > 256:
                raise CapacityError(f"step {n + 1}: thinning capacity keeps failing past level {m}")
            m += 1
        else:
            raise CapacityError(f"step {n + 1}: {reason} unsatisfiable through level {MAX_SCHED_LEVEL}")

        box_next = sched.level_box(m)
        tile_lo, tile_hi = self._tile_jrange(fine, box_next)
        thin_full, thin_rem = divmod(thin_total, per_tile)
        self.steps[n] = StepPlan(
            n=n,
            host_level=host,
            host_box=host_box,
            cand_lo=cand_lo,
            cand_hi=cand_hi,
            n_cand=n_cand,
            e_lexrank=e_lexrank,
            code_count=code,
            code_exact=code_exact,
            approximate=approximate,
            link_center=link_center,
            next_level=m,
            tile_lo=tile_lo,
            tile_hi=tile_hi,
            n_out=n_out,
            thin_total=thin_total,
            thin_per_tile=per_tile,
            thin_full=thin_full,
            thin_rem=thin_rem,
            net=net,
            radix=radix,
        )
        self.levels[n + 1] = LevelPlan(n + 1, m, box_next, box_m.volume, target)
        # Density sandwich: rho < stars/volume <= rho + 1/volume, exactly.
        assert rho < Fraction(target, box_m.volume) <= rho + Fraction(1, box_m.volume)
        assert box_next.contains_box(host_box) and host_box.contains_box(fine.box)

    def _tile_jrange(self, fine: LevelPlan, outer: Box):
        q = self.schedule.periods(fine.sched_level)
        lo = tuple(
            _exact_div(outer.lows[i] - fine.box.lows[i], q[i])
            for i in range(self.group.rank)
        )
        hi = tuple(
            _exact_div(outer.highs[i] - fine.box.highs[i], q[i])
            for i in range(self.group.rank)
        )
        return lo, hi

    # -- code-block ordering (identity tile first, then lexicographic) ------

    def _cand_rank(self, step: StepPlan, j: tuple) -> int:
        if all(x == 0 for x in j):
            return 0
        lr = _count_lex_below(j, step.cand_lo, step.cand_hi)
        return lr + 1 if lr < step.e_lexrank else lr

    @staticmethod
    def _cand_at_raw(rank: int, lo: tuple, hi: tuple, e_lexrank: int) -> tuple:
        if rank == 0:
            return (0,) * len(lo)
        idx = rank - 1 if rank - 1 < e_lexrank else rank
        return _lex_at(idx, lo, hi)

    def _cand_at(self, step: StepPlan, rank: int) -> Element:
        j = self._cand_at_raw(rank, step.cand_lo, step.cand_hi, step.e_lexrank)
        q = self.schedule.periods(self.levels[step.n].sched_level)
        return tuple(jj * qq for jj, qq in zip(j, q))

    def _coded_before(self, step: StepPlan, lex_count: int) -> int:
        """How many code tiles sit lexicographically before a given rank."""
        R, le = step.code_count, step.e_lexrank
        if le < R:
            return min(lex_count, R)
        extra = 1 if le < lex_count else 0
        return min(lex_count, R - 1) + extra

    # -- thinning schedule ---------------------------------------------------

    @staticmethod
    def _shed_of(step: StepPlan, rank: int) -> int:
        if rank < step.thin_full:
            return step.thin_per_tile
        if rank == step.thin_full:
            return step.thin_rem
        return 0

    @staticmethod
    def _shed_first(step: StepPlan, count: int) -> int:
        shed = step.thin_per_tile * min(count, step.thin_full)
        if count > step.thin_full:
            shed += step.thin_rem
        return shed

    # -- resolvers -----------------------------------------------------------

    def _grid_center(self, sched_level: int, g: Element) -> Element:
        box = self.schedule.level_box(sched_level)
        q = self.schedule.periods(sched_level)
        return tuple(qq * ((x - lo) // qq) for x, lo, qq in zip(g, box.lows, q))

    def _jvec(self, n: int, center: Element) -> tuple:
        q = self.schedule.periods(self.levels[n].sched_level)
        return tuple(c // qq for c, qq in zip(center, q))

    # -- the level words -----------------------------------------------------

    def level_word(self, n: int, pos: Element):
        """Value of the level word V_n at a position of the level-n tile."""
        if not 1 <= n <= self.params.depth + 1:
            raise DepthError(f"level {n} not planned")
        if pos not in self.levels[n].box:
            raise ValueError(f"{pos} outside the level-{n} tile")
        return self._word(n, tuple(pos))

    def _word(self, n: int, pos: Element):
        if n == 1:
            return STAR if pos in self._seed_set else HASH
        key = (n, pos)
        cached = self._word_memo.get(key)
        if cached is not None:
            return cached
        step = self.steps[n - 1]
        if pos in step.host_box:
            val = self._coded(n - 1, pos)
        else:
            c = self._grid_center(self.levels[n - 1].sched_level, pos)
            rel = tuple(x - y for x, y in zip(pos, c))
            val = self._word(n - 1, rel)
            if val is STAR:
                j = self._jvec(n - 1, c)
                rank = _count_lex_below(j, step.tile_lo, step.tile_hi) - _count_lex_below(
                    j, step.cand_lo, step.cand_hi
                )
                shed = self._shed_of(step, rank)
                if shed and self._stars_below(n - 1, rel) < shed:
                    val = HASH
        self._word_memo[key] = val
        return val

    def coded_word(self, n: int, g: Element):
        """Value of the coded word C_n at a position of the step-n host box."""
        if n not in self.steps:
            raise DepthError(f"step {n + 1} not planned")
        if g not in self.steps[n].host_box:
            raise ValueError(f"{g} outside the host box of step {n}")
        return self._coded(n, tuple(g))

    def _coded(self, n: int, g: Element):
        step = self.steps[n]
        c = self._grid_center(self.levels[n].sched_level, g)
        rel = tuple(x - y for x, y in zip(g, c))
        rank = self._cand_rank(step, self._jvec(n, c))
        if rank < step.code_count and self._word(n, rel) is STAR:
            p = self._stars_below(n, rel)
            d = self._digit(rank, self.levels[n].stars - 1 - p, step.radix)
            return step.net.point_at(d)
        return self._word(n, rel)

    @staticmethod
    def _digit(code_index: int, exp: int, radix: int) -> int:
        if exp >= code_index.bit_length():
            return 0  # radix**exp already exceeds the index
        return (code_index // radix**exp) % radix

    def _stars_below(self, n: int, pos: Element) -> int:
        """Rank of a position among the stars of V_n (canonical order).

        The order is hierarchical: level-(n-1) tiles in lexicographic center
        order, positions within a tile recursively.  On Z this coincides with
        the numeric order of the star positions.
        """
        if n == 1:
            return bisect_left(self.seed_stars, pos)
        key = (n, pos)
        cached = self._rank_memo.get(key)
        if cached is not None:
            return cached
        step = self.steps[n - 1]
        fine = self.levels[n - 1]
        c = self._grid_center(fine.sched_level, pos)
        rel = tuple(x - y for x, y in zip(pos, c))
        j = self._jvec(n - 1, c)
        lb_cand = _count_lex_below(j, step.cand_lo, step.cand_hi)
        lb_thin = _count_lex_below(j, step.tile_lo, step.tile_hi) - lb_cand
        total = (lb_cand - self._coded_before(step, lb_cand)) * fine.stars
        total += lb_thin * fine.stars - self._shed_first(step, lb_thin)
        if pos in step.host_box:
            if self._cand_rank(step, j) >= step.code_count:
                total += self._stars_below(n - 1, rel)
        else:
            shed = self._shed_of(step, lb_thin)
            within = self._stars_below(n - 1, rel) - shed
            total += within if within > 0 else 0
        self._rank_memo[key] = total
        return total

    # -- public evaluation ---------------------------------------------------

    @property
    def approximate(self) -> bool:
        return any(s.approximate for s in self.steps.values())

    def eval_w(self, g: Element):
        """Stabilized limit value at g; never a star.

        Positions inside the level-n tile resolve through the coded word of
        step n; positions beyond the deepest tile resolve through the top
        level word when it determines them, otherwise a DepthError explains
        that more depth is needed.
        """
        g = tuple(g)
        if len(g) != self.group.rank:
            raise ValueError("element rank mismatch")
        for n in range(1, self.params.depth + 1):
            if g in self.levels[n].box:
                return self._coded(n, g)
        top = self.params.depth + 1
        c = self._grid_center(self.levels[top].sched_level, g)
        val = self._word(top, tuple(x - y for x, y in zip(g, c)))
        if val is STAR:
            raise DepthError(f"value at {g} is not determined at depth {self.params.depth}")
        return val

    def eval_x(self, g: Element):
        """Point of the cube at g: eval_w with hashes sent to the basepoint."""
        val = self.eval_w(g)
        if val is HASH:
            return self.params.cube.basepoint
        return val

    def window(self, cells, kind: str = "w") -> list:
        """Evaluate over a window; returns [(g, value)] in iteration order."""
        if isinstance(cells, Box):
            cells = cells.cells()
        fn = self.eval_w if kind == "w" else self.eval_x
        return [(tuple(g), fn(g)) for g in cells]

    def star_positions(self, n: int) -> list:
        """Stars of V_n in canonical rank order (materializes the tile)."""
        lvl = self.levels[n]
        if lvl.volume > MATERIALIZE_GUARD:
            raise SizeGuardError(f"level-{n} tile too large to scan")
        out = [pos for pos in lvl.box.cells() if self._word(n, pos) is STAR]
        out.sort(key=lambda p: self._stars_below(n, p))
        return out

    def link_shift(self, n: int) -> Element:
        """Product of the link centers of steps 1..n."""
        return self._link_shift_through(n)

    def _link_shift_through(self, n: int) -> Element:
        acc = self.group.identity
        for i in range(1, n + 1):
            acc = self.group.mul(acc, self.steps[i].link_center)
        return acc

    def follower_box(self, n: int) -> Box:
        """The level-(n+1) tile pulled back along the link shifts (a Folner window)."""
        shift = self.group.inv(self._link_shift_through(n))
        return self.levels[n + 1].box.translate(shift)

    # -- code decoding -------------------------------------------------------

    def realization_decode(self, n: int, assignment: Iterable, confirm: bool = True) -> Element:
        """Center of the code tile realizing a star assignment at level n.

        ``assignment`` lists one net point per star of V_n in canonical star
        order; the inverse positional code gives the tile index.
        """
        if n not in self.steps:
            raise DepthError(f"step {n + 1} not planned")
        step = self.steps[n]
        lvl = self.levels[n]
        assignment = [tuple(Fraction(c) for c in p) for p in assignment]
        if len(assignment) != lvl.stars:
            raise ValueError(f"assignment needs {lvl.stars} entries")
        index = 0
        for p in assignment:
            index = index * step.radix + step.net.index_of(p)
        if index >= step.code_count:
            raise NotRealizedError(
                f"assignment index {index} beyond the capped code block ({step.code_count})"
            )
        center = self._cand_at(step, index)
        if confirm and lvl.volume <= MATERIALIZE_GUARD:
            for rank, pos in enumerate(self.star_positions(n)):
                got = self._coded(n, self.group.mul(pos, center))
                if got != assignment[rank]:
                    raise AssertionError("decode confirmation failed")  # pragma: no cover
        return center

    # -- literal materialization (the oracle) --------------------------------

    def materialize(self, guard: int = MATERIALIZE_GUARD) -> MaterializedWords:
        """Execute the first two levels literally (explicit dictionaries).

        This follows the step definitions directly, with none of the
        arithmetic shortcuts the evaluator uses, and serves as its oracle.
        """
        lvl2 = self.levels[2]
        if lvl2.volume > guard:
            raise SizeGuardError(f"level-2 tile has {lvl2.volume} cells, over the bound")
        step1 = self.steps[1]
        group = self.group
        w1 = {}
        for g in lvl2.box.cells():
            c = self._grid_center(1, g)
            rel = tuple(x - y for x, y in zip(g, c))
            w1[g] = STAR if rel in self._seed_set else HASH
        coded = {g: w1[g] for g in step1.host_box.cells()}
        for k in range(step1.code_count):
            c = self._cand_at(step1, k)
            for p, a in enumerate(self.seed_stars):
                d = self._digit(k, self.levels[1].stars - 1 - p, step1.radix)
                coded[group.mul(a, c)] = step1.net.point_at(d)
        v11 = dict(w1)
        v11.update(coded)
        total = sum(1 for v in v11.values() if v is STAR)
        target = lvl2.stars
        floor1 = self.levels[1].stars - step1.thin_per_tile
        for j in itertools.product(
            *[range(lo, hi + 1) for lo, hi in zip(step1.tile_lo, step1.tile_hi)]
        ):
            if total <= target:
                break
            if all(cl <= x <= ch for x, cl, ch in zip(j, step1.cand_lo, step1.cand_hi)):
                continue  # host zone is never thinned
            q = self.schedule.periods(1)
            c = tuple(jj * qq for jj, qq in zip(j, q))
            budget = self.levels[1].stars - floor1
            for a in self.seed_stars:
                if total <= target or budget == 0:
                    break
                cell = group.mul(a, c)
                if v11[cell] is STAR:
                    v11[cell] = HASH
                    total -= 1
                    budget -= 1
        if total != target:
            raise CapacityError("literal thinning could not reach the target")
        stable = None
        if self.params.depth >= 2:
            zero = self.steps[2].net.point_at(0)
            stable = {g: (zero if v is STAR else v) for g, v in v11.items()}
        return MaterializedWords(lvl2.box, w1, coded, v11, stable)

    # -- reporting -----------------------------------------------------------

    def plan_report(self) -> dict:
        """Plan summary with every value exact (ints and Fractions)."""
        levels = []
        for n in range(1, self.params.depth + 2):
            lvl = self.levels[n]
            levels.append(
                {
                    "level": n,
                    "schedule_level": lvl.sched_level,
                    "box": [list(lvl.box.lows), list(lvl.box.highs)],
                    "volume": lvl.volume,
                    "stars": lvl.stars,
                    "star_density": Fraction(lvl.stars, lvl.volume),
                }
            )
        steps = []
        for n in range(1, self.params.depth + 1):
            st = self.steps[n]
            steps.append(
                {
                    "step": n + 1,
                    "host_level": st.host_level,
                    "next_level": st.next_level,
                    "code_count": st.code_count,
                    "code_exact_known": st.code_exact is not None,
                    "approximate": st.approximate,
                    "link_center": list(st.link_center),
                    "alphabet_size": st.radix,
                    "thinning": {
                        "total": st.thin_total,
                        "per_tile": st.thin_per_tile,
                    },
                }
            )
        return {
            "group": self.group.name,
            "rho": self.rho,
            "cube_dim": self.params.cube.dim,
            "depth": self.params.depth,
            "mode": self.params.mode,
            "cap": self.params.cap,
            "approximate": self.approximate,
            "seed_stars": [list(a) for a in self.seed_stars],
            "levels": levels,
            "steps": steps,
        }


def plan(params: BuildParams) -> Construction:
    """Plan a construction (alias for the constructor)."""
    return Construction(params)
