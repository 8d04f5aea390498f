"""Finitely checkable consequences of a planned construction.

Everything here is exact: densities and bound estimates are Fractions,
window comparisons are symbol-by-symbol equality, and the free-coordinate
sets are queried through the pointwise evaluator rather than materialized.

The dimension bounds are certified window estimates along the
construction's own Folner windows, not suprema over all Folner sequences.
The free-coordinate count of the upper bound is reported both bare and
scaled by the cube dimension; the two disagree for dim > 1 and the report
carries both rather than picking one.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .construction import Construction, HASH, STAR
from .errors import DepthError, SizeGuardError
from .groups import Box, Element, FiniteSubset, covers_window
from .tilings import CheckResult


@dataclass(frozen=True)
class DensityReport:
    window_id: str
    window_size: int
    star_density: Fraction
    hash_density: Fraction


def densities(word, window_id: str = "") -> DensityReport:
    """Exact star and hash densities of a finite word.

    ``word`` is a mapping position -> value or an iterable of (position,
    value) pairs, as produced by ``Construction.window``.
    """
    pairs = word.items() if hasattr(word, "items") else list(word)
    total = len(pairs) if not hasattr(word, "items") else len(word)
    if total == 0:
        raise ValueError("empty window")
    stars = sum(1 for _, v in pairs if v is STAR)
    hashes = sum(1 for _, v in pairs if v is HASH)
    return DensityReport(window_id, total, Fraction(stars, total), Fraction(hashes, total))


class FreeSet:
    """The level-n free coordinates: stars of V_{n+1}, pulled back along the
    link shifts.  Kept implicit; membership and exact size are always
    available, enumeration only when the level tile is small."""

    def __init__(self, cfg: Construction, n: int):
        if not 0 <= n <= cfg.params.depth:
            raise DepthError(f"free set level {n} needs depth >= {n}")
        self.cfg = cfg
        self.n = n
        self.shift = cfg.link_shift(n)  # J_n + shift = stars of V_{n+1}
        self.size = 0 if n == 0 else cfg.levels[n + 1].stars
        self.window_box = cfg.follower_box(n) if n >= 1 else None

    def __contains__(self, g: Element) -> bool:
        if self.n == 0:
            return False
        h = self.cfg.group.mul(tuple(g), self.shift)
        if h not in self.cfg.levels[self.n + 1].box:
            return False
        return self.cfg._word(self.n + 1, h) is STAR

    @property
    def density(self) -> Fraction:
        if self.n == 0:
            return Fraction(0)
        return Fraction(self.size, self.cfg.levels[self.n + 1].volume)

    def elements(self) -> list:
        if self.n == 0:
            return []
        inv = self.cfg.group.inv(self.shift)
        return [self.cfg.group.mul(p, inv) for p in self.cfg.star_positions(self.n + 1)]

    def restrict(self, cells) -> list:
        return [tuple(g) for g in cells if tuple(g) in self]


def free_set(cfg: Construction, n: int) -> FreeSet:
    return FreeSet(cfg, n)


def verify_free_nesting(cfg: Construction, n: int) -> CheckResult:
    """Exact set inclusion J_{n-1} within J_n (exhaustive when enumerable)."""
    if n < 1:
        raise ValueError("nesting starts at n = 1")
    smaller = FreeSet(cfg, n - 1)
    larger = FreeSet(cfg, n)
    if smaller.n == 0:
        return CheckResult(True, "J_0 is empty")
    try:
        elems = smaller.elements()
    except SizeGuardError:
        return CheckResult(None, f"J_{n-1} too large to enumerate")
    missing = [g for g in elems if g not in larger]
    if missing:
        return CheckResult(False, f"J_{n-1} not within J_{n}", missing[:10])
    return CheckResult(True, f"all {len(elems)} elements of J_{n-1} lie in J_{n}")


def lower_bound_estimate(cfg: Construction, n: int) -> Fraction:
    """Free-coordinate density of the level-n Folner window, times dim P.

    Exceeds rho * dim P by at most dim P / |window|; a certified estimate of
    the mean-dimension lower bound along these windows.
    """
    fs = FreeSet(cfg, n)
    if n < 1:
        raise ValueError("estimates start at n = 1")
    return fs.density * cfg.params.cube.dim


@dataclass(frozen=True)
class BoundEstimate:
    level: int
    window_volume: int
    class_count: int
    whole_tiles_min: int
    free_fraction: Fraction  # worst-class free coordinates / |W|
    scaled: Fraction  # free_fraction * dim P
    boundary_fraction: Fraction
    envelope_fraction: Fraction  # rho + 1/|S_n| + boundary fraction
    envelope_scaled: Fraction
    exhaustive: bool  # classes iterated one by one (else closed form)


def upper_bound_estimate(
    cfg: Construction, n: int, window: Optional[Box] = None, class_guard: int = 200_000
) -> Optional[BoundEstimate]:
    """Worst-case free-coordinate count over the translation classes of the
    level-n tiling relative to a window.

    Coordinates not fixed by every configuration agreeing on the class
    pattern are the stars of whole tiles inside the window plus everything
    in boundary-cut tiles.  Returns None when the window cannot contain a
    whole tile (inconclusive).
    """
    if not 1 <= n <= cfg.params.depth + 1:
        raise DepthError(f"level {n} not planned")
    lvl = cfg.levels[n]
    if window is None:
        if n + 1 > cfg.params.depth + 1:
            raise DepthError("default window needs the next level")
        window = cfg.levels[n + 1].box
    q = cfg.schedule.periods(lvl.sched_level)
    spans = [hi - lo + 1 for lo, hi in zip(window.lows, window.highs)]
    pts = [span - qq + 1 for span, qq in zip(spans, q)]  # center slots per axis
    if any(p <= 0 for p in pts):
        return None
    wvol = window.volume
    min_whole = 1
    for p, qq in zip(pts, q):
        min_whole *= p // qq
    class_count = 1
    for qq in q:
        class_count *= qq
    exhaustive = class_count <= class_guard
    if exhaustive:
        # Iterate every translation class and confirm the closed-form minimum.
        best = None
        for offs in itertools.product(*[range(qq) for qq in q]):
            whole = 1
            for o, qq, lo, hi, blo, bhi in zip(
                offs, q, window.lows, window.highs, lvl.box.lows, lvl.box.highs
            ):
                # centers c = o (mod qq) with the whole tile c + shape inside
                lo_c, hi_c = lo - blo, hi - bhi
                first = lo_c + ((o - lo_c) % qq)
                whole *= (hi_c - first) // qq + 1 if first <= hi_c else 0
            if best is None or whole < best:
                best = whole
        assert best == min_whole, (best, min_whole)
    free_max = min_whole * lvl.stars + (wvol - min_whole * lvl.volume)
    free_fraction = Fraction(free_max, wvol)
    boundary = Fraction(wvol - min_whole * lvl.volume, wvol)
    envelope = cfg.rho + Fraction(1, lvl.volume) + boundary
    dim = cfg.params.cube.dim
    est = BoundEstimate(
        level=n,
        window_volume=wvol,
        class_count=class_count,
        whole_tiles_min=min_whole,
        free_fraction=free_fraction,
        scaled=free_fraction * dim,
        boundary_fraction=boundary,
        envelope_fraction=envelope,
        envelope_scaled=envelope * dim,
        exhaustive=exhaustive,
    )
    assert est.free_fraction <= est.envelope_fraction
    return est


@dataclass
class MinimalityReport:
    level: int
    sampled: int
    recurrence_ok: bool
    syndetic_ok: bool
    witness: str
    mismatches: list = field(default_factory=list)
    diagnostic: str = "evidence-based, not a proof"

    @property
    def ok(self) -> bool:
        return self.recurrence_ok and self.syndetic_ok


def minimality_check(
    cfg: Construction,
    n: int,
    sample_size: int = 100,
    seed: int = 0,
    window_cells: int = 1000,
    span: int = 10**6,
) -> MinimalityReport:
    """Recurrence of the configuration along level-(n+1) tile centers.

    Samples centers (seeded), shifts the level-n window there and compares
    symbol by symbol.  Also certifies a syndeticity witness for the center
    set: the tile box itself covers the group from its centers; the witness
    is passed through ``covers_window`` explicitly when the period is small
    enough to materialize, and checked through the resolver on every window
    cell either way.
    """
    if n + 1 > cfg.params.depth + 1:
        raise DepthError(f"minimality at level {n} needs depth >= {n}")
    group = cfg.group
    base_box = cfg.levels[n].box
    if base_box.volume > 100_000:
        raise SizeGuardError("comparison window too large")
    base = {g: cfg.eval_x(g) for g in base_box.cells()}
    q = cfg.schedule.periods(cfg.levels[n + 1].sched_level)
    rng = random.Random(seed)
    shifts = [group.identity]
    while len(shifts) < sample_size:
        k = tuple(rng.randrange(-span, span + 1) for _ in range(group.rank))
        shifts.append(tuple(kk * qq for kk, qq in zip(k, q)))
    mismatches = []
    for c in shifts:
        for g, want in base.items():
            got = cfg.eval_x(group.mul(g, c))
            if got != want:
                mismatches.append((c, g, want, got))
                break
    # Syndeticity witness for the center lattice.
    side = window_cells if group.rank == 1 else max(2, int(window_cells**0.5) + 1)
    wbox = Box((0,) * group.rank, (side - 1,) * group.rank)
    syndetic_ok = True
    for w in wbox.cells():
        c = tuple(qq * (x // qq) for x, qq in zip(w, q))
        rel = tuple(x - y for x, y in zip(w, c))
        if not all(0 <= r < qq for r, qq in zip(rel, q)):
            syndetic_ok = False
            break
    witness = f"F = [0,q) box with q = {q} (resolver-certified)"
    class_count = 1
    for qq in q:
        class_count *= qq
    if class_count <= 100_000:
        F = Box((0,) * group.rank, tuple(qq - 1 for qq in q)).to_subset(group)
        W = wbox.to_subset(group)
        # centers inside F^{-1}W, found arithmetically (the product of F and
        # W is far too large to materialize just to filter it)
        kranges = [
            range(-((qq - 1 - lo) // qq), hi // qq + 1)
            for lo, hi, qq in zip(wbox.lows, wbox.highs, q)
        ]
        sample = FiniteSubset(
            group,
            (
                tuple(kk * qq for kk, qq in zip(k, q))
                for k in itertools.product(*kranges)
            ),
        )
        syndetic_ok = syndetic_ok and covers_window(F, sample, W)
        witness += "; covers_window passed explicitly"
    else:
        W = wbox.to_subset(group)
        here = FiniteSubset(group, [group.identity])
        syndetic_ok = syndetic_ok and covers_window(W, here, W)
        witness += "; period too large to materialize, window-scale witness used"
    return MinimalityReport(n, len(shifts), not mismatches, syndetic_ok, witness, mismatches)


@dataclass
class MdimRow:
    level: int
    lower: Fraction
    upper_count: Fraction
    upper_scaled: Fraction
    envelope_scaled: Fraction
    gap: Fraction
    certified_low: Fraction  # lower minus the window slack, below rho*dim


@dataclass
class MdimReport:
    rho_dim: Fraction
    rows: list
    gaps_monotone: bool
    brackets_contain_target: bool
    approximate: bool


def mdim_report(cfg: Construction, depth: Optional[int] = None) -> MdimReport:
    """Per-level bound table; the certified bracket always contains rho*dim P."""
    depth = depth or cfg.params.depth
    dim = cfg.params.cube.dim
    target = cfg.rho * dim
    rows = []
    for n in range(1, depth + 1):
        lower = lower_bound_estimate(cfg, n)
        est = upper_bound_estimate(cfg, n)
        if est is None:
            continue
        slack = Fraction(dim, cfg.levels[n + 1].volume)
        rows.append(
            MdimRow(
                level=n,
                lower=lower,
                upper_count=est.free_fraction,
                upper_scaled=est.scaled,
                envelope_scaled=est.envelope_scaled,
                gap=est.scaled - lower,
                certified_low=lower - slack,
            )
        )
    monotone = all(a.gap >= b.gap for a, b in zip(rows, rows[1:]))
    contains = all(r.certified_low <= target <= r.upper_scaled for r in rows)
    return MdimReport(target, rows, monotone, contains, cfg.approximate)
