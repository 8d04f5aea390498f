"""Command-line front end.

Subcommands: gen-tilings, build, window, verify, mdim.  Configuration lives
in an INI file; a few flags override it.  Exit codes: 0 success, 1
verification failure, 2 usage or configuration error.  All output is
deterministic for a fixed config (sampling is seeded from it).
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
from fractions import Fraction

from . import analysis
from .construction import STAR, BuildParams, Construction, render_value
from .cube import Polyhedron, make_net
from .errors import MeandimError
from .groups import Box, GROUPS
from .schedules import AxisRule, TilingSchedule
from .tilings import read_tiling, verify_partition, verify_primely_congruent, verify_congruent

USAGE_ERROR = 2
CHECK_ERROR = 1


class CliError(Exception):
    def __init__(self, message: str, code: int = USAGE_ERROR):
        super().__init__(message)
        self.code = code


def _fraction(text: str, name: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise CliError(f"field {name!r}: {text!r} is not a rational")


def load_config(path: str, overrides) -> BuildParams:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    read = parser.read(path)
    if not read:
        raise CliError(f"cannot read config file {path!r}")
    try:
        exp = parser["experiment"]
    except KeyError:
        raise CliError("config needs an [experiment] section")
    group = GROUPS.get(exp.get("group", "Z"))
    if group is None:
        raise CliError(f"field 'group': unknown group {exp.get('group')!r}")
    rho = _fraction(exp.get("rho", ""), "rho")
    if not 0 < rho < 1:
        raise CliError(f"field 'rho': {rho} outside (0,1)")
    dim = exp.getint("dim", fallback=1)
    depth = overrides.depth if overrides.depth is not None else exp.getint("depth", fallback=2)
    mode_text = overrides.mode if overrides.mode else exp.get("mode", "exact")
    mode, cap = parse_mode(mode_text)
    seed = overrides.seed if overrides.seed is not None else exp.getint("seed", fallback=0)

    sched_sec = parser["schedule"] if parser.has_section("schedule") else {}
    balance = sched_sec.get("balance", "centered")
    rules = []
    for ax in range(group.rank):
        suffix = "" if ax == 0 else str(ax + 1)
        a = int(sched_sec.get(f"seed_a{suffix}", sched_sec.get("seed_a", "1")))
        b = int(sched_sec.get(f"seed_b{suffix}", sched_sec.get("seed_b", "2")))
        growth = sched_sec.get(f"growth{suffix}", sched_sec.get("growth", "3"))
        rules.append(AxisRule.make(a, b, growth.split()))
    schedule = TilingSchedule(group, tuple(rules), balance)

    deltas = []
    if parser.has_section("nets"):
        for n in range(1, depth + 1):
            key = f"delta{n}"
            if key in parser["nets"]:
                deltas.append(_fraction(parser["nets"][key], key))
    if not deltas:
        deltas.append(Fraction(1, 2))
    while len(deltas) < depth:
        deltas.append(deltas[-1] / 2)
    nets = tuple(make_net(dim, d) for d in deltas[:depth])
    try:
        params = BuildParams(
            schedule=schedule,
            rho=rho,
            cube=Polyhedron(dim),
            nets=nets,
            depth=depth,
            mode=mode,
            cap=cap,
        )
    except ValueError as exc:
        raise CliError(str(exc))
    object.__setattr__(params, "_seed", seed)  # carried for sampling commands
    return params


def parse_mode(text: str):
    if text == "exact":
        return "exact", None
    if text.startswith("capped:"):
        try:
            cap = int(text.split(":", 1)[1])
        except ValueError:
            raise CliError(f"bad mode {text!r}")
        return "capped", cap
    raise CliError(f"mode must be 'exact' or 'capped:N', got {text!r}")


def parse_window(spec: str, group) -> Box:
    spec = spec.strip().replace(" ", "")
    parts = spec.split("x")
    if len(parts) != group.rank:
        raise CliError(f"window {spec!r} does not match group rank {group.rank}")
    lows, highs = [], []
    for part in parts:
        if not (part.startswith("[") and part.endswith("]")):
            raise CliError(f"bad window component {part!r}")
        try:
            a, b = (int(t) for t in part[1:-1].split(","))
        except ValueError:
            raise CliError(f"bad window component {part!r}")
        if a > b:
            raise CliError(f"empty window component {part!r}")
        lows.append(a)
        highs.append(b)
    return Box(lows, highs)


def _to_jsonable(obj):
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, dict):
        return {k: _to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_jsonable(v) for v in obj]
    if isinstance(obj, int) and abs(obj) >= 2**63:
        return str(obj)  # decimal string for arbitrary-precision values
    if hasattr(obj, "__dataclass_fields__"):
        return {k: _to_jsonable(getattr(obj, k)) for k in obj.__dataclass_fields__}
    return obj


def emit(text: str, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report(payload, fmt: str, out_path) -> None:
    if fmt == "json":
        emit(json.dumps(_to_jsonable(payload), sort_keys=True, indent=2) + "\n", out_path)
    else:
        lines = []

        def walk(prefix, value):
            value = _to_jsonable(value)
            if isinstance(value, dict):
                for k in sorted(value):
                    walk(f"{prefix}.{k}" if prefix else k, value[k])
            elif isinstance(value, list):
                for i, v in enumerate(value):
                    walk(f"{prefix}[{i}]", v)
            else:
                lines.append(f"{prefix} = {value}")

        walk("", payload)
        emit("\n".join(lines) + "\n", out_path)


def cmd_gen_tilings(args) -> int:
    params = load_config(args.config, args)
    sched = params.schedule
    levels = args.levels
    sched.ensure(levels)
    failures = []
    group = sched.group
    side = 10_000 if group.rank == 1 else 100
    window = Box((-side // 2,) * group.rank, (side // 2,) * group.rank).to_subset(group)

    def checkable(n):
        # the window must hold a few whole tiles along every axis
        return all(3 * q <= side for q in sched.periods(n))

    for n in range(1, levels + 1):
        if not checkable(n):
            continue
        res = verify_partition(sched.materialize_level(n), window)
        if not res:
            failures.append(f"partition level {n}: {res.detail}")
    for n in range(1, levels):
        if not checkable(n + 1):
            continue
        fine, coarse = sched.materialize_level(n), sched.materialize_level(n + 1)
        if not verify_congruent(fine, coarse, window):
            failures.append(f"congruence {n}->{n + 1}")
        if not verify_primely_congruent(fine, coarse, window):
            failures.append(f"prime congruence {n}->{n + 1}")
    nest = sched.verify_nesting(100)
    if not nest:
        failures.append(f"nesting: {nest.detail}")
    # levels must become (ball(k), 1/k)-invariant once deep enough
    from .groups import is_invariant

    for k in range(1, 4):
        K = group.ball(k)
        found = None
        for n in range(1, levels + 1):
            if sched.volume(n) > 20_000:
                break
            if is_invariant(sched.level_box(n).to_subset(group), K, Fraction(1, k)):
                found = n
                break
        if found is None:
            failures.append(f"invariance: no level through {levels} is (ball({k}), 1/{k})-invariant")
    if args.imported:
        with open(args.imported) as fh:
            tiling = read_tiling(fh.read())
        W = tiling.support.to_subset(group)
        res = verify_partition(tiling, W)
        if not res:
            failures.append(f"imported tiling: {res.detail}: {res.violations[:5]}")
    text = sched.serialize(levels)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    summary = [f"schedule levels = {levels}", f"checks failed = {len(failures)}"]
    summary += failures
    sys.stdout.write("\n".join(summary) + "\n")
    return CHECK_ERROR if failures else 0


def cmd_build(args) -> int:
    params = load_config(args.config, args)
    cfg = Construction(params)
    _report(cfg.plan_report(), args.format, args.out)
    return 0


def cmd_window(args) -> int:
    params = load_config(args.config, args)
    cfg = Construction(params)
    box = parse_window(args.window, cfg.group)
    kind = args.what
    values = dict(cfg.window(box, kind))
    lines = []
    if cfg.group.rank == 1:
        row = " ".join(render_value(values[(x,)]) for x in range(box.lows[0], box.highs[0] + 1))
        lines.append(row)
    else:
        for x in range(box.lows[0], box.highs[0] + 1):
            lines.append(
                " ".join(
                    render_value(values[(x, y)])
                    for y in range(box.lows[1], box.highs[1] + 1)
                )
            )
    emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_verify(args) -> int:
    params = load_config(args.config, args)
    cfg = Construction(params)
    seed = getattr(params, "_seed", 0)
    results = run_verification(cfg, seed)
    lines = [f"{'PASS' if ok else 'FAIL'} {name}{': ' + note if note else ''}" for name, ok, note in results]
    emit("\n".join(lines) + "\n", args.out)
    return 0 if all(ok for _, ok, _ in results) else CHECK_ERROR


def run_verification(cfg: Construction, seed: int = 0) -> list:
    """The invariant battery at the configured depth; list of (name, ok, note)."""
    out = []

    def check(name, fn):
        try:
            ok, note = fn()
        except MeandimError as exc:
            ok, note = False, f"{type(exc).__name__}: {exc}"
        out.append((name, ok, note))

    def sandwich():
        rho = cfg.rho
        for n in range(1, cfg.params.depth + 2):
            lvl = cfg.levels[n]
            d = Fraction(lvl.stars, lvl.volume)
            if not rho < d <= rho + Fraction(1, lvl.volume):
                return False, f"level {n}: {d}"
        return True, f"levels 1..{cfg.params.depth + 1}"

    check("density sandwich", sandwich)

    def no_star():
        box = cfg.levels[min(2, cfg.params.depth + 1)].box
        if box.volume > 50_000:
            box = cfg.levels[1].box
        bad = [g for g, v in cfg.window(box, "w") if v is STAR]
        return (not bad), f"{box.volume} cells"

    check("no star in the limit", no_star)

    def oracle():
        if cfg.levels[2].volume > 200_000:
            return True, "skipped (level-2 tile too large)"
        words = cfg.materialize()
        for g in words.window.cells():
            if cfg._word(2, g) is not words.v11[g] and cfg._word(2, g) != words.v11[g]:
                return False, f"mismatch at {g}"
        if words.stable is not None:
            for g in words.window.cells():
                if cfg.eval_w(g) != words.stable[g]:
                    return False, f"stabilized mismatch at {g}"
        return True, f"{words.window.volume} cells"

    check("evaluator equals literal materialization", oracle)

    def linking():
        if cfg.params.depth < 2:
            return True, "needs depth >= 2, skipped"
        h = cfg.steps[2].link_center
        box = cfg.levels[2].box
        if box.volume > 50_000:
            return True, "skipped (window too large)"
        for pos in box.cells():
            lhs = cfg._word(3, cfg.group.mul(pos, h))
            rhs = cfg._word(2, pos)
            if lhs is not rhs and lhs != rhs:
                return False, f"mismatch at {pos}"
        return True, f"{box.volume} cells"

    check("level words reappear at the link tile", linking)

    def nesting():
        res = analysis.verify_free_nesting(cfg, min(2, cfg.params.depth))
        return bool(res), res.detail

    check("free set nesting", nesting)

    def tile_floors():
        if cfg.levels[2].volume > 200_000:
            return True, "skipped (level-2 tile too large)"
        words = cfg.materialize()
        st, lvl1 = cfg.steps[1], cfg.levels[1]
        group, rho = cfg.group, cfg.rho
        import itertools

        q = cfg.schedule.periods(1)
        for j in itertools.product(
            *[range(lo, hi + 1) for lo, hi in zip(st.tile_lo, st.tile_hi)]
        ):
            if all(cl <= x <= ch for x, cl, ch in zip(j, st.cand_lo, st.cand_hi)):
                continue
            c = tuple(jj * qq for jj, qq in zip(j, q))
            stars = sum(1 for s in lvl1.box.cells() if words.v11[group.mul(s, c)] is STAR)
            if not Fraction(stars, lvl1.volume) > rho - Fraction(1, lvl1.volume):
                return False, f"tile at {c} thinned below its floor"
        return True, "every thinned tile stays above its floor"

    check("per-tile density floors", tile_floors)

    def top_descent():
        box = cfg.levels[1].box
        top = cfg.params.depth + 1
        for g in box.cells():
            via_top = cfg._word(top, g)
            direct = cfg.eval_w(g)
            if via_top is not direct and via_top != direct:
                return False, f"mismatch at {g}"
        return True, f"{box.volume} cells"

    check("top-level descent agrees with stabilized values", top_descent)

    def realization():
        import itertools as it

        step = cfg.steps[1]
        if cfg.levels[1].stars > 12:
            return True, "skipped (too many seed stars)"
        seen = set()
        for combo in it.product(range(step.radix), repeat=cfg.levels[1].stars):
            pts = [step.net.point_at(d) for d in combo]
            seen.add(cfg.realization_decode(1, pts))
        want = step.radix ** cfg.levels[1].stars
        return len(seen) == want, f"{len(seen)} distinct centers"

    check("level-1 assignments all realized", realization)

    def bounds():
        rep = analysis.mdim_report(cfg)
        ok = rep.gaps_monotone and rep.brackets_contain_target
        return ok, f"{len(rep.rows)} levels, target {rep.rho_dim}"

    check("bound brackets and monotone gaps", bounds)

    def minimal():
        rep = analysis.minimality_check(cfg, 1, sample_size=20, seed=seed)
        return rep.ok, f"{rep.sampled} centers"

    check("minimality diagnostic (level 1)", minimal)

    return out


def cmd_mdim(args) -> int:
    params = load_config(args.config, args)
    cfg = Construction(params)
    rep = analysis.mdim_report(cfg)
    payload = {
        "target_rho_dim": rep.rho_dim,
        "gaps_monotone": rep.gaps_monotone,
        "brackets_contain_target": rep.brackets_contain_target,
        "approximate": rep.approximate,
        "rows": rep.rows,
    }
    _report(payload, args.format, args.out)
    return 0 if rep.gaps_monotone and rep.brackets_contain_target else CHECK_ERROR


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="meandim", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", required=True, help="experiment config (INI)")
        sp.add_argument("--depth", type=int, default=None)
        sp.add_argument("--mode", default=None, help="exact | capped:N")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--out", default=None)
        sp.add_argument("--format", choices=("text", "json"), default="text")

    sp = sub.add_parser("gen-tilings", help="generate and verify a tiling schedule")
    common(sp)
    sp.add_argument("--levels", type=int, default=5)
    sp.add_argument("--imported", default=None, help="explicit tiling file to verify")
    sp.set_defaults(fn=cmd_gen_tilings)

    sp = sub.add_parser("build", help="plan a construction and report it")
    common(sp)
    sp.set_defaults(fn=cmd_build)

    sp = sub.add_parser("window", help="dump the configuration on a window")
    common(sp)
    sp.add_argument("--window", required=True, help="[a,b] or [a,b]x[c,d]")
    sp.add_argument("--what", choices=("w", "x"), default="w")
    sp.set_defaults(fn=cmd_window)

    sp = sub.add_parser("verify", help="run the invariant battery")
    common(sp)
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("mdim", help="mean-dimension bound report")
    common(sp)
    sp.set_defaults(fn=cmd_mdim)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code
    except MeandimError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return CHECK_ERROR


if __name__ == "__main__":
    sys.exit(main())
