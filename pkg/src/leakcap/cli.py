"""Command-line entry point: ``leakcap {region,blackwell,fme,verify}``.

Every file written starts with a header echoing the invocation and seed, so
re-running the header's command line reproduces the file byte for byte.
JSON files carry the same information under a top-level ``header`` key.
"""

from __future__ import annotations

import argparse
import json
import math
import shlex
import sys
from dataclasses import dataclass
from pathlib import Path

PROG = "leakcap"


class UsageError(Exception):
    """Bad input: reported on stderr with exit status 2."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    argv: tuple
    seed: int
    out: Path

    @property
    def invocation(self) -> str:
        return " ".join(shlex.quote(a) for a in (PROG,) + self.argv)

    def header_lines(self) -> list:
        return [f"invocation: {self.invocation}", f"seed: {self.seed}"]

    def header_dict(self) -> dict:
        return {"invocation": self.invocation, "seed": self.seed}


def _write(cfg: RunConfig, name: str, text: str) -> Path:
    cfg.out.mkdir(parents=True, exist_ok=True)
    path = cfg.out / name
    path.write_text(text)
    return path


def _write_commented(cfg: RunConfig, name: str, body: str, marker: str = "#") -> Path:
    head = "".join(f"{marker} {ln}\n" for ln in cfg.header_lines())
    return _write(cfg, name, head + body)


def _json_safe(o):
    if isinstance(o, float) and math.isinf(o):
        return "inf" if o > 0 else "-inf"
    if isinstance(o, dict):
        return {k: _json_safe(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_json_safe(v) for v in o]
    return o


def _write_json(cfg: RunConfig, name: str, payload: dict) -> Path:
    doc = {"header": cfg.header_dict(), **_json_safe(payload)}
    return _write(cfg, name, json.dumps(doc, indent=1, sort_keys=True) + "\n")


def _svg(cfg: RunConfig, curves: dict, size: int = 320) -> str:
    """Minimal polyline rendering of staircases in the unit-ish rate square."""
    top = max([c.max_r1 for c in curves.values()] + [c.max_r2 for c in curves.values()] + [1e-9])
    scale = (size - 20) / top
    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">']
    lines += [f"<!-- {ln} -->" for ln in cfg.header_lines()]
    palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
    for k, (name, c) in enumerate(curves.items()):
        pts = []
        for r1, r2 in c.points:
            pts.append(f"{10 + r1 * scale:.2f},{size - 10 - r2 * scale:.2f}")
        col = palette[k % len(palette)]
        lines.append(f'<polyline fill="none" stroke="{col}" points="{" ".join(pts)}"><title>{name}</title></polyline>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _leak(text: str) -> float:
    from .regions import parse_leak

    try:
        return parse_leak(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _load_channel(source: str):
    from .channel import ChannelError, blackwell, load_channel

    if source == "blackwell":
        return blackwell()
    try:
        return load_channel(source)
    except FileNotFoundError:
        raise UsageError(f"channel file not found: {source}") from None
    except (ChannelError, ValueError) as exc:
        raise UsageError(f"bad channel file {source}: {exc}") from None


def _fmt_l(v: float) -> str:
    return "inf" if math.isinf(v) else f"{v:g}"


# ---------------------------------------------------------------- commands


def cmd_region(args, cfg: RunConfig) -> int:
    from .regions import LeakagePair, RegionId, evaluate_region
    from .channel import induce_joint
    from .union import SearchBudget, union_search

    c = _load_channel(args.channel)
    try:
        rid = RegionId.parse(args.id)
        budget = SearchBudget(args.grid, args.samples, args.refine, args.seed)
        L = LeakagePair(args.l1, args.l2)
        sizes = None
        if args.aux_size is not None:
            sizes = {a: (c.x_size if a == "X" else args.aux_size) for a in rid.signature}
        via = tuple(a for a in args.markov_via.split(",") if a) if args.markov_via else None
        res = union_search(rid, c, L, budget, sizes, markov_via=via)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    stem = f"region_{rid.tag}_l1_{_fmt_l(L.l1)}_l2_{_fmt_l(L.l2)}"
    _write_commented(cfg, f"{stem}.csv", res.curve.to_csv())
    polys = {sid: evaluate_region(rid.tag, induce_joint(j, c), L).to_dict() for sid, j in sorted(res.sources.items())}
    _write_json(cfg, f"{stem}_polytopes.json", {"region": rid.tag, "polytopes": polys})
    _write_json(cfg, f"{stem}_provenance.json", res.provenance_table())
    if args.svg:
        _write(cfg, f"{stem}.svg", _svg(cfg, {stem: res.curve}))
    print(f"{rid.tag}: {len(res.curve)} frontier points, max r1 {res.curve.max_r1:.6f}, "
          f"max r2 {res.curve.max_r2:.6f} -> {cfg.out}")
    return 0


STUDY_LEAKAGES = (0.0, 0.05, 0.1, 0.4)


def cmd_blackwell(args, cfg: RunConfig) -> int:
    import numpy as np

    from .blackwell import (
        REFERENCE_THRESHOLDS,
        BlackwellParams,
        bwc_frontier,
        bwc_saturation_details,
        bwc_shapes,
        bwc_sumrate_curve,
    )
    from .regions import INF, LeakagePair

    res = 1.0 / args.grid
    families = {
        "l2inf": lambda v: LeakagePair(v, INF),
        "l1inf": lambda v: LeakagePair(INF, v),
        "equal": lambda v: LeakagePair(v, v),
    }
    for fam, mk in families.items():
        curves = {}
        for v in STUDY_LEAKAGES:
            f = bwc_frontier(mk(v), resolution=res)
            name = f"frontier_{fam}_{v:g}"
            _write_commented(cfg, f"{name}.csv", f.to_csv())
            curves[name] = f
        f = bwc_frontier(LeakagePair(INF, INF), resolution=res)
        curves["frontier_unconstrained"] = f
        if fam == "equal":
            _write_commented(cfg, "frontier_unconstrained.csv", f.to_csv())
        if args.svg:
            _write(cfg, f"frontiers_{fam}.svg", _svg(cfg, curves))

    grid = np.round(np.arange(0.0, args.lmax + 1e-12, args.lstep), 10)
    curve = bwc_sumrate_curve(list(grid))
    _write_commented(cfg, "sumrate.csv", curve.to_csv())

    p = BlackwellParams(args.alpha, args.beta)
    shapes = {k: v.to_dict() for k, v in bwc_shapes(p).items()}
    _write_json(cfg, "shapes.json", {"alpha": p.alpha, "beta": p.beta, "shapes": shapes})

    rows = ["L_bits,threshold_bits,alpha,beta,reference_bits"]
    for v in STUDY_LEAKAGES:
        d = bwc_saturation_details(v)
        rows.append(f"{v:g},{d.threshold:.6f},{d.alpha:.6f},{d.beta:.6f},{REFERENCE_THRESHOLDS[v]:.5f}")
    _write_commented(cfg, "thresholds.csv", "\n".join(rows) + "\n")
    print(f"sum-rate breakpoint {curve.breakpoint:.5f} bits, plateau {curve.plateau:.7f} bits -> {cfg.out}")
    return 0


def cmd_fme(args, cfg: RunConfig) -> int:
    from .fme import (
        AUX_ORDER,
        achievability_system,
        canonical_equal,
        diff_systems,
        eliminate_all,
        inner_bound_reference,
        parse_system,
        render_system,
    )
    from .fme.ops import prune_implied
    from .fme.system import ParseError

    def read(path):
        try:
            return parse_system(Path(path).read_text())
        except FileNotFoundError:
            raise UsageError(f"system file not found: {path}") from None
        except ParseError as exc:
            raise UsageError(f"{path}: {exc}") from None

    if (args.builtin is None) == (args.system is None):
        raise UsageError("give exactly one of --system FILE or --builtin achievability")
    if args.builtin is not None:
        sys_ = achievability_system()
        default_order, default_ref = AUX_ORDER, inner_bound_reference()
    else:
        sys_ = read(args.system)
        default_order, default_ref = (), None
    order = [v for chunk in (args.eliminate or []) for v in chunk.split(",") if v] or list(default_order)
    unknown = [v for v in order if v not in sys_.variables]
    if unknown:
        raise UsageError(f"cannot eliminate unknown variable(s): {', '.join(unknown)}")
    derived = eliminate_all(sys_, order)
    if args.prune == "implied":
        derived = prune_implied(derived)
    _write_commented(cfg, "derived.txt", render_system(derived) + "\n")
    ref = read(args.reference) if args.reference else default_ref
    if ref is None:
        print(f"derived {len(derived)} inequalities -> {cfg.out / 'derived.txt'}")
        return 0
    equal = canonical_equal(derived, ref)
    only_d, only_r = diff_systems(derived, ref)
    verdict = {
        "canonical_equal": equal,
        "derived_rows": len(derived),
        "reference_rows": len(ref),
        "only_in_derived": [str(q) for q in only_d],
        "only_in_reference": [str(q) for q in only_r],
    }
    _write_json(cfg, "verdict.json", verdict)
    print(f"canonical_equal: {str(equal).lower()} ({len(derived)} derived rows, {len(ref)} reference rows)")
    return 0 if equal else 1


def cmd_verify(args, cfg: RunConfig) -> int:
    from . import equivalence as eq
    from .fme.battery import soundness_battery

    c = _load_channel(args.channel) if args.channel else None
    n = args.trials
    seed = args.seed

    def pick(default):
        return default if n is None else n

    rep = eq.SuiteReport(seed=seed)
    rep.checks.append(eq.marton_suite(pick(20), seed))
    rep.checks.append(eq.liu_suite(pick(20), seed))
    for tgt in eq.SD_CORNERS:
        rep.checks.append(eq.sd_corner_suite(tgt, pick(20), seed, c))
    rep.checks.append(eq.dm_ck_suite(pick(20), seed))
    rep.checks.append(eq.dm_degmsg_suite(pick(20), seed))
    rep.checks.append(eq.lift_suite_secret_pair(pick(100), seed, c))
    rep.checks.append(eq.lift_suite_confidential(pick(100), seed))
    rep.checks.append(eq.deterministic_suite(pick(20), seed, c))
    rep.checks.append(eq.saturation_battery(pick(200), seed))
    rep.checks.append(eq.sd_substitution_battery(pick(100), seed, c))
    fb = soundness_battery(pick(200), 500, seed)
    rep.checks.append(eq.CheckResult("fme_soundness", fb.systems, float(fb.disagreements), fb.passed,
                                     f"{fb.points} points, {fb.disagreements} disagreements"))
    _write_json(cfg, "verify_report.json", rep.to_dict())
    for ch in rep.checks:
        status = "PASS" if ch.passed else "FAIL"
        print(f"{status} {ch.name} trials={ch.trials} max_dev={ch.max_deviation:.3g} {ch.detail}".rstrip())
    if not rep.passed:
        print(f"failed checks: {', '.join(rep.failing)}", file=sys.stderr)
        return 1
    return 0


# ------------------------------------------------------------------ parser


def _common(p: argparse.ArgumentParser, seed=True):
    p.add_argument("--out", default=".", help="output directory (default: current)")
    if seed:
        p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog=PROG, description="Leakage-constrained broadcast rate regions.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("region", help="frontier of a region's union over sampled input laws")
    p.add_argument("--channel", required=True, help="channel JSON file, or 'blackwell'")
    p.add_argument("--id", required=True, help="region id, e.g. inner, sd, det")
    p.add_argument("--l1", type=_leak, default=0.0, help="leakage allowance 1 in bits, or inf")
    p.add_argument("--l2", type=_leak, default=0.0, help="leakage allowance 2 in bits, or inf")
    p.add_argument("--grid", type=int, default=4, help="simplex grid steps (default 4)")
    p.add_argument("--samples", type=int, default=200, help="random input laws (default 200)")
    p.add_argument("--refine", type=int, default=20, help="local refinement iterations (default 20)")
    p.add_argument("--aux-size", type=int, default=None, help="alphabet size of every auxiliary")
    p.add_argument("--markov-via", default=None,
                   help="sample only laws where X depends on the auxiliaries through these axes, e.g. V")
    p.add_argument("--svg", action="store_true", help="also write an SVG polyline")
    _common(p)

    p = sub.add_parser("blackwell", help="Blackwell channel study: frontiers, sum rate, thresholds")
    p.add_argument("--grid", type=int, default=500, help="frontier grid steps per unit rate (default 500)")
    p.add_argument("--lmax", type=float, default=0.5, help="largest leakage on the sum-rate grid")
    p.add_argument("--lstep", type=float, default=0.01, help="sum-rate grid step")
    p.add_argument("--alpha", type=float, default=1 / 3, help="P(X=0) for the shapes file")
    p.add_argument("--beta", type=float, default=1 / 3, help="P(X=1) for the shapes file")
    p.add_argument("--svg", action="store_true", help="also write SVG polylines")
    _common(p)

    p = sub.add_parser("fme", help="Fourier-Motzkin elimination on an inequality system")
    p.add_argument("--system", help="inequality system file")
    p.add_argument("--builtin", choices=["achievability"], help="use a built-in system")
    p.add_argument("--eliminate", action="append", help="variables to eliminate (comma list, repeatable)")
    p.add_argument("--reference", help="reference system file for the equality verdict")
    p.add_argument("--prune", choices=["syntactic", "implied"], default="implied",
                   help="pruning strength (default implied)")
    _common(p)

    p = sub.add_parser("verify", help="run the equivalence suites and invariant batteries")
    p.add_argument("--trials", type=int, default=None, help="trials per suite (default: per-suite)")
    p.add_argument("--channel", default=None, help="channel for the channel-specific suites")
    _common(p)
    return ap


COMMANDS = {"region": cmd_region, "blackwell": cmd_blackwell, "fme": cmd_fme, "verify": cmd_verify}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    cfg = RunConfig(args.command, tuple(argv), getattr(args, "seed", 0), Path(args.out))
    try:
        return COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        print(f"{PROG} {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
