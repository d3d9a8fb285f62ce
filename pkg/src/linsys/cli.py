"""Command line entry point: analyze, verify, search, export-svg, levi-dump.

Exit codes: 0 success / all checks hold, 1 a check was violated,
2 invalid input.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import formats, harness, solvers
from .core import LinearSystem, LinearSystemError, degrees, is_intersecting, uniformity
from .levi import edge_list_dump, levi_graph, levi_planarity_of
from .segments import (
    SegmentError,
    SegmentSystem,
    contains_triangle,
    enumerate_classes,
    export_drawing,
)

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def load(path: str) -> tuple[LinearSystem, SegmentSystem | None]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(str(exc)) from exc
    try:
        kind = formats.sniff_format(text)
        if kind == "segsys":
            ss = formats.parse_segsys(text)
            return ss.linear_system, ss
        return formats.parse_linsys(text), None
    except (formats.ParseError, LinearSystemError, SegmentError) as exc:
        lineno = getattr(exc, "lineno", None)
        where = f"{path}:{lineno}" if lineno else path
        raise InputError(f"{where}: {type(exc).__name__}: {exc}") from exc


def analyze_pairs(ls: LinearSystem, ss: SegmentSystem | None, budget: int) -> list[tuple[str, object]]:
    try:
        tau, tw = solvers.transversal_number(ls, budget)
        tau_val, tau_exact, transversal = tau, True, tw.points
    except solvers.BudgetExceeded as exc:
        tau_val, tau_exact, transversal = f"{exc.lower}..{exc.upper}", False, exc.witness
    try:
        nu2, pw = solvers.two_packing_number(ls, budget)
        nu2_val, nu2_exact, packing = nu2, True, pw.lines
    except solvers.BudgetExceeded as exc:
        nu2_val, nu2_exact, packing = f"{exc.lower}..{exc.upper}", False, exc.witness
    levi = levi_planarity_of(ls, realized=ss is not None)
    pairs: list[tuple[str, object]] = [
        ("format", "segsys" if ss is not None else "linsys"),
        ("points", len(ls.points)),
        ("lines", len(ls.lines)),
        ("uniform", uniformity(ls)),
        ("intersecting", is_intersecting(ls)),
        ("max_degree", degrees(ls).max_degree),
        ("tau", tau_val),
        ("tau_exact", tau_exact),
        ("transversal", transversal),
        ("nu2", nu2_val),
        ("nu2_exact", nu2_exact),
        ("packing", packing),
        ("levi_vertices", levi.vertices),
        ("levi_edges", levi.edges),
        ("levi_girth", levi.girth),
        ("levi_planar", levi.planar),
        ("levi_edge_bound", levi.edge_bound),
        ("levi_verdict", levi.verdict),
    ]
    if ss is not None:
        tri = contains_triangle(ss)
        pairs += [("r", ss.r), ("triangle", tri is not None)]
    return pairs


def cmd_analyze(args) -> int:
    ls, ss = load(args.path)
    pairs = analyze_pairs(ls, ss, args.budget)
    out = formats.machine_lines(pairs) if args.machine else formats.human_lines(pairs)
    sys.stdout.write(out)
    return EXIT_OK


def cmd_verify(args) -> int:
    ls, ss = load(args.path)
    try:
        only = harness.resolve_ids(args.theorems)
    except KeyError as exc:
        raise InputError(str(exc)) from exc
    if ss is not None:
        report = harness.check_segment_family(ss, args.budget, only)
    else:
        evidence = harness.Evidence.REALIZED if args.assume_straight else None
        report = harness.check_linear_system(ls, evidence, args.budget, only)
    sys.stdout.write(formats.render_report(report, machine=args.machine))
    return EXIT_VIOLATION if report.violated else EXIT_OK


def _run_shard(params: dict):
    return enumerate_classes(**params)


def cmd_search(args) -> int:
    if args.r < 2 or args.box < 1:
        raise InputError("need --r >= 2 and --box >= 1")
    if args.shard is not None and not 0 <= args.shard < args.shards:
        raise InputError(f"--shard must be in 0..{args.shards - 1}")
    base = dict(
        r=args.r, max_lines=args.max_lines, box=args.box,
        require_triangle=args.require_triangle, pencils=args.pencils,
        shards=args.shards, budget=args.budget,
    )
    shard_ids = [args.shard] if args.shard is not None else list(range(args.shards))
    jobs = [dict(base, shard=i) for i in shard_ids]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            parts = list(pool.map(_run_shard, jobs))
    else:
        parts = [_run_shard(j) for j in jobs]
    result = parts[0]
    for part in parts[1:]:
        result = result.merge(part)

    best, extremal = result.best_non_pencil()
    pencil_sizes = [result.classes[k] for k in result.pencil_keys]
    pairs: list[tuple[str, object]] = [
        ("r", args.r),
        ("box", args.box),
        ("max_lines", args.max_lines if args.max_lines is not None else "any"),
        ("require_triangle", args.require_triangle),
        ("pencils", args.pencils),
        ("shard", "all" if args.shard is None else f"{args.shard}/{args.shards}"),
        ("complete", result.complete),
        ("classes", len(result.classes)),
    ]
    pairs += [(f"classes_{size}", n) for size, n in result.counts().items()]
    pairs += [
        ("pencil_max", max(pencil_sizes, default=0)),
        ("best", best),
        ("extremal", len(extremal)),
    ]
    out = formats.machine_lines(pairs)
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        for i, ss in enumerate(extremal):
            name = f"r{args.r}-box{args.box}-{best}lines-{i:03d}.segsys"
            (outdir / name).write_text(formats.serialize_segsys(ss), encoding="utf-8")
            out += f"wrote\t{name}\n"
    if args.list:
        for ss in result.systems():
            out += "system\t" + " ".join(
                f"{s.base[0]},{s.base[1]}:{s.dir[0]},{s.dir[1]}" for s in ss.segments
            ) + "\n"
    sys.stdout.write(out)
    return EXIT_OK


def cmd_export_svg(args) -> int:
    ls, ss = load(args.path)
    if ss is None:
        raise InputError("SVG export needs a segsys input; linsys files carry no embedding")
    transversal = None
    if args.show_transversal:
        _, w = solvers.transversal_number(ls, args.budget)
        transversal = w.points
    svg = formats.render_svg(export_drawing(ss, transversal))
    Path(args.out).write_text(svg, encoding="utf-8")
    return EXIT_OK


def cmd_levi_dump(args) -> int:
    ls, _ = load(args.path)
    sys.stdout.write(edge_list_dump(levi_graph(ls)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="linsys", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def budget_arg(sp):
        sp.add_argument("--budget", type=int, default=solvers.DEFAULT_BUDGET,
                        help="search node budget (default %(default)s)")

    a = sub.add_parser("analyze", help="print invariants of an instance")
    a.add_argument("path")
    a.add_argument("--machine", action="store_true", help="key<TAB>value output")
    budget_arg(a)
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="run the theorem checks on an instance")
    v.add_argument("path")
    v.add_argument("--theorems", default="all", help="comma-separated check ids or 'all'")
    v.add_argument("--machine", action="store_true")
    v.add_argument("--assume-straight", action="store_true",
                   help="treat a linsys input as having a straight-line realization")
    budget_arg(v)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", help="enumerate intersecting r-segment systems in a box")
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--box", type=int, required=True, help="half-width B of [-B, B]^2")
    s.add_argument("--max-lines", type=int, default=None)
    s.add_argument("--require-triangle", action="store_true")
    s.add_argument("--pencils", choices=("representative", "all", "none"), default="representative")
    s.add_argument("--shards", type=int, default=1)
    s.add_argument("--shard", type=int, default=None, help="run only this shard")
    s.add_argument("--jobs", type=int, default=1, help="worker processes for shards")
    s.add_argument("--budget", type=int, default=None, help="node budget per shard")
    s.add_argument("--out", default=None, help="directory for extremal segsys files")
    s.add_argument("--list", action="store_true", help="print every class found")
    s.set_defaults(func=cmd_search)

    e = sub.add_parser("export-svg", help="draw a segment system")
    e.add_argument("path")
    e.add_argument("out")
    e.add_argument("--show-transversal", action="store_true")
    budget_arg(e)
    e.set_defaults(func=cmd_export_svg)

    d = sub.add_parser("levi-dump", help="Levi graph as an edge list")
    d.add_argument("path")
    d.set_defaults(func=cmd_levi_dump)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
