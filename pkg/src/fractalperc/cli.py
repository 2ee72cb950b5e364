"""Command-line harness: generate graphs, run experiments, verify claims.

Every command is a pure function of its flags plus the seed: identical
invocations produce byte-identical JSON/CSV.  Report commands also render
a PNG figure next to the delimited output (suppress with --no-plot).

Exit codes: 0 success, 1 failed verification, 2 invalid input,
3 size-guard exceeded.  The environment variable FRACTALPERC_SEED, when
set, overrides --seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import diamond as analytic
from . import duality, generators, isoperimetry, percolation, reports
from .graph import CapabilityError, TerminalSpec, are_isomorphic, graph_json_dict

FAMILIES = ("diamond", "tri", "gasket", "gasket-quotient", "hexacarpet")


@dataclass
class RunConfig:
    """Validated flag bundle dispatched to the library modules."""

    command: str
    family: str = None
    level: int = 0
    m: int = 2
    n: int = 2
    samples: int = 1000
    seed: int = 0
    p_grid: str = "0:1:101"
    terminals: str = "corners"
    out: str = None


def parse_grid(spec):
    """'start:end:steps' -> inclusive linspace."""
    try:
        start, end, steps = spec.split(":")
        start, end, steps = float(start), float(end), int(steps)
    except Exception as exc:
        raise ValueError(f"bad grid spec {spec!r}, expected start:end:steps") from exc
    if steps < 1 or not (0 <= start <= end <= 1):
        raise ValueError(f"bad grid spec {spec!r}")
    return np.linspace(start, end, steps)


def parse_range(spec):
    """'lo:hi' -> inclusive integer range."""
    try:
        lo, hi = (int(x) for x in spec.split(":"))
    except Exception as exc:
        raise ValueError(f"bad range spec {spec!r}, expected lo:hi") from exc
    if hi < lo:
        raise ValueError(f"bad range spec {spec!r}")
    return list(range(lo, hi + 1))


def resolve_seed(args):
    env = os.environ.get("FRACTALPERC_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ValueError("FRACTALPERC_SEED must be an integer") from exc
    return args.seed


def build_family(family, level, m, n):
    """Returns (graph, terminals, json_doc, context) for one family/level."""
    if family == "diamond":
        params = generators.DiamondParams(m, n, level)
        g, t = generators.gen_diamond(params)
        doc = graph_json_dict(g, "diamond", level, t, extra={"m": m, "n": n})
        return g, t, doc, {}
    if family == "tri":
        tri = generators.gen_barycentric(level)
        t = TerminalSpec(frozenset({0}), frozenset({1}))
        doc = graph_json_dict(tri.graph, "tri", level, t, coords=tri.coords, faces=tri.faces)
        return tri.graph, t, doc, {"tri": tri}
    if family == "gasket":
        s = generators.gen_gasket(level)
        t = TerminalSpec(frozenset({0}), frozenset({1}))
        doc = graph_json_dict(s.graph, "gasket", level, t, faces=s.triangle_vertices)
        return s.graph, t, doc, {"gasket": s}
    if family == "gasket-quotient":
        s = generators.gen_gasket(level)
        col = generators.collapse_pi(s)
        t = TerminalSpec(frozenset({0}), frozenset({1}))
        doc = graph_json_dict(col.s_tilde, "gasket-quotient", level, t, faces=col.tri.faces)
        return col.s_tilde, t, doc, {"gasket": s, "collapse": col}
    if family == "hexacarpet":
        tri = generators.gen_barycentric(level)
        dm = duality.pre_dual(tri)
        doc = graph_json_dict(
            dm.dual, "hexacarpet", level, None, extra={"dual_of": f"tri_level{level}.json"}
        )
        return dm.dual, None, doc, {"tri": tri, "dual": dm}
    raise ValueError(f"unknown family {family!r} (choose from {', '.join(FAMILIES)})")


def family_terminals(args, graph, default_terminals, ctx):
    """Resolve --terminals / --side-a / --side-b into a TerminalSpec."""
    if getattr(args, "side_a", None) or getattr(args, "side_b", None):
        if not (args.side_a and args.side_b):
            raise ValueError("--side-a and --side-b must be given together")
        sa = frozenset(int(x) for x in args.side_a.split(","))
        sb = frozenset(int(x) for x in args.side_b.split(","))
        return TerminalSpec(sa, sb)
    mode = getattr(args, "terminals", "corners")
    if mode == "corners":
        if default_terminals is None:
            raise ValueError("this family has no default terminals; pass --side-a/--side-b")
        return default_terminals
    if mode != "sides":
        raise ValueError("--terminals must be corners or sides")
    tri = ctx.get("tri")
    if "collapse" in ctx:
        tri = ctx["collapse"].tri
    if tri is None and "gasket" in ctx:
        tri = generators.collapse_pi(ctx["gasket"]).tri
    if tri is None:
        raise ValueError("side terminals are defined only for tri/gasket families")
    side_a = [v for v in tri.boundary_side_vertices(0, 2) if v != 2]
    side_b = [v for v in tri.boundary_side_vertices(1, 2) if v != 2]
    if "gasket" in ctx:
        # map quotient classes back to gasket vertex ids (boundary vertices
        # are singleton classes, so the representative is exact)
        col = ctx.get("collapse") or generators.collapse_pi(ctx["gasket"])
        if ctx.get("use_gasket_ids"):
            classes = {}
            for v, c in enumerate(col.vertex_class):
                classes.setdefault(c, v)
            side_a = [classes[c] for c in side_a]
            side_b = [classes[c] for c in side_b]
    return TerminalSpec(frozenset(side_a), frozenset(side_b))


def _write_json(doc, out):
    text = json.dumps(doc) + "\n"
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _figure_path(out):
    base, _ = os.path.splitext(out)
    return base + ".png"


def cmd_generate(args):
    _, _, doc, _ = build_family(args.family, args.level, args.m, args.n)
    _write_json(doc, args.out)
    return 0


def cmd_simulate_crossing(args):
    seed = resolve_seed(args)
    g, default_t, _, ctx = build_family(args.family, args.level, args.m, args.n)
    if args.family == "gasket":
        ctx["use_gasket_ids"] = True
    t = family_terminals(args, g, default_t, ctx)
    records = percolation.threshold_records(g, t, seed, args.samples, args.workers)
    rows = [(r.sample_index, r.threshold, r.flags) for r in records]
    text = _emit_csv(args.out, ["sample_index", "threshold", "flags"], rows)
    if args.out and not args.no_plot:
        from . import plots

        plots.thresholds_plot(
            np.array([r.threshold for r in records]),
            _figure_path(args.out),
            f"{args.family} level {args.level} thresholds",
        )
    return 0


def cmd_simulate_theta(args):
    seed = resolve_seed(args)
    g, default_t, _, ctx = build_family(args.family, args.level, args.m, args.n)
    if args.family == "gasket":
        ctx["use_gasket_ids"] = True
    t = family_terminals(args, g, default_t, ctx)
    grid = parse_grid(args.p)
    curve = percolation.theta_curve(g, t, seed, args.samples, grid, args.workers)
    rows = [
        (float(p), float(v), float(se), curve.sample_count)
        for p, v, se in zip(curve.p_grid, curve.values, curve.stderr)
    ]
    _emit_csv(args.out, ["p", "value", "stderr", "samples"], rows)
    if args.out and not args.no_plot:
        from . import plots

        plots.theta_plot(curve, _figure_path(args.out), f"{args.family} level {args.level}")
    return 0


def cmd_simulate_pc_diamond(args):
    seed = resolve_seed(args)
    rows = percolation.pc_estimate_diamond(
        args.m, args.n, args.max_level, args.samples, seed, args.workers
    )
    table = [(r.level, r.median, r.median_exact, r.samples) for r in rows]
    _emit_csv(args.out, ["level", "median", "median_exact", "samples"], table)
    if args.out and not args.no_plot:
        from . import plots

        plots.pc_diamond_plot(rows, _figure_path(args.out))
    return 0


def cmd_simulate_coupling(args):
    seed = resolve_seed(args)
    grid = parse_grid(args.p)
    report = percolation.coupling_experiment(args.level, grid, args.samples, seed, args.workers)
    rows = [
        (float(p), float(a), float(b), float(c), float(se))
        for p, a, b, c, se in zip(
            report.p_grid,
            report.theta_s_tilde,
            report.theta_t_pushed,
            report.theta_t_2p,
            report.stderr,
        )
    ]
    _emit_csv(
        args.out,
        ["p", "theta_s_tilde", "theta_t_pushed", "theta_t_2p", "stderr"],
        rows,
    )
    if report.quotient_violations or report.pushed_mismatches:
        print(
            f"WARNING: pathwise violations: quotient={report.quotient_violations} "
            f"pushed={report.pushed_mismatches}",
            file=sys.stderr,
        )
    if args.out and not args.no_plot:
        from . import plots

        plots.coupling_plot(report, _figure_path(args.out))
    return 0


def cmd_simulate_cluster(args):
    seed = resolve_seed(args)
    g, _, _, _ = build_family(args.family, args.level, args.m, args.n)
    if not (0 <= args.origin < g.vertex_count):
        raise ValueError("--origin out of range")
    sizes = percolation.cluster_size_sweep(g, seed, args.samples, args.p_value, args.origin)
    rows = [(i, int(s)) for i, s in enumerate(sizes)]
    _emit_csv(args.out, ["sample_index", "size"], rows)
    if args.out and not args.no_plot:
        from . import plots

        plots.cluster_plot(
            sizes, _figure_path(args.out), f"{args.family} level {args.level} clusters at p={args.p_value}"
        )
    return 0


def cmd_trace(args):
    orbit = analytic.f_trace(args.m, args.n, args.p_value, args.levels)
    rows = list(enumerate(orbit))
    _emit_csv(args.out, ["l", "value"], rows)
    if args.out and not args.no_plot:
        from . import plots

        plots.trace_plot(orbit, _figure_path(args.out), f"orbit of p={args.p_value} under ({args.m},{args.n})")
    return 0


def _emit_csv(out, header, rows):
    if out:
        return reports.write_csv(out, header, rows)
    text = reports.csv_text(header, rows)
    sys.stdout.write(text)
    return text


class Verifier:
    def __init__(self):
        self.checks = []

    def add(self, name, passed, detail=""):
        self.checks.append({"name": name, "passed": bool(passed), "detail": str(detail)})
        status = "PASS" if passed else "FAIL"
        line = f"{status}: {name}"
        if detail:
            line += f" ({detail})"
        print(line)
        return passed

    @property
    def passed(self):
        return all(c["passed"] for c in self.checks)

    def finish(self, args, command):
        doc = {"command": command, "passed": self.passed, "checks": self.checks}
        if getattr(args, "report", None):
            with open(args.report, "w", newline="") as fh:
                fh.write(json.dumps(doc, indent=2) + "\n")
        return 0 if self.passed else 1


def cmd_verify_embedding(args):
    v = Verifier()
    for k in range(2, args.k + 1):
        try:
            cert, tri = generators.embed_diamond_in_T(k)
            detail = (
                f"diamond vertices={cert.diamond.vertex_count} edges={cert.diamond.edge_count} "
                f"host vertices={tri.graph.vertex_count}"
            )
            ok = True
            if cert.diamond.vertex_count <= 200:
                ok = are_isomorphic(generators.image_subgraph(cert), cert.diamond)
            v.add(f"embedding level {k}", ok, detail)
        except (AssertionError, ValueError) as exc:
            v.add(f"embedding level {k}", False, str(exc))
    return v.finish(args, "verify embedding")


def cmd_verify_duality(args):
    seed = resolve_seed(args)
    v = Verifier()
    t1 = generators.gen_barycentric(1)
    count = duality.exhaustive_complementarity(t1, 0, 1)
    v.add("exhaustive complementarity, level 1", True, f"{count} subsets")
    grid = parse_grid(args.p)
    for level in range(2, args.level + 1):
        tri = generators.gen_barycentric(level)
        p_star, q_star = duality.crossing_duality_thresholds(tri, 0, 1, seed, args.samples)
        equal = np.array_equal(p_star, q_star)
        v.add(
            f"primal/dual threshold identity, level {level}",
            equal,
            f"{args.samples} environments",
        )
        xor_ok = True
        for p in grid:
            crossing = p_star < p
            blocked = q_star >= p
            if not np.all(crossing ^ blocked):
                xor_ok = False
                break
        v.add(
            f"grid complementarity, level {level}",
            xor_ok,
            f"{args.samples} environments x {grid.size} grid points",
        )
        sub = min(64, args.samples)
        labels = percolation.label_block(seed, 0, sub, tri.graph.edge_count)
        direct_ok = all(
            duality.complementarity_check(tri, 0, 1, set(np.flatnonzero(labels[i] < p).tolist()))
            for i in range(sub)
            for p in (0.25, 0.5, 0.75)
        )
        v.add(f"direct XOR subsample, level {level}", direct_ok, f"{sub} environments x 3 p")
    return v.finish(args, "verify duality")


def cmd_verify_pc_table(args):
    v = Verifier()
    m_values = parse_range(args.m_range)
    n_values = parse_range(args.n_range)
    try:
        table = analytic.monotonicity_table(m_values, n_values)
        v.add(
            "critical value monotonicity",
            True,
            f"m in {m_values[0]}..{m_values[-1]}, n in {n_values[0]}..{n_values[-1]}",
        )
    except AssertionError as exc:
        v.add("critical value monotonicity", False, str(exc))
        return v.finish(args, "verify pc-table")
    if args.out:
        rows = [
            (m, n, table.entry(m, n)) for m in table.m_values for n in table.n_values
        ]
        reports.write_csv(args.out, ["m", "n", "pc"], rows)
        if not args.no_plot:
            from . import plots

            plots.pc_table_plot(table, _figure_path(args.out))
    return v.finish(args, "verify pc-table")


def cmd_verify_isoperimetry(args):
    seed = resolve_seed(args)
    v = Verifier()
    all_rows = []
    for level in range(2, args.level + 1):
        try:
            report = isoperimetry.isoperimetric_check(level, args.trials, seed)
            v.add(
                f"sampled regions, level {level}",
                True,
                f"{args.trials} regions, min ratio {report.min_ratio:.3f}",
            )
            all_rows.extend(report.rows)
        except AssertionError as exc:
            v.add(f"sampled regions, level {level}", False, str(exc))
    checked, min_ratio = isoperimetry.exhaustive_check(2, args.exhaustive_size)
    v.add(
        f"exhaustive regions <= {args.exhaustive_size} faces, level 2",
        True,
        f"{checked} regions, min ratio {min_ratio:.3f}",
    )
    if args.out and all_rows:
        reports.write_csv(
            args.out,
            ["level", "region_size", "boundary_count", "bound_value", "ratio"],
            all_rows,
        )
        if not args.no_plot:
            from . import plots

            plots.isoperimetry_plot(
                all_rows, isoperimetry.BOUNDARY_EXPONENT, isoperimetry.BOUNDARY_CONSTANT,
                _figure_path(args.out),
            )
    return v.finish(args, "verify isoperimetry")


def cmd_verify_counts(args):
    v = Verifier()
    ok = True
    for level in range(args.max_level + 1):
        tri = generators.gen_barycentric(level)
        ve, ee, fe = generators.triangulation_counts(level)
        g = tri.graph
        ok &= g.vertex_count == ve and g.edge_count == ee and len(tri.faces) == fe
        ok &= g.vertex_count - g.edge_count + len(tri.faces) == 1
    v.add("triangulation counts and Euler relation", ok, f"levels 0..{args.max_level}")
    ok = True
    for level in range(args.max_level + 1):
        s = generators.gen_gasket(level)
        if level:
            ok &= s.graph.edge_count == 18 * 6 ** (level - 1)
        ok &= len(s.triangles) == 6**level
    v.add("gasket counts", ok, f"levels 0..{args.max_level}")
    ok = True
    for level in range(1, args.max_level + 1):
        col = generators.collapse_pi(generators.gen_gasket(level))
        ok &= col.s_tilde.edge_count == 3 * 6**level
        ok &= col.tri.graph.vertex_count == generators.triangulation_counts(level)[0]
        dm = duality.pre_dual(generators.gen_barycentric(level))
        ok &= dm.dual.vertex_count == 6**level
        ok &= dm.dual.edge_count == 3 * (6**level - 2**level) // 2
    v.add("quotient and pre-dual counts", ok, f"levels 1..{args.max_level}")
    return v.finish(args, "verify counts")


def cmd_verify_quotient(args):
    v = Verifier()
    for level in range(1, args.max_level + 1):
        col = generators.collapse_pi(generators.gen_gasket(level))
        ok = are_isomorphic(col.tri.graph, generators.gen_barycentric(level).graph)
        v.add(f"collapse vs subdivision, level {level}", ok)
    return v.finish(args, "verify quotient")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fractalperc",
        description="percolation experiments on hierarchical fractal graphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_family(p):
        p.add_argument("--family", required=True, choices=FAMILIES)
        p.add_argument("--level", type=int, default=1)
        p.add_argument("--m", type=int, default=2)
        p.add_argument("--n", type=int, default=2)

    def add_run(p, samples=1000):
        p.add_argument("--samples", type=int, default=samples)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--out")
        p.add_argument("--no-plot", action="store_true")

    def add_terminals(p):
        p.add_argument("--terminals", choices=("corners", "sides"), default="corners")
        p.add_argument("--side-a")
        p.add_argument("--side-b")

    g = sub.add_parser("generate", help="emit a graph JSON file")
    add_family(g)
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    sim = sub.add_parser("simulate", help="Monte Carlo experiments")
    simsub = sim.add_subparsers(dest="subcommand", required=True)

    p = simsub.add_parser("crossing", help="per-sample bottleneck thresholds")
    add_family(p)
    add_run(p)
    add_terminals(p)
    p.set_defaults(func=cmd_simulate_crossing)

    p = simsub.add_parser("theta", help="crossing probability curve")
    add_family(p)
    add_run(p)
    add_terminals(p)
    p.add_argument("--p", default="0:1:101", help="grid start:end:steps")
    p.set_defaults(func=cmd_simulate_theta)

    p = simsub.add_parser("pc-diamond", help="per-level median thresholds")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--max-level", type=int, default=6)
    add_run(p, samples=2000)
    p.set_defaults(func=cmd_simulate_pc_diamond)

    p = simsub.add_parser("coupling", help="gasket quotient coupling curves")
    p.add_argument("--level", type=int, default=3)
    p.add_argument("--p", default="0:0.5:46", help="grid start:end:steps")
    add_run(p, samples=10000)
    p.set_defaults(func=cmd_simulate_coupling)

    p = simsub.add_parser("cluster", help="origin cluster sizes at fixed p")
    add_family(p)
    add_run(p)
    p.add_argument("--p-value", type=float, required=True)
    p.add_argument("--origin", type=int, default=0)
    p.set_defaults(func=cmd_simulate_cluster)

    ver = sub.add_parser("verify", help="structural verification suites")
    versub = ver.add_subparsers(dest="subcommand", required=True)

    p = versub.add_parser("embedding", help="diamond subgraph certificates")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--report")
    p.set_defaults(func=cmd_verify_embedding)

    p = versub.add_parser("duality", help="crossing complementarity")
    p.add_argument("--level", type=int, default=2)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p", default="0:1:101")
    p.add_argument("--report")
    p.set_defaults(func=cmd_verify_duality)

    p = versub.add_parser("pc-table", help="critical value monotonicity")
    p.add_argument("--m", dest="m_range", default="2:8")
    p.add_argument("--n", dest="n_range", default="2:8")
    p.add_argument("--out")
    p.add_argument("--no-plot", action="store_true")
    p.add_argument("--report")
    p.set_defaults(func=cmd_verify_pc_table)

    p = versub.add_parser("isoperimetry", help="region boundary lower bound")
    p.add_argument("--level", type=int, default=3)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exhaustive-size", type=int, default=6)
    p.add_argument("--out")
    p.add_argument("--no-plot", action="store_true")
    p.add_argument("--report")
    p.set_defaults(func=cmd_verify_isoperimetry)

    p = versub.add_parser("counts", help="structure count recurrences")
    p.add_argument("--max-level", type=int, default=4)
    p.add_argument("--report")
    p.set_defaults(func=cmd_verify_counts)

    p = versub.add_parser("quotient", help="collapse map fidelity")
    p.add_argument("--max-level", type=int, default=3)
    p.add_argument("--report")
    p.set_defaults(func=cmd_verify_quotient)

    p = sub.add_parser("trace", help="crossing recursion orbit")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--p-value", required=True, help="starting parameter (decimal string)")
    p.add_argument("--levels", type=int, default=30)
    p.add_argument("--out")
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(func=cmd_trace)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
