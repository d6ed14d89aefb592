"""Command-line interface: ``gkm-forge <group> <command> ...``.

Exit codes: 0 success, 1 verdict failure, 2 usage error, 3 malformed input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from .cubic_db import SIZES, generate_database, load_database
from .gkm import (
    AbstractGKMGraph,
    abbv_integrate,
    betti_numbers,
    chern_sum,
    find_generic,
    first_chern_map,
    is_positive,
    kirwan_class_test,
    load_gkm,
    parse_monomial,
    twenty_four_rule,
    validate,
    vertex_profile,
)
from .graphs import canonical_graph, generate_cubic, graph_from_json, is_cubic_connected, load_graph, read_graph6_file, to_graph6

EXIT_OK, EXIT_VERDICT, EXIT_USAGE, EXIT_INPUT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, (tuple, list)):
        return [_jsonable(y) for y in x]
    if isinstance(x, (set, frozenset)):
        return sorted(_jsonable(y) for y in x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return x


def _print(obj) -> None:
    print(json.dumps(_jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False))


def _load_any_graph(path: str):
    """GKM graph JSON when it has weights, else a plain graph (JSON or graph6)."""
    text = Path(path).read_text(encoding="utf-8", errors="replace").lstrip()
    if text.startswith("{"):
        obj = json.loads(text)
        if isinstance(obj, dict) and "d" in obj and isinstance(obj.get("edges"), list) and obj["edges"] and isinstance(obj["edges"][0], dict):
            return AbstractGKMGraph.from_json(obj)
        return graph_from_json(obj)
    return load_graph(path)


# graphs -----------------------------------------------------------------------


def cmd_graphs_gen(args) -> int:
    n = args.vertices
    if n % 2 or not 4 <= n <= 16:
        raise UsageError("--vertices must be even and between 4 and 16")
    graphs = generate_cubic(n) if n <= 10 else generate_database(n)[n]
    for g in graphs:
        print(to_graph6(g))
    print(f"# {len(graphs)} connected cubic graphs on {n} vertices", file=sys.stderr)
    return EXIT_OK


def cmd_graphs_parse(args) -> int:
    for i, g in enumerate(read_graph6_file(args.file)):
        print(f"{i + 1}\tV={g.n}\tE={len(g.edges)}\tcubic-connected={is_cubic_connected(g)}\tcanonical={to_graph6(canonical_graph(g))}")
    return EXIT_OK


# skeleton -----------------------------------------------------------------------


def cmd_skeleton_analyze(args) -> int:
    from .pipeline import analyze_skeleton
    from .skeleton import GKMSkeleton, check_k1, check_k2, defect_and_fundamental_system

    path = Path(args.graph)
    d = _ints(args.d) if args.d else None
    text = path.read_text(encoding="utf-8", errors="replace").lstrip()
    obj = json.loads(text) if text.startswith("{") else None
    if isinstance(obj, dict) and "graph" in obj:
        graph = graph_from_json(obj["graph"])
        d = d or tuple(int(x) for x in obj["d"])
    else:
        graph = load_graph(path)
    if d is None:
        raise UsageError("labels required: pass --d or a skeleton JSON with a \"d\" field")
    s = GKMSkeleton(graph, d)
    delta, fs = defect_and_fundamental_system(s)
    out = {"d": s.d, "defect": delta, "structure": s.structure}
    if fs is not None:
        out["fundamental_system"] = fs.tolist()
        out["k1"] = check_k1(fs, s.structure)
        ok, rep = check_k2(s, fs)
        out["k2"] = ok
        out["k2_failing_edges"] = [j + 1 for j in rep.failing_edges]
        if delta >= 2 and out["k1"]:
            rec = analyze_skeleton(s)
            out["bucket"] = rec.bucket
            for key in ("projection", "weights", "kirwan", "abbv", "betti"):
                if getattr(rec, key) is not None:
                    out[key] = getattr(rec, key)
    _print(out)
    return EXIT_OK


# gkm ----------------------------------------------------------------------------


def cmd_gkm_check(args) -> int:
    g = load_gkm(args.file)
    check = validate(g)
    out = {"valid": bool(check), "problems": list(check.problems), "n": g.n, "d": g.d, "vertices": g.graph.n}
    if check:
        c1 = first_chern_map(g)
        out["c1"] = {f"{u}-{v}": c1[(u, v)] for u, v in g.graph.edges}
        out["c1_sum"] = chern_sum(g)
        out["positive"] = is_positive(g)
        out["24-rule"] = twenty_four_rule(g)
    _print(out)
    return EXIT_OK if check else EXIT_VERDICT


def cmd_gkm_integrate(args) -> int:
    g = load_gkm(args.file)
    print(abbv_integrate(g, parse_monomial(args.monomial)))
    return EXIT_OK


def cmd_gkm_kirwan(args) -> int:
    g = load_gkm(args.file)
    xi = _ints(args.xi) if args.xi else find_generic(g)
    if len(xi) != g.d:
        raise UsageError(f"xi must have {g.d} entries")
    res = kirwan_class_test(g, xi)
    prof = vertex_profile(g, xi)
    out = {
        "xi": res.xi,
        "passed": res.passed,
        "index": prof.index,
        "phi": prof.phi,
        "phi_xi": prof.phi_xi,
        "betti": betti_numbers(g, xi),
    }
    if res.passed:
        out["classes"] = {str(v): gamma for v, gamma in res.classes}
    else:
        out["witness"] = res.witness
    _print(out)
    return EXIT_OK if res.passed else EXIT_VERDICT


# classify -----------------------------------------------------------------------


def cmd_classify_stage1(args) -> int:
    from .pipeline import stage1

    if args.x not in SIZES:
        raise UsageError(f"--x must be one of {SIZES}")
    graphs = load_database(args.db, [args.x])[args.x]
    hits = stage1(args.x, graphs, args.workers)
    for h in hits:
        print(f"{h.source}\t{to_graph6(h.graph)}\td={','.join(map(str, h.witness))}")
    print(f"# {len(hits)} of {len(graphs)} graphs on {args.x} vertices", file=sys.stderr)
    return EXIT_OK


def cmd_classify_full(args) -> int:
    from .pipeline import MANUAL, PipelineConfig, classify_full

    sizes = _ints(args.sizes) if args.sizes else SIZES
    try:
        config = PipelineConfig(db=args.db, sizes=sizes, out=args.out, workers=args.workers, xi_samples=args.xi_samples)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    report = classify_full(config)
    print("stage 1:", ", ".join(f"X={x}: {c}" for x, c in report["stage1_counts"].items()))
    print("buckets:", ", ".join(f"{b}={c}" for b, c in report["buckets"].items()))
    for c in report["delta2_pass_classes"]:
        print(f"  V={c['vertices']} b2={c['b2']} c1^3={c['c1^3']} members={len(c['members'])}")
    print(f"report written to {Path(args.out) / 'report.json'}")
    if report["buckets"][MANUAL]:
        print(f"flag: {report['buckets'][MANUAL]} records need manual treatment", file=sys.stderr)
    return EXIT_OK


# polytope, render, fixtures -------------------------------------------------------


def cmd_polytope_check(args) -> int:
    from .polytope import graph_from_polytope, is_reflexive, is_smooth, load_polytope

    p, edges = load_polytope(args.file)
    smooth = is_smooth(p, edges)
    out = {
        "dim": p.dim,
        "vertices": len(p.vertices),
        "facets": [{"normal": f.normal, "level": f.level} for f in p.facets],
        "smooth": smooth,
        "reflexive": is_reflexive(p),
    }
    if smooth:
        out["gkm_graph"] = graph_from_polytope(p, edges).to_json()
    _print(out)
    return EXIT_OK


def cmd_render(args) -> int:
    from .render import render_dot

    sys.stdout.write(render_dot(_load_any_graph(args.file)))
    return EXIT_OK


def cmd_verify_fixtures(args) -> int:
    from .fixtures import verify_fixtures

    results = verify_fixtures()
    for r in results:
        print(f"{'PASS' if r.ok else 'FAIL'}  {r.name}: {r.detail}")
    return EXIT_OK if all(r.ok for r in results) else EXIT_VERDICT


# parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gkm-forge", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    top = p.add_subparsers(dest="group", required=True)

    graphs = top.add_parser("graphs", help="cubic graph generation and graph6 files").add_subparsers(dest="cmd", required=True)
    q = graphs.add_parser("gen", help="print all connected cubic graphs on N vertices as graph6")
    q.add_argument("--vertices", type=int, required=True)
    q.set_defaults(fn=cmd_graphs_gen)
    q = graphs.add_parser("parse", help="summarize a graph6 file")
    q.add_argument("file")
    q.set_defaults(fn=cmd_graphs_parse)

    sk = top.add_parser("skeleton", help="GKM skeleton analysis").add_subparsers(dest="cmd", required=True)
    q = sk.add_parser("analyze", help="defect, kernel conditions and verdict for a labelled graph")
    q.add_argument("--graph", required=True, help="graph JSON, graph6 file, or skeleton JSON")
    q.add_argument("--d", help="comma-separated labels along the lexicographic edge order")
    q.set_defaults(fn=cmd_skeleton_analyze)

    gk = top.add_parser("gkm", help="abstract GKM graphs").add_subparsers(dest="cmd", required=True)
    q = gk.add_parser("check", help="validate and report first Chern class data")
    q.add_argument("file")
    q.set_defaults(fn=cmd_gkm_check)
    q = gk.add_parser("integrate", help="integrate a Chern monomial by localization")
    q.add_argument("file")
    q.add_argument("--monomial", required=True, help="e.g. c1^3, c1*c2, c3")
    q.set_defaults(fn=cmd_gkm_integrate)
    q = gk.add_parser("kirwan-test", help="run the Kirwan class test")
    q.add_argument("file")
    q.add_argument("--xi", help="generic vector, comma-separated")
    q.set_defaults(fn=cmd_gkm_kirwan)

    cl = top.add_parser("classify", help="classification pipeline").add_subparsers(dest="cmd", required=True)
    q = cl.add_parser("stage1", help="graphs admitting a label vector of defect >= 2 passing K1")
    q.add_argument("--x", type=int, required=True)
    q.add_argument("--db", help="database directory (default: $GKM_FORGE_DB or bundled)")
    q.add_argument("--workers", type=int, default=1)
    q.set_defaults(fn=cmd_classify_stage1)
    q = cl.add_parser("full", help="run both stages over all sizes and write a report")
    q.add_argument("--db", help="database directory (default: $GKM_FORGE_DB or bundled)")
    q.add_argument("--out", required=True)
    q.add_argument("--workers", type=int, default=1)
    q.add_argument("--sizes", help="comma-separated vertex counts (default: all)")
    q.add_argument("--xi-samples", type=int, default=8)
    q.set_defaults(fn=cmd_classify_full)

    po = top.add_parser("polytope", help="lattice polytopes").add_subparsers(dest="cmd", required=True)
    q = po.add_parser("check", help="smoothness, reflexivity and the induced GKM graph")
    q.add_argument("file")
    q.set_defaults(fn=cmd_polytope_check)

    q = top.add_parser("render", help="DOT rendering of a graph or GKM graph")
    q.add_argument("file")
    q.set_defaults(fn=cmd_render)

    ve = top.add_parser("verify", help="built-in reference checks").add_subparsers(dest="cmd", required=True)
    q = ve.add_parser("fixtures", help="run every reference fixture")
    q.set_defaults(fn=cmd_verify_fixtures)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"gkm-forge: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, KeyError, TypeError, OSError, UnicodeDecodeError) as exc:
        # ValueError covers every module's error class and json.JSONDecodeError
        print(f"gkm-forge: malformed input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
