"""Command-line surface.

Subcommands: generate, build, query, batch, check, bench, render.
Exit codes: 0 ok, 1 usage, 2 parse/validation, 3 query error,
4 check mismatch.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import pickle
import random
import statistics
import sys
import time
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .errors import EngineError
from .geometry import INFINITE, Point, Segment, format_rational, on_segment
from .graph_build import BASIC, ENHANCED
from .oracle import UnweightedOracle, WeightedOracle
from .query import (
    FULL,
    ON_DEMAND,
    PreprocessedIndex,
    QueryResult,
    batch_query,
    dijkstra_from,
    preprocess,
    query,
)
from .render import LAYERS, render_svg
from .scene import (
    POLYGONAL,
    RECTILINEAR_WEIGHTED,
    Scene,
    SceneError,
    generate_scene,
    load_scene,
    save_scene,
)
from .weighted import WeightedIndex, preprocess_weighted, weighted_query

INDEX_FORMAT_VERSION = 1

_USAGE_EXIT = 1
_VALIDATION_EXIT = 2
_QUERY_EXIT = 3
_CHECK_EXIT = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(_USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _coord_json(v):
    if isinstance(v, Fraction):
        return format_rational(v)
    return v


def _point_json(p: Point):
    return [_coord_json(p.x), _coord_json(p.y)]


def result_to_doc(res: QueryResult) -> dict:
    doc = {"length": format_rational(res.length), "kind": res.kind}
    if res.path is not None:
        doc["path"] = [_point_json(p) for p in res.path]
    return doc


def _parse_point(text: str) -> Point:
    try:
        xs, ys = text.split(",")
        return Point(int(xs), int(ys))
    except Exception as exc:
        raise SceneError("PARSE_ERROR", f"bad point {text!r}") from exc


def _scene_hash(scene: Scene) -> str:
    return hashlib.sha256(save_scene(scene)).hexdigest()


def _write_out(text: str, out: Optional[str]):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- subcommands ----------------------------------------------------------


def cmd_generate(args) -> int:
    scene = generate_scene(args.n, args.h, args.mode, seed=args.seed)
    data = save_scene(scene)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.write(data.decode())
    return 0


def _load_scene_file(path: str) -> Scene:
    with open(path, "rb") as fh:
        return load_scene(fh.read())


def _build_index(scene: Scene, graph: str, policy: str, budget_mb: int):
    if scene.mode == RECTILINEAR_WEIGHTED:
        return preprocess_weighted(scene)
    return preprocess(scene, graph, policy, budget_bytes=budget_mb << 20)


def cmd_build(args) -> int:
    scene = _load_scene_file(args.scene)
    index = _build_index(scene, args.graph, args.policy, args.budget_mb)
    doc = {
        "format": INDEX_FORMAT_VERSION,
        "scene_hash": _scene_hash(scene),
        "index": index,
    }
    with open(args.out, "wb") as fh:
        pickle.dump(doc, fh)
    sys.stdout.write(
        json.dumps({"nodes": index.graph.node_count(), "edges": index.graph.edge_count()}) + "\n"
    )
    return 0


def _load_index(path: str):
    with open(path, "rb") as fh:
        doc = pickle.load(fh)
    if doc.get("format") != INDEX_FORMAT_VERSION:
        raise SceneError("PARSE_ERROR", f"index format {doc.get('format')} unsupported")
    index = doc["index"]
    if _scene_hash(index.scene) != doc.get("scene_hash"):
        raise SceneError("PARSE_ERROR", "index does not match its scene hash")
    return index


def _run_query(index, s: Point, t: Point, want_path: bool) -> QueryResult:
    if isinstance(index, WeightedIndex):
        return weighted_query(index, s, t, want_path=want_path)
    return query(index, s, t, want_path=want_path)


def cmd_query(args) -> int:
    index = _load_index(args.index)
    res = _run_query(index, _parse_point(args.s), _parse_point(args.t), args.path)
    sys.stdout.write(json.dumps(result_to_doc(res)) + "\n")
    return 0


def cmd_batch(args) -> int:
    index = _load_index(args.index)
    with open(args.queries, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    pairs = [(Point(*map(int, e["s"])), Point(*map(int, e["t"]))) for e in doc]
    out = []
    if isinstance(index, WeightedIndex):
        for s, t in pairs:
            try:
                out.append(result_to_doc(weighted_query(index, s, t, want_path=args.path)))
            except EngineError as exc:
                out.append({"error": exc.code, "message": str(exc)})
    else:
        for res in batch_query(index, pairs, want_path=args.path, threads=args.threads):
            if isinstance(res, EngineError):
                out.append({"error": res.code, "message": str(res)})
            else:
                out.append(result_to_doc(res))
    sys.stdout.write(json.dumps(out, indent=1) + "\n")
    return 0


# -- check: the differential fuzz harness -----------------------------------


def _random_free_pair(rng, scene, vis) -> Tuple[Point, Point]:
    x0, y0, x1, y1 = scene.bbox
    out = []
    while len(out) < 2:
        p = Point(rng.randint(x0, x1), rng.randint(y0, y1))
        kind = vis.locate(p)[0]
        if kind != "interior":
            out.append(p)
    return out[0], out[1]


def _write_reproducer(path, scene, s, t, expected, actual, config):
    doc = {
        "scene": json.loads(save_scene(scene)),
        "s": [s.x, s.y],
        "t": [t.x, t.y],
        "expected": str(expected),
        "actual": str(actual),
        "config": config,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)


def _check_one_unweighted(scene, pairs, full_upto, reproducer) -> Optional[str]:
    idx_e = preprocess(scene, ENHANCED, ON_DEMAND)
    idx_b = preprocess(scene, BASIC, ON_DEMAND)
    idx_naive = dataclasses.replace(idx_e, use_cascade=False)
    oracle = UnweightedOracle(scene)
    idx_full = None
    if scene.vertex_count() <= full_upto:
        apsp = {}
        preds = {}
        for src in range(idx_e.graph.node_count()):
            dist, pred = dijkstra_from(idx_e.graph, src)
            apsp[src] = dist
            preds[src] = pred
        idx_full = dataclasses.replace(idx_e, policy=FULL, apsp=apsp, preds=preds)
    for s, t in pairs:
        try:
            expect = oracle.query(s, t).length
        except EngineError:
            continue
        res = query(idx_e, s, t, want_path=True)
        checks = [("enhanced-vs-oracle", res.length, expect)]
        checks.append(("basic-vs-enhanced", query(idx_b, s, t).length, res.length))
        gs_fast = idx_e.gateways(s)
        gs_slow = idx_naive.gateways(s)
        fast = sorted((e.node, e.length) for e in gs_fast.entries)
        slow = sorted((e.node, e.length) for e in gs_slow.entries)
        checks.append(("cascade-vs-bisect", fast, slow))
        if idx_full is not None:
            checks.append(("full-vs-on-demand", query(idx_full, s, t).length, res.length))
        for name, actual, expected in checks:
            if actual != expected:
                _write_reproducer(reproducer, scene, s, t, expected, actual, {"check": name})
                return f"{name}: s={tuple(s)} t={tuple(t)} expected={expected} actual={actual}"
    return None


def _check_one_weighted(scene, pairs, reproducer, counters) -> Optional[str]:
    idx = preprocess_weighted(scene)
    oracle = WeightedOracle(scene)
    fine = WeightedOracle(scene, refine=True)
    vset_pts = [vp.location for vp in idx.vset.points]
    first_pair = True
    for s, t in pairs:
        try:
            expect = oracle.query(s, t)
        except EngineError:
            continue
        if first_pair:
            first_pair = False
            stable = fine.query(s, t).length
            if stable != expect.length:
                _write_reproducer(reproducer, scene, s, t, expect.length, stable,
                                  {"check": "grid-refinement-stability"})
                return "grid-refinement-stability"
        got = weighted_query(idx, s, t, want_path=True)
        counters["pairs"] += 1
        if expect.length == INFINITE:
            continue
        if got.length < expect.length:
            _write_reproducer(reproducer, scene, s, t, expect.length, got.length,
                              {"check": "weighted-soundness"})
            return f"weighted-soundness: s={tuple(s)} t={tuple(t)}"
        touches = any(
            on_segment(vp, Segment(a, b))
            for vp in vset_pts
            for a, b in zip(expect.polyline, expect.polyline[1:])
        )
        if touches and got.length != expect.length:
            _write_reproducer(reproducer, scene, s, t, expect.length, got.length,
                              {"check": "weighted-conditional-completeness"})
            return f"weighted-conditional-completeness: s={tuple(s)} t={tuple(t)}"
        if got.length != expect.length:
            counters["mismatch"] += 1
    return None


def cmd_check(args) -> int:
    if args.replay:
        return _cmd_replay(args)
    rng = random.Random(args.seed)
    t0 = time.perf_counter()
    counters = {"pairs": 0, "mismatch": 0}
    for si in range(args.scenes):
        if args.weighted:
            n = rng.randint(8, min(args.n_max, 40))
            h = rng.randint(1, max(1, min(3, n // 8)))
            scene = generate_scene(n, h, RECTILINEAR_WEIGHTED, seed=rng.randrange(1 << 32))
        else:
            n = rng.randint(8, args.n_max)
            h = rng.randint(1, max(1, min(8, n // 3)))
            scene = generate_scene(n, h, POLYGONAL, seed=rng.randrange(1 << 32))
        from .visibility import VisibilityIndex

        vis = VisibilityIndex(scene)
        pairs = [_random_free_pair(rng, scene, vis) for _ in range(args.queries)]
        if args.weighted:
            failure = _check_one_weighted(scene, pairs, args.reproducer, counters)
        else:
            failure = _check_one_unweighted(scene, pairs, args.full_upto, args.reproducer)
        if failure:
            print(f"MISMATCH in scene {si}: {failure}", file=sys.stderr)
            print(f"reproducer written to {args.reproducer}", file=sys.stderr)
            return _CHECK_EXIT
    dt = time.perf_counter() - t0
    msg = f"check ok: {args.scenes} scenes x {args.queries} queries in {dt:.1f}s"
    if args.weighted and counters["pairs"]:
        rate = counters["mismatch"] / counters["pairs"]
        msg += f"; unconditional weighted mismatch rate {rate:.4f}"
    print(msg)
    return 0


def _cmd_replay(args) -> int:
    with open(args.replay, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    scene = load_scene(json.dumps(doc["scene"]).encode())
    s = Point(*doc["s"])
    t = Point(*doc["t"])
    name = doc["config"]["check"]
    if scene.mode == RECTILINEAR_WEIGHTED:
        idx = preprocess_weighted(scene)
        got = weighted_query(idx, s, t)
        expect = WeightedOracle(scene).query(s, t)
        ok = (got.length >= expect.length) and not (
            name == "weighted-conditional-completeness" and got.length != expect.length
        )
        if name == "weighted-soundness":
            ok = got.length >= expect.length
    else:
        idx = preprocess(scene, ENHANCED, ON_DEMAND)
        got = query(idx, s, t)
        expect = UnweightedOracle(scene).query(s, t)
        ok = got.length == expect.length
    print(f"replay {name}: expected={expect.length} actual={got.length}")
    return 0 if ok else _CHECK_EXIT


def cmd_bench(args) -> int:
    sizes = [int(v) for v in args.sizes.split(",")]
    graphs = [BASIC, ENHANCED] if args.graph == "both" else [args.graph]
    rng = random.Random(args.seed)
    rows = ["n,h,mode,nodes,edges,build_ms,median_query_us,p99_query_us,gateway_count_mean"]
    for n in sizes:
        h = max(1, n // args.h_divisor)
        scene = generate_scene(n, h, POLYGONAL, seed=args.seed + n)
        for graph_mode in graphs:
            t0 = time.perf_counter()
            idx = preprocess(scene, graph_mode, args.policy,
                             budget_bytes=args.budget_mb << 20)
            build_ms = (time.perf_counter() - t0) * 1e3
            pairs = [_random_free_pair(rng, scene, idx.vis) for _ in range(args.queries)]
            lats = []
            gws = []
            for s, t in pairs:
                t1 = time.perf_counter()
                query(idx, s, t)
                lats.append((time.perf_counter() - t1) * 1e6)
                gws.append(len(idx.gateways(s).entries))
                gws.append(len(idx.gateways(t).entries))
            lats.sort()
            med = statistics.median(lats)
            p99 = lats[min(len(lats) - 1, int(0.99 * len(lats)))]
            rows.append(
                f"{scene.vertex_count()},{h},{graph_mode},{idx.graph.node_count()},"
                f"{idx.graph.edge_count()},{build_ms:.1f},{med:.1f},{p99:.1f},"
                f"{statistics.mean(gws):.2f}"
            )
    _write_out("\n".join(rows) + "\n", args.out)
    return 0


def cmd_render(args) -> int:
    scene = _load_scene_file(args.scene)
    layers = [v.strip() for v in args.layers.split(",")]
    for layer in layers:
        if layer not in LAYERS:
            raise SceneError("PARSE_ERROR", f"unknown layer {layer!r}")
    index = None
    path = None
    gateway_sets = []
    needs_index = {"cutlines", "steiner-points", "gateways", "path"} & set(layers)
    if needs_index:
        index = _build_index(scene, ENHANCED, ON_DEMAND, args.budget_mb)
    if args.s and args.t:
        s, t = _parse_point(args.s), _parse_point(args.t)
        if "path" in layers:
            path = _run_query(index, s, t, True).path
        if "gateways" in layers:
            if isinstance(index, WeightedIndex):
                from .weighted import weighted_gateways

                gateway_sets = [weighted_gateways(s, index), weighted_gateways(t, index)]
            else:
                gateway_sets = [index.gateways(s), index.gateways(t)]
    svg = render_svg(scene, layers, index=index, path=path, gateway_sets=gateway_sets)
    _write_out(svg, args.out)
    return 0


# -- argument wiring ---------------------------------------------------------


def build_parser() -> _Parser:
    p = _Parser(prog="l1paths", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="generate a random scene")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--h", type=int, required=True)
    g.add_argument("--mode", choices=[POLYGONAL, RECTILINEAR_WEIGHTED], default=POLYGONAL)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    b = sub.add_parser("build", help="preprocess a scene into an index file")
    b.add_argument("scene")
    b.add_argument("--graph", choices=[BASIC, ENHANCED], default=ENHANCED)
    b.add_argument("--policy", choices=[FULL, ON_DEMAND], default=ON_DEMAND)
    b.add_argument("--budget-mb", type=int, default=2048)
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_build)

    q = sub.add_parser("query", help="answer one two-point query")
    q.add_argument("index")
    q.add_argument("--s", required=True)
    q.add_argument("--t", required=True)
    q.add_argument("--path", action="store_true")
    q.set_defaults(func=cmd_query)

    bt = sub.add_parser("batch", help="answer a batch of queries from a JSON file")
    bt.add_argument("index")
    bt.add_argument("queries")
    bt.add_argument("--path", action="store_true")
    bt.add_argument("--threads", type=int, default=1)
    bt.set_defaults(func=cmd_batch)

    c = sub.add_parser("check", help="fuzz the engine against the oracles")
    c.add_argument("--scenes", type=int, default=50)
    c.add_argument("--n-max", type=int, default=120)
    c.add_argument("--queries", type=int, default=20)
    c.add_argument("--seed", type=int, default=42)
    c.add_argument("--weighted", action="store_true")
    c.add_argument("--full-upto", type=int, default=40,
                   help="also compare the full-table policy on scenes up to this n")
    c.add_argument("--reproducer", default="l1paths-reproducer.json")
    c.add_argument("--replay", help="re-run a reproducer file")
    c.set_defaults(func=cmd_check)

    be = sub.add_parser("bench", help="build/query benchmark CSV")
    be.add_argument("--sizes", default="256,512,1024,2048,4096,8192")
    be.add_argument("--queries", type=int, default=20)
    be.add_argument("--graph", choices=[BASIC, ENHANCED, "both"], default="both")
    be.add_argument("--policy", choices=[FULL, ON_DEMAND], default=ON_DEMAND)
    be.add_argument("--h-divisor", type=int, default=12)
    be.add_argument("--budget-mb", type=int, default=2048)
    be.add_argument("--seed", type=int, default=7)
    be.add_argument("--out")
    be.set_defaults(func=cmd_bench)

    r = sub.add_parser("render", help="render a scene (and structures) to SVG")
    r.add_argument("scene")
    r.add_argument("--layers", default="obstacles")
    r.add_argument("--s")
    r.add_argument("--t")
    r.add_argument("--budget-mb", type=int, default=2048)
    r.add_argument("--out")
    r.set_defaults(func=cmd_render)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SceneError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _VALIDATION_EXIT
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.code in ("POINT_INSIDE_OBSTACLE", "OUT_OF_BBOX", "NO_PATH"):
            return _QUERY_EXIT
        return _VALIDATION_EXIT
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _VALIDATION_EXIT


if __name__ == "__main__":
    sys.exit(main())
