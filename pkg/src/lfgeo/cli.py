"""Command-line entry point.

Every subcommand reads JSON inputs, writes its result to --out, and drops a
run manifest (command line, seed, version, input digests, wall time) next
to each output artifact.  Verdicts are data: exit code 0 covers "outside"
membership results and inconsistent positions alike; 1 signals a domain
error (with a structured report on stderr); 2 a usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from pathlib import Path

from . import __version__, behavior, causal, polytope, principles, quantum
from .behavior import (Behavior, Scenario, StructuralError,
                       ScenarioMismatchError, behavior_from_json,
                       behavior_to_json, inequality_from_json,
                       inequality_to_json)
from .polytope import CapExceededError, PolytopeKind
from .rationals import num_den


def thread_count() -> int:
    """Parallelism bound from LFGEO_THREADS (0 = auto).  All current
    kernels are single-threaded and deterministic, so this only caps the
    ambient numpy thread pools."""
    raw = os.environ.get("LFGEO_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        raise StructuralError(f"LFGEO_THREADS must be an integer, got {raw!r}")
    if n < 0:
        raise StructuralError("LFGEO_THREADS must be >= 0")
    return n


def _digest(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


class _Run:
    """Collects inputs/outputs of one invocation and emits manifests."""

    def __init__(self, argv, seed=None):
        self.argv = list(argv)
        self.seed = seed
        self.inputs = {}
        self.outputs = []
        self.t0 = time.monotonic()

    def read_json(self, path: str) -> dict:
        self.inputs[path] = _digest(path)
        with open(path) as fh:
            return json.load(fh)

    def write_text(self, path: str, text: str) -> None:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text)
        self.outputs.append(path)

    def write_json(self, path: str, obj) -> None:
        self.write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")

    def finish(self) -> None:
        wall = time.monotonic() - self.t0
        for out in self.outputs:
            manifest = {
                "command": self.argv,
                "seed": self.seed,
                "version": __version__,
                "inputs": dict(sorted(self.inputs.items())),
                "wall_time_s": round(wall, 6),
            }
            Path(out + ".manifest.json").write_text(
                json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _parse_scenario(text: str) -> Scenario:
    parts = text.split(",")
    if len(parts) != 4:
        raise StructuralError(f"scenario must be x,y,a,b counts, got {text!r}")
    try:
        x, y, a, b = (int(p) for p in parts)
    except ValueError:
        raise StructuralError(f"scenario counts must be integers, got {text!r}")
    return Scenario(x, y, a, b)


def _rat_json(q) -> dict:
    n, d = num_den(q)
    return {"num": n, "den": d}


def _membership_json(res) -> dict:
    out = {"kind": res.kind.value, "inside": res.inside}
    if res.weights is not None:
        out["weights"] = [{"weight": _rat_json(w), "vertex": behavior_to_json(v)}
                          for v, w in res.weights if w != 0]
    if res.extension is not None:
        out["extension"] = [
            {"index": list(k), **_rat_json(v)}
            for k, v in sorted(res.extension.q.items()) if v != 0]
    if res.certificate is not None:
        out["certificate"] = inequality_to_json(res.certificate)
    return out


def slice_to_csv(data) -> str:
    lines = ["kind,theta_index,f1,f2"]
    for kind in sorted(data.points):
        for i, (u, v) in enumerate(data.points[kind]):
            lines.append(f"{kind},{i},{float(u):.17g},{float(v):.17g}")
    return "\n".join(lines) + "\n"


def slice_to_json(data) -> dict:
    return {
        "f1": inequality_to_json(data.f1),
        "f2": inequality_to_json(data.f2),
        "resolution": data.resolution,
        "points": {kind: [[_rat_json(u), _rat_json(v)] for u, v in pts]
                   for kind, pts in data.points.items()},
    }


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_polytope(args, run: _Run) -> int:
    if args.op == "vertices":
        sc = _parse_scenario(args.scenario)
        kwargs = {"cap": args.cap} if args.cap is not None else {}
        verts = polytope.enumerate_lhv_vertices(sc, **kwargs)
        run.write_json(args.out, {"scenario": behavior_to_json(verts[0])["scenario"],
                                  "vertices": [behavior_to_json(v) for v in verts]})
    elif args.op == "facets":
        sc = _parse_scenario(args.scenario)
        kind = PolytopeKind.parse(args.kind)
        facets = polytope.enumerate_facets(kind, sc)
        run.write_json(args.out, {"kind": kind.value,
                                  "facets": [inequality_to_json(f) for f in facets]})
    elif args.op == "member":
        kind = PolytopeKind.parse(args.kind)
        b = behavior_from_json(run.read_json(args.behavior))
        res = polytope.membership(kind, b)
        run.write_json(args.out, _membership_json(res))
    elif args.op == "max":
        kind = PolytopeKind.parse(args.kind)
        ineq = inequality_from_json(run.read_json(args.ineq))
        value = polytope.max_over_polytope(kind, ineq)
        run.write_json(args.out, {"kind": kind.value, "value": _rat_json(value)})
    elif args.op == "slice":
        kinds = [PolytopeKind.parse(k) for k in args.kinds.split(",")]
        f1 = inequality_from_json(run.read_json(args.f1))
        f2 = inequality_from_json(run.read_json(args.f2))
        data = polytope.slice_2d(kinds, f1, f2, args.resolution)
        run.write_text(args.out, slice_to_csv(data))
        run.write_json(args.out + ".exact.json", slice_to_json(data))
    return 0


def _cmd_quantum(args, run: _Run) -> int:
    if args.op in ("born", "ewfs"):
        cfg = quantum.config_from_json(run.read_json(args.config))
        if args.op == "ewfs":
            b = quantum.ewfs_behavior(cfg)
        else:
            b = quantum.born_behavior(cfg.shared_state, cfg.effective_alice(),
                                      cfg.effective_bob())
        run.write_json(args.out, behavior_to_json(b))
    elif args.op == "optimize":
        ineq = inequality_from_json(run.read_json(args.ineq))
        res = quantum.optimize_violation(ineq, steps=args.steps, seed=args.seed)
        run.write_json(args.out, quantum.optimization_to_json(
            res, ineq_id=args.ineq, seed=args.seed, steps=args.steps))
    elif args.op == "grid":
        ineq = inequality_from_json(run.read_json(args.ineq))
        kwargs = {"cap": args.cap} if args.cap is not None else {}
        value = quantum.tsirelson_grid(ineq, args.resolution, **kwargs)
        run.write_json(args.out, {"value": value, "resolution": args.resolution})
    return 0


def _cmd_causal(args, run: _Run) -> int:
    if args.op == "dsep":
        g = causal.dag_from_json(run.read_json(args.dag))
        stmt = causal.CiStatement(frozenset(args.A.split(",")),
                                  frozenset(args.B.split(",")),
                                  frozenset(args.Z.split(",")) if args.Z else frozenset())
        run.write_json(args.out, {"d_separated": causal.d_separated(g, stmt)})
    elif args.op == "cmc":
        g = causal.dag_from_json(run.read_json(args.dag))
        d = causal.distribution_from_json(run.read_json(args.dist))
        reports = causal.cmc_check(g, d, tol=args.tol)
        run.write_json(args.out, {
            "passes": all(r.passes for r in reports),
            "nodes": [{"node": r.node, "passes": r.passes,
                       "max_residual": float(r.max_residual)} for r in reports]})
    elif args.op == "faithful":
        g = causal.dag_from_json(run.read_json(args.dag))
        d = causal.distribution_from_json(run.read_json(args.dist))
        rep = causal.faithfulness_check(g, d, tol=args.tol)
        ci = lambda s: {"A": sorted(s.A), "B": sorted(s.B), "Z": sorted(s.Z)}
        run.write_json(args.out, {"holds": rep.holds,
                                  "extra_cis": [ci(s) for s in rep.extra_cis],
                                  "missing_cis": [ci(s) for s in rep.missing_cis]})
    elif args.op == "scan-bell":
        b = behavior_from_json(run.read_json(args.behavior))
        kwargs = {"latent_cardinality": args.cap} if args.cap is not None else {}
        rows = causal.bell_dag_scan(b, **kwargs)
        run.write_text(args.out, causal.scan_to_csv(rows))
        faithful = [r for r in rows if r.lhv_forced
                    and r.classification != "faithful_impossible"]
        run.write_json(args.out + ".summary.json", {
            "dag_count": len(rows),
            "faithful_reproducing": len(faithful),
            "dichotomy_holds": not faithful})
    return 0


def _cmd_principles(args, run: _Run) -> int:
    g = principles.default_graph()
    if args.op == "show":
        run.write_json(args.out, principles.graph_to_json(g))
        return 0
    pos = principles.position_from_json(run.read_json(args.position))
    falsified = _theorem_names(g, args.falsified)
    if args.op == "check":
        res = principles.consistent(g, pos, falsified)
        run.write_json(args.out, {
            "ok": res.ok,
            "violated": [[name, sorted(bundle)] for name, bundle in res.violated]})
    elif args.op == "repair":
        repairs = principles.minimal_repairs(g, pos, falsified)
        run.write_json(args.out, {
            "repairs": [sorted(r) for r in repairs],
            "rules": [{"premises": sorted(r.premises), "conclusion": r.conclusion,
                       "citation": r.citation} for r in g.rules]})
    return 0


def _theorem_names(g, spec_text: str) -> list:
    by_lower = {t.name.lower(): t.name for t in g.theorems}
    names = []
    for raw in spec_text.split(","):
        key = raw.strip().lower()
        if key not in by_lower:
            raise StructuralError(f"unknown theorem {raw!r}")
        names.append(by_lower[key])
    return names


def _cmd_fixtures(args, run: _Run) -> int:
    from . import fixtures
    written = fixtures.regen(args.out, seed=args.seed, full=args.full)
    for path in written:
        run.outputs.append(str(path))
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lfgeo",
                                description="local-friendliness geometry toolkit")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="group", required=True)

    def add(sp, *flags, **kw):
        sp.add_argument(*flags, **kw)

    poly = sub.add_parser("polytope").add_subparsers(dest="op", required=True)
    sp = poly.add_parser("vertices")
    add(sp, "--scenario", required=True)
    add(sp, "--out", required=True)
    add(sp, "--cap", type=int)
    sp = poly.add_parser("facets")
    add(sp, "--kind", required=True, choices=["lhv", "lf", "ns"])
    add(sp, "--scenario", required=True)
    add(sp, "--out", required=True)
    sp = poly.add_parser("member")
    add(sp, "--kind", required=True, choices=["lhv", "lf", "ns"])
    add(sp, "--behavior", required=True)
    add(sp, "--out", required=True)
    sp = poly.add_parser("max")
    add(sp, "--kind", required=True, choices=["lhv", "lf", "ns"])
    add(sp, "--ineq", required=True)
    add(sp, "--out", required=True)
    sp = poly.add_parser("slice")
    add(sp, "--kinds", required=True)
    add(sp, "--f1", required=True)
    add(sp, "--f2", required=True)
    add(sp, "--resolution", type=int, default=64)
    add(sp, "--out", required=True)

    qu = sub.add_parser("quantum").add_subparsers(dest="op", required=True)
    for name in ("born", "ewfs"):
        sp = qu.add_parser(name)
        add(sp, "--config", required=True)
        add(sp, "--out", required=True)
    sp = qu.add_parser("optimize")
    add(sp, "--ineq", required=True)
    add(sp, "--steps", type=int, default=50)
    add(sp, "--seed", type=int, default=0)
    add(sp, "--out", required=True)
    sp = qu.add_parser("grid")
    add(sp, "--ineq", required=True)
    add(sp, "--resolution", type=int, required=True)
    add(sp, "--cap", type=int)
    add(sp, "--out", required=True)

    ca = sub.add_parser("causal").add_subparsers(dest="op", required=True)
    sp = ca.add_parser("dsep")
    add(sp, "--dag", required=True)
    add(sp, "--A", required=True)
    add(sp, "--B", required=True)
    add(sp, "--Z", default="")
    add(sp, "--out", required=True)
    for name in ("cmc", "faithful"):
        sp = ca.add_parser(name)
        add(sp, "--dag", required=True)
        add(sp, "--dist", required=True)
        add(sp, "--tol", type=float, default=None)
        add(sp, "--out", required=True)
    sp = ca.add_parser("scan-bell")
    add(sp, "--behavior", required=True)
    add(sp, "--cap", type=int, help="latent cardinality bound")
    add(sp, "--out", required=True)

    pr = sub.add_parser("principles").add_subparsers(dest="op", required=True)
    sp = pr.add_parser("show")
    add(sp, "--out", required=True)
    for name in ("check", "repair"):
        sp = pr.add_parser(name)
        add(sp, "--position", required=True)
        add(sp, "--falsified", required=True)
        add(sp, "--out", required=True)

    fx = sub.add_parser("fixtures").add_subparsers(dest="op", required=True)
    sp = fx.add_parser("regen")
    add(sp, "--out", default="fixtures")
    add(sp, "--seed", type=int, default=0)
    add(sp, "--full", action="store_true",
        help="include the slow exact 3x3 facet projection")
    return p


_HANDLERS = {
    "polytope": _cmd_polytope,
    "quantum": _cmd_quantum,
    "causal": _cmd_causal,
    "principles": _cmd_principles,
    "fixtures": _cmd_fixtures,
}


def run(argv) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    holder = _Run(argv, seed=getattr(args, "seed", None))
    try:
        thread_count()  # validate the env var early
        code = _HANDLERS[args.group](args, holder)
    except (StructuralError, ScenarioMismatchError, CapExceededError,
            FileNotFoundError, json.JSONDecodeError, KeyError,
            ValueError, MemoryError) as exc:
        report = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(report), file=sys.stderr)
        return 1
    holder.finish()
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
