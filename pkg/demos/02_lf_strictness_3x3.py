"""Strict inclusions LHV < LF < NS at three settings per party.

The local-friendliness polytope only separates from the local polytope
once each party has at least three settings (the first of which "opens the
vault" and reveals the friend's recorded outcome).  This script exhibits
both strict inclusions with exact LP certificates, using the committed
witnesses so it runs in seconds; ``lfgeo fixtures regen`` re-derives them
from scratch.
"""

import json
from pathlib import Path

from lfgeo.behavior import (Scenario, behavior_from_json, evaluate_inequality,
                            inequality_from_json)
from lfgeo.polytope import (PolytopeKind, enumerate_lf_vertices,
                            enumerate_lhv_vertices, max_over_polytope,
                            membership)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
sc = Scenario(3, 3, 2, 2)

print("== LF vertex census at 3x3 ==")
lf_verts = enumerate_lf_vertices(sc)
lhv_keys = {tuple(v.vector()) for v in enumerate_lhv_vertices(sc)}
nonlocal_verts = [v for v in lf_verts if tuple(v.vector()) not in lhv_keys]
print(f"LF vertices: {len(lf_verts)} = {len(lf_verts) - len(nonlocal_verts)} "
      f"deterministic local + {len(nonlocal_verts)} nonlocal")

print("\n== A behavior inside LF but outside LHV ==")
v = nonlocal_verts[0]
res_lf = membership(PolytopeKind.LF, v)
res_lhv = membership(PolytopeKind.LHV, v)
print(f"inside LF: {res_lf.inside} "
      f"(extension residual {res_lf.extension.max_constraint_residual()})")
print(f"inside LHV: {res_lhv.inside}")
cert = res_lhv.certificate
print(f"Bell certificate: value {evaluate_inequality(cert, v)} > "
      f"local bound {cert.bound}")

print("\n== A behavior inside NS but outside LF ==")
fx = json.loads((FIXTURES / "lf33_strictness.json").read_text())
w = behavior_from_json(fx["ns_outside_lf"]["behavior"])
res_ns = membership(PolytopeKind.NS, w)
res_lf = membership(PolytopeKind.LF, w)
print(f"inside NS: {res_ns.inside}")
print(f"inside LF: {res_lf.inside}")
cert = res_lf.certificate
print(f"LF certificate: value {evaluate_inequality(cert, w)} > "
      f"LF bound {cert.bound} "
      f"(tight: LF max = {max_over_polytope(PolytopeKind.LF, cert)})")

print("\n== The stored genuine LF facet ==")
facet = inequality_from_json(json.loads((FIXTURES / "lf33_facet.json").read_text()))
print(f"LF bound: {facet.bound}, "
      f"NS max: {max_over_polytope(PolytopeKind.NS, facet)}")
print("(some no-signalling behavior beats the LF bound, so the facet is "
      "not a positivity or Bell facet in disguise)")
