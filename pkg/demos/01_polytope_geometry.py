"""Exact geometry of the 2x2 binary correlation polytopes.

Everything here is exact rational arithmetic: vertex enumeration by brute
force over deterministic strategies, facet enumeration by the double
description method, and membership by an exact simplex LP that returns a
certificate either way (a convex decomposition inside, a separating
inequality outside).
"""

from lfgeo.behavior import (Scenario, chsh_inequality, evaluate_inequality,
                            pr_box)
from lfgeo.polytope import (PolytopeKind, enumerate_facets,
                            enumerate_lhv_vertices, max_over_polytope,
                            membership, slice_2d)

sc = Scenario(2, 2, 2, 2)

print("== Vertices and facets ==")
verts = enumerate_lhv_vertices(sc)
print(f"deterministic local vertices: {len(verts)}")
for kind in (PolytopeKind.LHV, PolytopeKind.LF, PolytopeKind.NS):
    facets = enumerate_facets(kind, sc)
    print(f"{kind.value.upper():>3} facets: {len(facets)}")
print("At two settings per party the LF polytope coincides with LHV:")
lhv = {(tuple(f.vector()), f.bound) for f in enumerate_facets(PolytopeKind.LHV, sc)}
lf = {(tuple(f.vector()), f.bound) for f in enumerate_facets(PolytopeKind.LF, sc)}
print(f"  identical facet sets: {lhv == lf}")

print("\n== CHSH bounds (exact rationals) ==")
chsh = chsh_inequality(sc)
for kind in (PolytopeKind.LHV, PolytopeKind.LF, PolytopeKind.NS):
    print(f"max CHSH over {kind.value.upper()}: "
          f"{max_over_polytope(kind, chsh)}")

print("\n== PR box membership with certificates ==")
pr = pr_box()
print(f"CHSH value of the PR box: {evaluate_inequality(chsh, pr)}")
for kind in (PolytopeKind.LHV, PolytopeKind.LF, PolytopeKind.NS):
    res = membership(kind, pr)
    print(f"inside {kind.value.upper()}: {res.inside}")
    if not res.inside:
        cert = res.certificate
        val = evaluate_inequality(cert, pr)
        print(f"  separating inequality attains {val} > bound {cert.bound}")

print("\n== 2D slice through two CHSH directions ==")
f2 = chsh_inequality(sc, alice_settings=(2, 1))
data = slice_2d([PolytopeKind.LHV, PolytopeKind.NS], chsh, f2, resolution=8)
for kind, pts in sorted(data.points.items()):
    xs = ", ".join(f"({float(u):+.2f},{float(v):+.2f})" for u, v in pts[:4])
    print(f"{kind}: support points {xs} ...")
print("(the LHV octagon sits strictly inside the NS square)")
