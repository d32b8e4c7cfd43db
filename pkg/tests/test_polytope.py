import numpy as np
import pytest

from lfgeo.behavior import (Behavior, Scenario, StructuralError,
                            chsh_inequality, evaluate_inequality, pr_box,
                            uniform_behavior, validate_behavior)
from lfgeo.polytope import (CapExceededError, PolytopeKind,
                            enumerate_facets, enumerate_lf_vertices,
                            enumerate_lhv_vertices, lf_facets_via_hull,
                            max_over_polytope, membership, slice_2d)
from lfgeo.rationals import Q

from tests.conftest import random_lhv_mixture, random_ns_behavior

SC = Scenario(2, 2, 2, 2)
SC3 = Scenario(3, 3, 2, 2)
KINDS = (PolytopeKind.LHV, PolytopeKind.LF, PolytopeKind.NS)


class TestVertices:
    def test_2x2_count(self):
        assert len(enumerate_lhv_vertices(SC)) == 16

    def test_3x3_count(self):
        assert len(enumerate_lhv_vertices(SC3)) == 64

    def test_entries_are_binary(self):
        for v in enumerate_lhv_vertices(SC):
            assert set(v.vector()) <= {Q(0), Q(1)}

    def test_cap(self):
        with pytest.raises(CapExceededError):
            enumerate_lhv_vertices(SC3, cap=10)


class TestMembership:
    def test_vertices_inside_all_kinds(self):
        v = enumerate_lhv_vertices(SC)[3]
        for kind in KINDS:
            assert membership(kind, v).inside

    def test_pr_box_verdicts(self):
        b = pr_box()
        assert membership(PolytopeKind.NS, b).inside
        assert not membership(PolytopeKind.LHV, b).inside
        assert not membership(PolytopeKind.LF, b).inside

    def test_lhv_decomposition_reproduces_query(self):
        rng = np.random.default_rng(5)
        b = random_lhv_mixture(SC, rng)
        res = membership(PolytopeKind.LHV, b)
        assert res.inside
        for idx in SC.index_set():
            assert sum(w * v.p[idx] for v, w in res.weights) == b.p[idx]

    def test_lf_extension_certificate_valid(self):
        b = uniform_behavior(SC)
        res = membership(PolytopeKind.LF, b)
        assert res.inside
        ext = res.extension
        assert ext.max_constraint_residual() == 0
        assert all(ext.behavior().p[k] == b.p[k] for k in b.p)

    def test_outside_certificate_separates(self):
        res = membership(PolytopeKind.LHV, pr_box())
        cert = res.certificate
        assert evaluate_inequality(cert, pr_box()) > cert.bound
        assert max_over_polytope(PolytopeKind.LHV, cert) == cert.bound

    def test_signalling_behavior_rejected_by_ns(self):
        table = dict(uniform_behavior(SC).p)
        # bias Alice's marginal under y=2 only
        for a, b, x, y in list(table):
            if x == 1 and y == 2:
                table[(a, b, x, y)] = Q(1, 2) if a == 1 else Q(0)
        sig = Behavior(SC, table)
        res = membership(PolytopeKind.NS, sig)
        assert not res.inside
        cert = res.certificate
        assert evaluate_inequality(cert, sig) > cert.bound

    def test_unnormalized_rejected(self):
        table = {k: Q(1, 8) for k in SC.index_set()}
        with pytest.raises(StructuralError):
            membership(PolytopeKind.NS, Behavior(SC, table))

    def test_lf_needs_vault_settings(self):
        sc = Scenario(1, 2, 2, 2)
        with pytest.raises(StructuralError):
            membership(PolytopeKind.LF, uniform_behavior(sc))


class TestInclusionChain:
    @pytest.mark.parametrize("seed", range(8))
    def test_chain_on_random_behaviors(self, seed):
        rng = np.random.default_rng(seed)
        b = (random_lhv_mixture(SC, rng) if seed % 2
             else random_ns_behavior(SC, rng))
        inside = {k: membership(k, b).inside for k in KINDS}
        if inside[PolytopeKind.LHV]:
            assert inside[PolytopeKind.LF]
        if inside[PolytopeKind.LF]:
            assert inside[PolytopeKind.NS]


class TestFacets:
    def test_lhv_2x2_facet_split(self):
        from lfgeo.polytope import canonical_inequality
        from lfgeo.behavior import Inequality
        from lfgeo.rationals import dot
        from tests.conftest import ns_vertices
        facets = enumerate_facets(PolytopeKind.LHV, SC)
        assert len(facets) == 24
        key = lambda f: (tuple(f.vector()), f.bound)
        facet_keys = {key(f) for f in facets}
        positivity_keys = set()
        for idx in SC.index_set():
            coeffs = {j: Q(-1) if j == idx else Q(0) for j in SC.index_set()}
            positivity_keys.add(key(canonical_inequality(
                Inequality(SC, coeffs, Q(0), "<="))))
        assert len(positivity_keys) == 16
        assert positivity_keys <= facet_keys
        # the other 8 are the CHSH-type facets: each is violated by some
        # no-signalling vertex (a PR-box variant), positivity never is
        chsh_type = [f for f in facets if key(f) not in positivity_keys]
        assert len(chsh_type) == 8
        verts = ns_vertices(SC)
        for f in chsh_type:
            assert any(dot(f.vector(), v) > f.bound for v in verts)

    def test_ns_2x2_facets(self):
        assert len(enumerate_facets(PolytopeKind.NS, SC)) == 16

    def test_lf_2x2_equals_lhv(self):
        lf = enumerate_facets(PolytopeKind.LF, SC)
        lhv = enumerate_facets(PolytopeKind.LHV, SC)
        key = lambda f: (tuple(f.vector()), f.bound)
        assert sorted(map(key, lf)) == sorted(map(key, lhv))

    def test_lf_2x2_valid_on_lhv_vertices(self):
        facets = enumerate_facets(PolytopeKind.LF, SC)
        for v in enumerate_lhv_vertices(SC):
            for f in facets:
                assert f.satisfied_by(v)

    def test_hull_route_matches_fme_at_2x2(self):
        hull = lf_facets_via_hull(SC)
        fme = enumerate_facets(PolytopeKind.LF, SC)
        key = lambda f: (tuple(f.vector()), f.bound)
        assert sorted(map(key, hull)) == sorted(map(key, fme))

    def test_nonbinary_capped(self):
        with pytest.raises(CapExceededError):
            enumerate_facets(PolytopeKind.LHV, Scenario(2, 2, 3, 3))


@pytest.fixture(scope="module")
def facet_lists():
    return {kind: enumerate_facets(kind, SC) for kind in KINDS}


@pytest.fixture(scope="module")
def lf_verts():
    return enumerate_lf_vertices(SC3)


class TestDualityRoundTrip:
    def test_100_random_behaviors_per_kind(self, facet_lists):
        rng = np.random.default_rng(11)
        for kind in KINDS:
            facets = facet_lists[kind]
            for i in range(100):
                b = (random_lhv_mixture(SC, rng) if i % 2
                     else random_ns_behavior(SC, rng))
                inside = membership(kind, b).inside
                satisfies_all = all(f.satisfied_by(b) for f in facets)
                assert inside == satisfies_all, (kind, i)


class TestMaxOverPolytope:
    def test_chsh_bounds(self):
        chsh = chsh_inequality(SC)
        assert max_over_polytope(PolytopeKind.LHV, chsh) == 2
        assert max_over_polytope(PolytopeKind.LF, chsh) == 2
        assert max_over_polytope(PolytopeKind.NS, chsh) == 4

    def test_facets_attain_their_bounds(self):
        for f in enumerate_facets(PolytopeKind.LF, SC)[:6]:
            assert max_over_polytope(PolytopeKind.LF, f) == f.bound


class TestLfVertices3x3:
    def test_counts(self, lf_verts):
        assert len(lf_verts) == 96
        lhv_keys = {tuple(v.vector()) for v in enumerate_lhv_vertices(SC3)}
        nonlocal_count = sum(1 for v in lf_verts
                             if tuple(v.vector()) not in lhv_keys)
        assert nonlocal_count == 32

    def test_all_inside_lf(self, lf_verts):
        for v in lf_verts[::12]:
            assert membership(PolytopeKind.LF, v).inside


class TestSlice:
    def test_degenerate_basis_rejected(self):
        f = chsh_inequality(SC)
        with pytest.raises(StructuralError):
            slice_2d([PolytopeKind.LHV], f, f, 4)

    def test_resolution_4_support_points(self):
        f1 = chsh_inequality(SC)
        f2 = chsh_inequality(SC, alice_settings=(2, 1))
        data = slice_2d(list(KINDS), f1, f2, 4)
        assert all(len(pts) == 4 for pts in data.points.values())

    def test_nesting_of_support_functions(self):
        import math
        from lfgeo.rationals import rationalize
        f1 = chsh_inequality(SC)
        f2 = chsh_inequality(SC, alice_settings=(2, 1))
        res = 8
        data = slice_2d(list(KINDS), f1, f2, res)
        for k in range(res):
            theta = 2 * math.pi * k / res
            cu = rationalize(math.cos(theta), 10**6)
            sv = rationalize(math.sin(theta), 10**6)
            support = {kind: cu * data.points[kind][k][0]
                       + sv * data.points[kind][k][1] for kind in data.points}
            assert support["lhv"] <= support["lf"] <= support["ns"]
