import itertools

import pytest

from lfgeo.dd import NotPointedError, extreme_rays, facets_of_points
from lfgeo.fme import project
from lfgeo.geometry import AffineHull, EqualityReducer, rref
from lfgeo.rationals import Q, dot


def test_rref_identifies_pivots():
    rows, pivots = rref([[Q(2), Q(4)], [Q(1), Q(2)]])
    assert pivots == [0]
    assert rows == [[Q(1), Q(2)]]


def test_affine_hull_round_trip():
    pts = [[Q(0), Q(0), Q(1)], [Q(1), Q(0), Q(1)], [Q(0), Q(1), Q(1)]]
    hull = AffineHull(pts)
    assert hull.dim == 2
    for p in pts:
        t = hull.reduce_point(p)
        assert len(t) == 2
    coeffs, bound = hull.lift_inequality([Q(1), Q(1)], Q(1))
    for p in pts:
        assert dot(coeffs, p) <= bound


def test_equality_reducer_canonicalizes():
    # modulo x + y = 1: the functionals x and 1 - y coincide
    red = EqualityReducer([((Q(1), Q(1)), Q(1))])
    a = red.reduce([Q(1), Q(0)], Q(0))
    b = red.reduce([Q(0), Q(-1)], Q(-1))
    assert a == b


def test_extreme_rays_orthant():
    rays = extreme_rays([[Q(1), Q(0)], [Q(0), Q(1)]])
    assert sorted(rays) == [(0, 1), (1, 0)]


def test_extreme_rays_not_pointed():
    with pytest.raises(NotPointedError):
        extreme_rays([[Q(1), Q(0)]])


def test_facets_of_square():
    pts = [[Q(x), Q(y)] for x in (0, 1) for y in (0, 1)]
    facets = facets_of_points(pts)
    assert len(facets) == 4
    for coeffs, bound in facets:
        assert all(dot(coeffs, p) <= bound for p in pts)
        assert sum(1 for p in pts if dot(coeffs, p) == bound) == 2


def test_facets_of_cross_polytope():
    pts = []
    for i in range(3):
        for s in (1, -1):
            p = [Q(0)] * 3
            p[i] = Q(s)
            pts.append(p)
    facets = facets_of_points(pts)
    assert len(facets) == 8
    assert {tuple(c) for c, _ in facets} == set(itertools.product((-1, 1), repeat=3))


def test_fme_projects_cube_to_square():
    # unit cube in 3d projected onto first two coordinates
    A, b = [], []
    for i in range(3):
        row = [Q(0)] * 3
        row[i] = Q(1)
        A.append(list(row))
        b.append(Q(1))
        row = [Q(0)] * 3
        row[i] = Q(-1)
        A.append(row)
        b.append(Q(0))
    sys = project(A, b, [], [], n_keep=2)
    assert len(sys.inequalities) == 4
    assert not sys.equalities


def test_fme_uses_equalities_as_substitutions():
    # x + y + z = 1, all >= 0, keep (x, y): triangle x, y >= 0, x + y <= 1
    A = [[Q(-1), Q(0), Q(0)], [Q(0), Q(-1), Q(0)], [Q(0), Q(0), Q(-1)]]
    b = [Q(0)] * 3
    sys = project(A, b, [[Q(1), Q(1), Q(1)]], [Q(1)], n_keep=2)
    keys = {(coeffs, bound) for coeffs, bound in sys.inequalities}
    assert keys == {((-1, 0), 0), ((0, -1), 0), ((1, 1), 1)}


def test_fme_blowup_raises_memory_error():
    # eliminating from a system capped at 1 row must trip the guard
    A = [[Q(1), Q(s)] for s in (1, -1)] + [[Q(-1), Q(s)] for s in (1, -1)]
    b = [Q(1)] * 4
    with pytest.raises(MemoryError):
        project(A, b, [], [], n_keep=1, max_rows=1)
