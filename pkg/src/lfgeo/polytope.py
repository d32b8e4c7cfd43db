"""Exact geometry of the LHV, LF and NS correlation polytopes.

Everything here is float-free.  The three polytope families share one
behavior space; LHV is handled through its deterministic-strategy
vertices, NS through its explicit linear constraints, and LF through the
friend-outcome extension q(a,b,c,d|x,y) whose constraints encode
no-superdeterminism, locality and the open-the-vault consistency
(a=c when x=1, b=d when y=1).  Membership questions are exact LPs with
certificates on both answers; facet enumeration uses double description
(LHV) and Fourier-Motzkin projection of the extension system (LF).
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Optional, Sequence

from . import dd, fme, linprog
from .behavior import (Behavior, DeterministicStrategy, Inequality, Scenario,
                       ScenarioMismatchError, StructuralError,
                       deterministic_behavior, evaluate_inequality,
                       validate_behavior)
from .geometry import AffineHull, EqualityReducer, rref
from .rationals import Q, ZERO, as_rational, dot, rationalize

DEFAULT_VERTEX_CAP = 10**6
DEFAULT_SETTINGS_CAP = 3


class CapExceededError(RuntimeError):
    """A configured size cap (vertex count, projection size) was exceeded."""


class PolytopeKind(enum.Enum):
    LHV = "lhv"
    LF = "lf"
    NS = "ns"

    @classmethod
    def parse(cls, name: str) -> "PolytopeKind":
        return cls(name.strip().lower())


@dataclass(frozen=True)
class LfExtension:
    """Friend-outcome extension q(a,b,c,d|x,y): c is Charlie's outcome
    (Alice's setting-1 observable), d is Debbie's."""

    scenario: Scenario
    q: Mapping[tuple, object]

    def __post_init__(self):
        table = {k: as_rational(v) for k, v in self.q.items()}
        expected = set(_ext_index_set(self.scenario))
        if set(table) != expected:
            raise StructuralError("extension table must cover all (a,b,c,d,x,y)")
        object.__setattr__(self, "q", table)

    def behavior(self) -> Behavior:
        sc = self.scenario
        p = {}
        for (a, b, x, y) in sc.index_set():
            p[(a, b, x, y)] = sum(
                (self.q[(a, b, c, d, x, y)]
                 for c in range(1, sc.a_count + 1)
                 for d in range(1, sc.b_count + 1)), ZERO)
        return Behavior(sc, p)

    def max_constraint_residual(self):
        """Largest violation of the extension constraints (0 when valid)."""
        sc = self.scenario
        res = ZERO
        for k, v in self.q.items():
            if -v > res:
                res = -v
        sys = _lf_system(sc)
        vec = [self.q[k] for k in sys.vars]
        # protocol zeros live outside sys.vars; they must vanish
        for k, v in self.q.items():
            if k not in sys.var_index and abs(v) > res:
                res = abs(v)
        for row, rhs in zip(sys.hom_rows + sys.norm_rows,
                            [ZERO] * len(sys.hom_rows) + [Q(1)] * len(sys.norm_rows)):
            r = abs(dot(row, vec) - rhs)
            if r > res:
                res = r
        return res


@dataclass(frozen=True)
class MembershipResult:
    kind: PolytopeKind
    inside: bool
    # inside certificates
    weights: Optional[tuple] = None          # ((vertex Behavior, weight), ...) for LHV
    extension: Optional[LfExtension] = None  # for LF
    # outside certificate: separating inequality with bound attained on the
    # polytope and strictly exceeded by the query
    certificate: Optional[Inequality] = None


@dataclass(frozen=True)
class SliceData:
    """Support points of 2D shadows {(f1(b), f2(b))} per polytope kind."""

    f1: Inequality
    f2: Inequality
    resolution: int
    points: Mapping[str, tuple]  # kind value -> tuple of (Q, Q) support points


# ---------------------------------------------------------------------------
# Vertices
# ---------------------------------------------------------------------------

def enumerate_lhv_vertices(sc: Scenario, cap: int = DEFAULT_VERTEX_CAP) -> list[Behavior]:
    """One deterministic behavior per local strategy, duplicates removed,
    in lexicographic strategy order."""
    count = sc.a_count ** sc.x_count * sc.b_count ** sc.y_count
    if count > cap:
        raise CapExceededError(f"{count} deterministic strategies exceeds cap {cap}")
    out = []
    seen = set()
    for alice in itertools.product(range(1, sc.a_count + 1), repeat=sc.x_count):
        for bob in itertools.product(range(1, sc.b_count + 1), repeat=sc.y_count):
            strat = DeterministicStrategy(
                alice_map=lambda x, t=alice: t[x - 1],
                bob_map=lambda y, t=bob: t[y - 1])
            beh = deterministic_behavior(strat, sc)
            key = tuple(beh.vector())
            if key not in seen:
                seen.add(key)
                out.append(beh)
    return out


# ---------------------------------------------------------------------------
# Constraint systems
# ---------------------------------------------------------------------------

def scenario_equalities(sc: Scenario) -> list[tuple[tuple, object]]:
    """Affine hull of the NS polytope in canonical entry order:
    normalization per setting pair plus no-signalling marginal equalities."""
    order = {idx: i for i, idx in enumerate(sc.index_set())}
    n = len(order)
    eqs = []
    for x in range(1, sc.x_count + 1):
        for y in range(1, sc.y_count + 1):
            vec = [ZERO] * n
            for a in range(1, sc.a_count + 1):
                for b in range(1, sc.b_count + 1):
                    vec[order[(a, b, x, y)]] = Q(1)
            eqs.append((tuple(vec), Q(1)))
    for x in range(1, sc.x_count + 1):
        for a in range(1, sc.a_count + 1):
            for y in range(2, sc.y_count + 1):
                vec = [ZERO] * n
                for b in range(1, sc.b_count + 1):
                    vec[order[(a, b, x, 1)]] += Q(1)
                    vec[order[(a, b, x, y)]] -= Q(1)
                eqs.append((tuple(vec), ZERO))
    for y in range(1, sc.y_count + 1):
        for b in range(1, sc.b_count + 1):
            for x in range(2, sc.x_count + 1):
                vec = [ZERO] * n
                for a in range(1, sc.a_count + 1):
                    vec[order[(a, b, 1, y)]] += Q(1)
                    vec[order[(a, b, x, y)]] -= Q(1)
                eqs.append((tuple(vec), ZERO))
    return eqs


def _ext_index_set(sc: Scenario):
    for x in range(1, sc.x_count + 1):
        for y in range(1, sc.y_count + 1):
            for a in range(1, sc.a_count + 1):
                for b in range(1, sc.b_count + 1):
                    for c in range(1, sc.a_count + 1):
                        for d in range(1, sc.b_count + 1):
                            yield (a, b, c, d, x, y)


def _is_protocol_zero(key: tuple) -> bool:
    a, b, c, d, x, y = key
    return (x == 1 and a != c) or (y == 1 and b != d)


class _LfSystem:
    """Linear description of the extension polytope over the free q
    variables (protocol-zero entries dropped)."""

    def __init__(self, sc: Scenario):
        if not sc.requires_vault_settings():
            raise StructuralError("LF needs at least 2 settings per party")
        self.scenario = sc
        self.vars = [k for k in _ext_index_set(sc) if not _is_protocol_zero(k)]
        self.var_index = {k: i for i, k in enumerate(self.vars)}
        n = len(self.vars)
        A, B = sc.a_count, sc.b_count
        X, Y = sc.x_count, sc.y_count

        def row():
            return [ZERO] * n

        def bump(vec, key, amount):
            i = self.var_index.get(key)
            if i is not None:
                vec[i] += amount

        hom = []
        # No-Superdeterminism: friend-outcome marginal independent of (x,y)
        for c in range(1, A + 1):
            for d in range(1, B + 1):
                for (x, y) in [(x, y) for x in range(1, X + 1) for y in range(1, Y + 1)][1:]:
                    vec = row()
                    for a in range(1, A + 1):
                        for b in range(1, B + 1):
                            bump(vec, (a, b, c, d, x, y), Q(1))
                            bump(vec, (a, b, c, d, 1, 1), Q(-1))
                    hom.append(vec)
        # Locality, Alice side: p(a, c, d | x) independent of y
        for a in range(1, A + 1):
            for c in range(1, A + 1):
                for d in range(1, B + 1):
                    for x in range(1, X + 1):
                        for y in range(2, Y + 1):
                            vec = row()
                            for b in range(1, B + 1):
                                bump(vec, (a, b, c, d, x, y), Q(1))
                                bump(vec, (a, b, c, d, x, 1), Q(-1))
                            hom.append(vec)
        # Locality, Bob side: p(b, c, d | y) independent of x
        for b in range(1, B + 1):
            for c in range(1, A + 1):
                for d in range(1, B + 1):
                    for y in range(1, Y + 1):
                        for x in range(2, X + 1):
                            vec = row()
                            for a in range(1, A + 1):
                                bump(vec, (a, b, c, d, x, y), Q(1))
                                bump(vec, (a, b, c, d, 1, y), Q(-1))
                            hom.append(vec)
        self.hom_rows = hom

        self.norm_rows = []
        for x in range(1, X + 1):
            for y in range(1, Y + 1):
                vec = row()
                for a in range(1, A + 1):
                    for b in range(1, B + 1):
                        for c in range(1, A + 1):
                            for d in range(1, B + 1):
                                bump(vec, (a, b, c, d, x, y), Q(1))
                self.norm_rows.append(vec)

        # marginal row per behavior entry, canonical entry order
        self.entry_order = list(sc.index_set())
        self.marginal_rows = []
        for (a, b, x, y) in self.entry_order:
            vec = row()
            for c in range(1, A + 1):
                for d in range(1, B + 1):
                    bump(vec, (a, b, c, d, x, y), Q(1))
            self.marginal_rows.append(vec)

    def extension_from_solution(self, x: Sequence) -> LfExtension:
        table = {k: ZERO for k in _ext_index_set(self.scenario)}
        for k, i in self.var_index.items():
            table[k] = as_rational(x[i])
        return LfExtension(self.scenario, table)


@lru_cache(maxsize=None)
def _lf_system(sc: Scenario) -> _LfSystem:
    return _LfSystem(sc)


@lru_cache(maxsize=None)
def _facet_reducer(sc: Scenario) -> EqualityReducer:
    return EqualityReducer(scenario_equalities(sc))


@lru_cache(maxsize=None)
def _norm_reducer(sc: Scenario) -> EqualityReducer:
    eqs = [e for e in scenario_equalities(sc) if e[1] != 0]
    return EqualityReducer(eqs)


def _vertex_vectors(sc: Scenario, cap: int = DEFAULT_VERTEX_CAP):
    return [(v, tuple(v.vector())) for v in enumerate_lhv_vertices(sc, cap)]


def canonical_inequality(ineq: Inequality, modulo_no_signalling: bool = True) -> Inequality:
    """Canonical representative: sense <=, integer coefficients with gcd 1,
    reduced modulo the scenario's equality space (normalization always;
    no-signalling equalities unless disabled)."""
    up = ineq.as_upper_bound()
    reducer = _facet_reducer(ineq.scenario) if modulo_no_signalling else _norm_reducer(ineq.scenario)
    canon = reducer.reduce(up.vector(), up.bound)
    coeffs_vec, bound = EqualityReducer.split(canon)
    coeffs = {idx: Q(c) for idx, c in zip(ineq.scenario.index_set(), coeffs_vec)}
    return Inequality(ineq.scenario, coeffs, Q(bound), "<=")


# ---------------------------------------------------------------------------
# Optimization
# ---------------------------------------------------------------------------

def _behavior_from_vector(sc: Scenario, vec: Sequence) -> Behavior:
    return Behavior(sc, {idx: as_rational(v) for idx, v in zip(sc.index_set(), vec)})


def _maximize(kind: PolytopeKind, ineq: Inequality,
              cap: int = DEFAULT_VERTEX_CAP) -> tuple[object, Behavior]:
    """Exact maximum of the functional sum coeffs*p over the polytope,
    with one attaining behavior."""
    sc = ineq.scenario
    c = ineq.vector()
    if kind is PolytopeKind.LHV:
        best = None
        best_beh = None
        for beh, vec in _vertex_vectors(sc, cap):
            val = dot(c, vec)
            if best is None or val > best:
                best, best_beh = val, beh
        return best, best_beh
    if kind is PolytopeKind.NS:
        eqs = scenario_equalities(sc)
        res = linprog.solve(c, A_eq=[list(e) for e, _ in eqs],
                            b_eq=[v for _, v in eqs],
                            maximize=True, nonneg=True)
        assert res.status == linprog.OPTIMAL
        return res.value, _behavior_from_vector(sc, res.x)
    if kind is PolytopeKind.LF:
        sys = _lf_system(sc)
        coeff_by_entry = {idx: cv for idx, cv in zip(sc.index_set(), c)}
        obj = [coeff_by_entry[(a, b, x, y)] for (a, b, _c, _d, x, y) in sys.vars]
        A_eq = sys.hom_rows + sys.norm_rows
        b_eq = [ZERO] * len(sys.hom_rows) + [Q(1)] * len(sys.norm_rows)
        res = linprog.solve(obj, A_eq=A_eq, b_eq=b_eq, maximize=True, nonneg=True)
        assert res.status == linprog.OPTIMAL
        ext = sys.extension_from_solution(res.x)
        return res.value, ext.behavior()
    raise ValueError(f"unknown kind {kind}")


def max_over_polytope(kind: PolytopeKind, ineq: Inequality,
                      cap: int = DEFAULT_VERTEX_CAP):
    """Exact LP optimum of the inequality's functional over the polytope."""
    value, _ = _maximize(kind, ineq, cap)
    return value


# ---------------------------------------------------------------------------
# Membership
# ---------------------------------------------------------------------------

def _require_exact_normalized(b: Behavior) -> None:
    if not b.is_exact:
        raise StructuralError("membership needs exact rational behaviors; rationalize first")
    rep = validate_behavior(b)
    if not rep.is_normalized or not rep.is_nonnegative:
        raise StructuralError("membership needs a normalized nonnegative behavior")


def _certificate_from_functional(kind: PolytopeKind, sc: Scenario,
                                 f: Sequence, cap: int) -> Inequality:
    """Separating inequality from a raw functional: canonicalize modulo the
    normalization equalities (valid for any normalized query, signalling or
    not) and set the bound to the exact polytope maximum."""
    coeffs = {idx: as_rational(v) for idx, v in zip(sc.index_set(), f)}
    raw = Inequality(sc, coeffs, ZERO, "<=")
    canon = canonical_inequality(raw, modulo_no_signalling=False)
    bound, _ = _maximize(kind, canon, cap)
    return Inequality(sc, canon.coeffs, bound, "<=")


def membership(kind: PolytopeKind, b: Behavior,
               cap: int = DEFAULT_VERTEX_CAP) -> MembershipResult:
    """Exact membership with certificates.

    Inside: a convex decomposition over LHV vertices (LHV), a valid
    LfExtension (LF), or the trivial no-signalling check (NS).  Outside: a
    separating Inequality whose bound is attained on the polytope and
    strictly exceeded by the query.
    """
    _require_exact_normalized(b)
    sc = b.scenario
    p = b.vector()
    n = len(p)

    if kind is PolytopeKind.NS:
        rep = validate_behavior(b)
        if rep.is_no_signalling:
            return MembershipResult(kind, True)
        # certificate: the most violated signalling functional
        f = _signalling_functional(b)
        cert = _certificate_from_functional(kind, sc, f, cap)
        return MembershipResult(kind, False, certificate=cert)

    if kind is PolytopeKind.LHV:
        verts = _vertex_vectors(sc, cap)
        A_eq = [[vv[k] for _, vv in verts] for k in range(n)]
        A_eq.append([Q(1)] * len(verts))
        b_eq = list(p) + [Q(1)]
        res = linprog.solve([ZERO] * len(verts), A_eq=A_eq, b_eq=b_eq,
                            maximize=False, nonneg=True)
        if res.status == linprog.OPTIMAL:
            weights = tuple((beh, w) for (beh, _), w in zip(verts, res.x) if w != 0)
            return MembershipResult(kind, True, weights=weights)
        f = [-v for v in res.farkas[:n]]
        cert = _certificate_from_functional(kind, sc, f, cap)
        return MembershipResult(kind, False, certificate=cert)

    if kind is PolytopeKind.LF:
        sys = _lf_system(sc)
        A_eq = sys.marginal_rows + sys.hom_rows
        b_eq = list(p) + [ZERO] * len(sys.hom_rows)
        res = linprog.solve([ZERO] * len(sys.vars), A_eq=A_eq, b_eq=b_eq,
                            maximize=False, nonneg=True)
        if res.status == linprog.OPTIMAL:
            ext = sys.extension_from_solution(res.x)
            return MembershipResult(kind, True, extension=ext)
        f = [-v for v in res.farkas[:n]]
        cert = _certificate_from_functional(kind, sc, f, cap)
        return MembershipResult(kind, False, certificate=cert)

    raise ValueError(f"unknown kind {kind}")


def _signalling_functional(b: Behavior) -> list:
    """Marginal-difference functional with the largest violation by b,
    oriented so the query value is positive; identically zero on NS."""
    sc = b.scenario
    order = {idx: i for i, idx in enumerate(sc.index_set())}
    n = len(order)
    best_vec, best_val = None, ZERO
    for vec, _ in (e for e in scenario_equalities(sc) if e[1] == 0):
        val = dot(vec, b.vector())
        if abs(val) > abs(best_val):
            best_val = val
            best_vec = list(vec)
    assert best_vec is not None and best_val != 0
    if best_val < 0:
        best_vec = [-v for v in best_vec]
    return best_vec


# ---------------------------------------------------------------------------
# LF vertices
# ---------------------------------------------------------------------------

def _vertices_of_affine_positive(eqs: Sequence, n: int) -> list[tuple]:
    """Vertices of {p in R^n : p >= 0, equalities hold} via the double
    description of the homogenization cone in reduced coordinates."""
    aug = [list(vec) + [rhs] for vec, rhs in eqs]
    rows, pivots = rref(aug)
    if len(rows) and pivots and pivots[-1] == n:
        raise StructuralError("inconsistent equality system")
    pivot_set = set(pivots)
    free = [j for j in range(n) if j not in pivot_set]
    # p = p0 + N z over the free coordinates z
    p0 = [ZERO] * n
    N = [[ZERO] * len(free) for _ in range(n)]
    for row, pc in zip(rows, pivots):
        p0[pc] = row[n]
        for k, j in enumerate(free):
            N[pc][k] = -row[j]
    for k, j in enumerate(free):
        N[j][k] = Q(1)
    cone = [tuple([p0[i]] + N[i]) for i in range(n)]
    cone.append(tuple([Q(1)] + [ZERO] * len(free)))
    verts = []
    for ray in dd.extreme_rays(cone):
        t = ray[0]
        if t == 0:
            raise StructuralError("unbounded feasible set")  # unreachable
        z = [Q(v, t) for v in ray[1:]]
        verts.append(tuple(p0[i] + dot(N[i], z) for i in range(n)))
    return sorted(set(verts))


def enumerate_lf_vertices(sc: Scenario, cap: int = DEFAULT_VERTEX_CAP) -> list[Behavior]:
    """Vertices of the LF polytope.

    Conditioning an extension on the friend outcomes (c, d) shows the LF
    polytope is the convex hull of the pinned no-signalling polytopes
    NS_cd = {p in NS : p(a,b|1,y) = 0 for a != c, p(a,b|x,1) = 0 for
    b != d}; its vertex set is the union of their vertices filtered down
    to extreme points of the hull.
    """
    order = {idx: i for i, idx in enumerate(sc.index_set())}
    n = len(order)
    base_eqs = scenario_equalities(sc)
    candidates = set()
    for c in range(1, sc.a_count + 1):
        for d in range(1, sc.b_count + 1):
            eqs = list(base_eqs)
            for (a, b, x, y), i in order.items():
                if (x == 1 and a != c) or (y == 1 and b != d):
                    vec = [ZERO] * n
                    vec[i] = Q(1)
                    eqs.append((tuple(vec), ZERO))
            candidates.update(_vertices_of_affine_positive(eqs, n))
    if len(candidates) > cap:
        raise CapExceededError(f"{len(candidates)} LF vertex candidates exceed cap {cap}")
    cands = sorted(candidates)
    vertices = []
    for i, v in enumerate(cands):
        others = cands[:i] + cands[i + 1:]
        A_eq = [[o[k] for o in others] for k in range(n)]
        A_eq.append([Q(1)] * len(others))
        b_eq = list(v) + [Q(1)]
        res = linprog.solve([ZERO] * len(others), A_eq=A_eq, b_eq=b_eq,
                            maximize=False, nonneg=True)
        if res.status != linprog.OPTIMAL:
            vertices.append(_behavior_from_vector(sc, v))
    return vertices


def lf_facets_via_hull(sc: Scenario, cap: int = DEFAULT_VERTEX_CAP) -> list[Inequality]:
    """LF facets as the convex hull of enumerate_lf_vertices.

    Independent of the Fourier-Motzkin route in enumerate_facets: vertices
    come from the pinned-NS decomposition and the hull from double
    description in reduced affine coordinates.
    """
    vecs = [v.vector() for v in enumerate_lf_vertices(sc, cap)]
    hull = AffineHull(vecs)
    pts = [hull.reduce_point(v) for v in vecs]
    facets = [hull.lift_inequality(coeffs, bound)
              for coeffs, bound in dd.facets_of_points(pts)]
    return _facets_to_inequalities(sc, facets)


# ---------------------------------------------------------------------------
# Facet enumeration
# ---------------------------------------------------------------------------

def _check_caps(sc: Scenario, settings_cap: int) -> None:
    if sc.a_count != 2 or sc.b_count != 2:
        raise CapExceededError("facet enumeration supports binary outcomes only")
    if sc.x_count > settings_cap or sc.y_count > settings_cap:
        raise CapExceededError(
            f"facet enumeration capped at {settings_cap} settings per party")


def _facets_to_inequalities(sc: Scenario, facets) -> list[Inequality]:
    canon = set()
    for coeffs_vec, bound in facets:
        raw = Inequality(sc, {idx: as_rational(v) for idx, v in
                              zip(sc.index_set(), coeffs_vec)}, bound, "<=")
        c = canonical_inequality(raw)
        canon.add((tuple(int(v) for v in c.vector()), int(c.bound)))
    out = []
    for coeffs_vec, bound in sorted(canon):
        out.append(Inequality(sc, {idx: Q(v) for idx, v in
                                   zip(sc.index_set(), coeffs_vec)}, Q(bound), "<="))
    return out


def enumerate_facets(kind: PolytopeKind, sc: Scenario,
                     settings_cap: int = DEFAULT_SETTINGS_CAP,
                     fme_max_rows: int = 20000,
                     fme_lp_prune_threshold: int = 0) -> list[Inequality]:
    """Complete irredundant facet list in canonical integer form,
    lexicographically sorted (relabeling duplicates kept)."""
    _check_caps(sc, settings_cap)

    if kind is PolytopeKind.LHV:
        vecs = [vv for _, vv in _vertex_vectors(sc)]
        hull = AffineHull(vecs)
        reduced = [hull.reduce_point(v) for v in vecs]
        facets = [hull.lift_inequality(c, b) for c, b in dd.facets_of_points(reduced)]
        return _facets_to_inequalities(sc, facets)

    if kind is PolytopeKind.NS:
        n = sc.table_size
        A_ineq = []
        for j in range(n):
            row = [ZERO] * n
            row[j] = Q(-1)
            A_ineq.append(row)
        eqs = scenario_equalities(sc)
        proj = fme.project(A_ineq, [ZERO] * n,
                           [list(e) for e, _ in eqs], [v for _, v in eqs],
                           n_keep=n)
        return _facets_to_inequalities(sc, proj.inequalities)

    if kind is PolytopeKind.LF:
        sys = _lf_system(sc)
        n = sc.table_size
        m = len(sys.vars)
        total = n + m
        A_ineq = []
        for j in range(m):
            row = [ZERO] * total
            row[n + j] = Q(-1)
            A_ineq.append(row)
        b_ineq = [ZERO] * m
        A_eq = []
        b_eq = []
        for k, mrow in enumerate(sys.marginal_rows):
            row = [ZERO] * total
            row[k] = Q(1)
            for j, v in enumerate(mrow):
                row[n + j] = -v
            A_eq.append(row)
            b_eq.append(ZERO)
        for hrow in sys.hom_rows:
            A_eq.append([ZERO] * n + [v for v in hrow])
            b_eq.append(ZERO)
        for nrow in sys.norm_rows:
            A_eq.append([ZERO] * n + [v for v in nrow])
            b_eq.append(Q(1))
        proj = fme.project(A_ineq, b_ineq, A_eq, b_eq, n_keep=n,
                           max_rows=fme_max_rows,
                           lp_prune_threshold=fme_lp_prune_threshold)
        return _facets_to_inequalities(sc, proj.inequalities)

    raise ValueError(f"unknown kind {kind}")


# ---------------------------------------------------------------------------
# 2D slices
# ---------------------------------------------------------------------------

def slice_2d(kinds: Sequence[PolytopeKind], f1: Inequality, f2: Inequality,
             resolution: int, direction_den: int = 10**6) -> SliceData:
    """Support points of the shadow {(f1(b), f2(b))} for each kind, probed
    along ``resolution`` equally spaced (rationalized) directions."""
    if f1.scenario != f2.scenario:
        raise ScenarioMismatchError("slice functionals must share a scenario")
    if resolution < 1:
        raise StructuralError("resolution must be positive")
    sc = f1.scenario
    r = _facet_reducer(sc)
    c1 = r.reduce(f1.vector(), 0)[:-1]
    c2 = r.reduce(f2.vector(), 0)[:-1]
    if all(v == 0 for v in c1) or all(v == 0 for v in c2) or _parallel(c1, c2):
        raise StructuralError("degenerate slice basis: functionals are "
                              "linearly dependent modulo the equality space")

    points: dict[str, tuple] = {}
    for kind in kinds:
        pts = []
        for k in range(resolution):
            theta = 2 * math.pi * k / resolution
            u = rationalize(math.cos(theta), direction_den)
            v = rationalize(math.sin(theta), direction_den)
            coeffs = {idx: u * f1.coeffs[idx] + v * f2.coeffs[idx]
                      for idx in sc.index_set()}
            g = Inequality(sc, coeffs, ZERO, "<=")
            _, beh = _maximize(kind, g)
            pts.append((evaluate_inequality(f1, beh), evaluate_inequality(f2, beh)))
        points[kind.value] = tuple(pts)
    return SliceData(f1=f1, f2=f2, resolution=resolution, points=points)


def _parallel(u: Sequence, v: Sequence) -> bool:
    pivot = None
    for a, b in zip(u, v):
        if a == 0 and b == 0:
            continue
        if a == 0 or b == 0:
            return False
        if pivot is None:
            pivot = (a, b)
        elif a * pivot[1] != b * pivot[0]:
            return False
    return True
