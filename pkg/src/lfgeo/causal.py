"""Classical causal models: DAGs, d-separation, the Causal Markov
Condition, faithfulness, and the Bell-DAG fine-tuning scan.

Distributions are full joint tables over all nodes (latents included) with
exact rational or float entries; conditional-independence tests are exact
when tables are rational.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .behavior import Behavior, Scenario, StructuralError, chsh_inequality, \
    evaluate_inequality, validate_behavior
from .polytope import PolytopeKind, membership
from .rationals import Q, ZERO, as_rational, is_rational

IMPLIED_CIS_NODE_CAP = 8
EXACT_TOL = Q(0)
FLOAT_TOL = 1e-9


@dataclass(frozen=True)
class Node:
    name: str
    kind: str  # "observed" | "latent"
    cardinality: int

    def __post_init__(self):
        if self.kind not in ("observed", "latent"):
            raise StructuralError(f"unknown node kind {self.kind!r}")
        if self.cardinality < 1:
            raise StructuralError("cardinality must be positive")


@dataclass(frozen=True)
class CausalDag:
    nodes: tuple
    edges: tuple  # (parent_name, child_name) pairs

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        names = [n.name for n in self.nodes]
        if len(set(names)) != len(names):
            raise StructuralError("duplicate node names")
        known = set(names)
        seen = set()
        for u, v in self.edges:
            if u not in known or v not in known:
                raise StructuralError(f"edge ({u}, {v}) references unknown node")
            if u == v:
                raise StructuralError(f"self-loop on {u}")
            if (u, v) in seen:
                raise StructuralError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
        if self._has_cycle():
            raise StructuralError("graph is cyclic")

    def _has_cycle(self) -> bool:
        order = self.topological_order(strict=False)
        return order is None

    def topological_order(self, strict: bool = True) -> Optional[list]:
        indeg = {n.name: 0 for n in self.nodes}
        for _, v in self.edges:
            indeg[v] += 1
        ready = sorted(n for n, d in indeg.items() if d == 0)
        order = []
        while ready:
            n = ready.pop(0)
            order.append(n)
            changed = False
            for u, v in self.edges:
                if u == n:
                    indeg[v] -= 1
                    if indeg[v] == 0:
                        ready.append(v)
                        changed = True
            if changed:
                ready.sort()
        if len(order) != len(self.nodes):
            if strict:
                raise StructuralError("graph is cyclic")
            return None
        return order

    def node(self, name: str) -> Node:
        for n in self.nodes:
            if n.name == name:
                return n
        raise StructuralError(f"unknown node {name!r}")

    def parents(self, name: str) -> list:
        self.node(name)
        return sorted(u for u, v in self.edges if v == name)

    def children(self, name: str) -> list:
        self.node(name)
        return sorted(v for u, v in self.edges if u == name)

    def descendants(self, name: str) -> set:
        out = set()
        stack = [name]
        while stack:
            for c in self.children(stack.pop()):
                if c not in out:
                    out.add(c)
                    stack.append(c)
        return out

    def observed_names(self) -> list:
        return [n.name for n in self.nodes if n.kind == "observed"]


@dataclass(frozen=True)
class CiStatement:
    """A independent of B given Z."""

    A: frozenset
    B: frozenset
    Z: frozenset

    def __post_init__(self):
        A, B, Z = frozenset(self.A), frozenset(self.B), frozenset(self.Z)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "Z", Z)
        if not A or not B:
            raise StructuralError("A and B must be nonempty")
        if A & B or A & Z or B & Z:
            raise StructuralError("A, B, Z must be pairwise disjoint")

    def sort_key(self):
        return (tuple(sorted(self.A)), tuple(sorted(self.B)), tuple(sorted(self.Z)))


@dataclass(frozen=True)
class JointDistribution:
    """Full joint table; assignments are tuples in node order, values
    0..card-1 per node."""

    nodes: tuple  # of Node
    table: Mapping

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        cards = [n.cardinality for n in self.nodes]
        full = set(itertools.product(*[range(c) for c in cards]))
        if set(self.table) != full:
            raise StructuralError("table must cover every full assignment")
        exact = all(is_rational(v) for v in self.table.values())
        total = sum(self.table.values())
        tol = EXACT_TOL if exact else FLOAT_TOL
        if any(v < -tol for v in self.table.values()):
            raise StructuralError("negative probability")
        if abs(total - 1) > tol:
            raise StructuralError(f"table sums to {total}, not 1")

    def is_exact(self) -> bool:
        return all(is_rational(v) for v in self.table.values())

    def _index(self, names: Sequence[str]) -> list:
        order = [n.name for n in self.nodes]
        return [order.index(nm) for nm in names]

    def marginal(self, names: Sequence[str]) -> dict:
        idx = self._index(names)
        out = {}
        for assign, p in self.table.items():
            key = tuple(assign[i] for i in idx)
            out[key] = out.get(key, 0) + p
        return out

    def ci_holds(self, stmt: CiStatement, tol=None) -> bool:
        """p(A,B|Z) = p(A|Z) p(B|Z) wherever p(Z) > 0."""
        if tol is None:
            tol = EXACT_TOL if self.is_exact() else FLOAT_TOL
        A, B, Z = sorted(stmt.A), sorted(stmt.B), sorted(stmt.Z)
        pabz = self.marginal(A + B + Z)
        paz = self.marginal(A + Z)
        pbz = self.marginal(B + Z)
        pz = self.marginal(Z)
        na, nb = len(A), len(B)
        for key, p in pabz.items():
            a, b, z = key[:na], key[na:na + nb], key[na + nb:]
            if pz[z] == 0:
                continue
            # p(abz) p(z) = p(az) p(bz)
            lhs = p * pz[z]
            rhs = paz[a + z] * pbz[b + z]
            if abs(lhs - rhs) > tol:
                return False
        return True


# ---------------------------------------------------------------------------
# d-separation (Bayes-ball reachability)
# ---------------------------------------------------------------------------

def d_separated(g: CausalDag, stmt: CiStatement) -> bool:
    """True iff every path between A and B is blocked given Z."""
    for nm in stmt.A | stmt.B | stmt.Z:
        g.node(nm)
    Z = set(stmt.Z)
    ancestors_of_z = set(Z)
    for z in Z:
        for n in g.nodes:
            if z in g.descendants(n.name):
                ancestors_of_z.add(n.name)

    # Bayes-ball: states are (node, direction), direction "up" = entered
    # from a child, "down" = entered from a parent.
    start = [(a, "up") for a in stmt.A]
    visited = set(start)
    stack = list(start)
    while stack:
        node, direction = stack.pop()
        if node in stmt.B:
            return False
        moves = []
        if direction == "up" and node not in Z:
            moves += [(p, "up") for p in g.parents(node)]
            moves += [(c, "down") for c in g.children(node)]
        elif direction == "down":
            if node not in Z:
                moves += [(c, "down") for c in g.children(node)]
            if node in ancestors_of_z:
                moves += [(p, "up") for p in g.parents(node)]
        for mv in moves:
            if mv not in visited:
                visited.add(mv)
                stack.append(mv)
    return True


def implied_cis(g: CausalDag, observed_only: bool = False) -> list:
    """All d-separation-implied CI statements with singleton A and B."""
    if len(g.nodes) > IMPLIED_CIS_NODE_CAP:
        raise StructuralError(
            f"node count {len(g.nodes)} exceeds cap {IMPLIED_CIS_NODE_CAP}")
    names = sorted(g.observed_names() if observed_only else [n.name for n in g.nodes])
    out = []
    for a, b in itertools.combinations(names, 2):
        rest = [n for n in names if n not in (a, b)]
        for r in range(len(rest) + 1):
            for z in itertools.combinations(rest, r):
                stmt = CiStatement(frozenset([a]), frozenset([b]), frozenset(z))
                if d_separated(g, stmt):
                    out.append(stmt)
    return sorted(out, key=CiStatement.sort_key)


# ---------------------------------------------------------------------------
# Markov condition and faithfulness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CmcNodeReport:
    node: str
    passes: bool
    max_residual: object


@dataclass(frozen=True)
class FaithfulnessReport:
    extra_cis: tuple
    missing_cis: tuple

    @property
    def holds(self) -> bool:
        return not self.extra_cis and not self.missing_cis


def cmc_check(g: CausalDag, d: JointDistribution, tol=None) -> list:
    """Per node X: p(X | nondescendants, parents) = p(X | parents)."""
    if tuple(n.name for n in d.nodes) != tuple(n.name for n in g.nodes):
        raise StructuralError("distribution nodes must match graph nodes")
    for gn, dn in zip(g.nodes, d.nodes):
        if gn.cardinality != dn.cardinality:
            raise StructuralError(f"cardinality mismatch on {gn.name}")
    if tol is None:
        tol = EXACT_TOL if d.is_exact() else FLOAT_TOL
    reports = []
    all_names = [n.name for n in g.nodes]
    for n in g.nodes:
        x = n.name
        pa = g.parents(x)
        nd = sorted(set(all_names) - g.descendants(x) - {x} - set(pa))
        max_res = ZERO if d.is_exact() else 0.0
        if nd:
            # p(x | nd, pa) p(pa) consistency: p(x,nd,pa) p(pa) = p(x,pa) p(nd,pa)
            pxnp = d.marginal([x] + nd + pa)
            pxp = d.marginal([x] + pa)
            pnp = d.marginal(nd + pa)
            pp = d.marginal(pa)
            for key, p in pxnp.items():
                xv, ndv, pav = key[0:1], key[1:1 + len(nd)], key[1 + len(nd):]
                if pnp[ndv + pav] == 0:
                    continue
                res = abs(p * pp[pav] - pxp[xv + pav] * pnp[ndv + pav])
                if res > max_res:
                    max_res = res
        reports.append(CmcNodeReport(node=x, passes=max_res <= tol, max_residual=max_res))
    return reports


def faithfulness_check(g: CausalDag, d: JointDistribution, tol=None) -> FaithfulnessReport:
    """Compare CIs holding in d (observed nodes only) against the
    d-separation-implied set; extra CIs witness fine-tuning, missing CIs
    witness Markov violations."""
    observed = sorted(g.observed_names())
    implied = set(implied_cis(g, observed_only=True))
    extra, missing = [], []
    for a, b in itertools.combinations(observed, 2):
        rest = [n for n in observed if n not in (a, b)]
        for r in range(len(rest) + 1):
            for z in itertools.combinations(rest, r):
                stmt = CiStatement(frozenset([a]), frozenset([b]), frozenset(z))
                holds = _ci_holds_marginal(d, stmt, tol)
                if holds and stmt not in implied:
                    extra.append(stmt)
                elif not holds and stmt in implied:
                    missing.append(stmt)
    return FaithfulnessReport(
        extra_cis=tuple(sorted(extra, key=CiStatement.sort_key)),
        missing_cis=tuple(sorted(missing, key=CiStatement.sort_key)))


def _ci_holds_marginal(d: JointDistribution, stmt: CiStatement, tol=None) -> bool:
    return d.ci_holds(stmt, tol=tol)


def markov_distribution(g: CausalDag, cpts: Mapping) -> JointDistribution:
    """Forward-factorized joint: cpts[name] maps parent assignments (tuple
    in sorted parent order) to a distribution list over the node's values."""
    order = [n.name for n in g.nodes]
    cards = {n.name: n.cardinality for n in g.nodes}
    table = {}
    for assign in itertools.product(*[range(cards[nm]) for nm in order]):
        val = {nm: v for nm, v in zip(order, assign)}
        p = 1
        for nm in order:
            pa = tuple(val[q] for q in g.parents(nm))
            p = p * cpts[nm][pa][val[nm]]
        table[assign] = p
    return JointDistribution(nodes=tuple(g.nodes), table=table)


def random_markov_distribution(g: CausalDag, rng) -> JointDistribution:
    """Random exact-rational CPTs (denominator 1000) for property tests."""
    cpts = {}
    for n in g.nodes:
        pa_cards = [g.node(q).cardinality for q in g.parents(n.name)]
        cpt = {}
        for pa in itertools.product(*[range(c) for c in pa_cards]):
            raw = [int(rng.integers(1, 1000)) for _ in range(n.cardinality)]
            total = sum(raw)
            cpt[pa] = [Q(v, total) for v in raw]
        cpts[n.name] = cpt
    return markov_distribution(g, cpts)


# ---------------------------------------------------------------------------
# Bell DAG scan
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DagScanRow:
    dag_id: int
    edges: tuple
    ns_implied: bool
    lhv_forced: bool
    classification: str  # "reproduces_fine_tuned" | "faithful_impossible"


def _bell_dag_family() -> list:
    """All DAGs over {X, Y, A, B, Lambda} with X, Y, Lambda roots.

    Free choices: each of the 6 edges from {X, Y, Lambda} into {A, B}
    present or absent, plus the A-B edge in either direction or absent
    (2^6 * 3 = 192 graphs)."""
    roots = ["X", "Y", "Lambda"]
    outs = ["A", "B"]
    optional = [(r, o) for r in roots for o in outs]
    dags = []
    for mask in range(2 ** len(optional)):
        chosen = [e for i, e in enumerate(optional) if mask >> i & 1]
        for ab in (None, ("A", "B"), ("B", "A")):
            edges = list(chosen) + ([ab] if ab else [])
            dags.append(tuple(sorted(edges)))
    return dags


def _scan_nodes(latent_cardinality: int) -> tuple:
    return (Node("A", "observed", 2), Node("B", "observed", 2),
            Node("Lambda", "latent", latent_cardinality),
            Node("X", "observed", 2), Node("Y", "observed", 2))


def bell_dag_scan(b: Behavior, latent_cardinality: int = 4) -> list:
    """Classify every DAG in the family against a Bell-violating behavior.

    A DAG whose d-separations imply the no-signalling conditionals
    (A indep Y | X, Lambda) and (B indep X | Y, Lambda) forces, through the
    Markov factorization, an LHV decomposition -- so it cannot reproduce a
    Bell-violating behavior ("faithful_impossible").  Every other DAG can
    only reproduce the behavior by satisfying no-signalling equalities its
    graph does not imply ("reproduces_fine_tuned").
    """
    sc = b.scenario
    if (sc.x_count, sc.y_count, sc.a_count, sc.b_count) != (2, 2, 2, 2):
        raise StructuralError("scan needs a 2x2 binary behavior")
    if latent_cardinality < 1 or latent_cardinality > 4:
        raise StructuralError("latent_cardinality must be in 1..4")
    exact = b if b.is_exact else b.rationalized()
    report = validate_behavior(exact)
    if not report.is_no_signalling or not report.ok:
        raise StructuralError("behavior must be a valid no-signalling table")
    chsh_max = _max_chsh_violation(exact)
    if chsh_max <= 2:
        raise StructuralError("behavior does not violate a CHSH facet")
    inside_lhv = membership(PolytopeKind.LHV, exact).inside
    if inside_lhv:
        raise StructuralError("behavior is local despite CHSH check")  # unreachable

    nodes = _scan_nodes(latent_cardinality)
    rows = []
    for dag_id, edges in enumerate(_bell_dag_family()):
        g = CausalDag(nodes=nodes, edges=edges)
        ns_a = d_separated(g, CiStatement(frozenset(["A"]), frozenset(["Y"]),
                                          frozenset(["X", "Lambda"])))
        ns_b = d_separated(g, CiStatement(frozenset(["B"]), frozenset(["X"]),
                                          frozenset(["Y", "Lambda"])))
        ns_implied = ns_a and ns_b
        # With Lambda, X, Y all roots, screened-off no-signalling forces the
        # factorization p(ab|xy,l) = p(a|x,l) p(b|y,l); reproducing b would
        # place it inside LHV, which the precondition excludes.
        lhv_forced = ns_implied
        classification = ("faithful_impossible" if lhv_forced
                          else "reproduces_fine_tuned")
        rows.append(DagScanRow(dag_id=dag_id, edges=edges, ns_implied=ns_implied,
                               lhv_forced=lhv_forced, classification=classification))
    return rows


def _max_chsh_violation(b: Behavior):
    best = None
    sc = b.scenario
    for signs in itertools.product((1, -1), repeat=4):
        if signs.count(-1) % 2 == 0:
            continue  # CHSH facets carry an odd number of minus signs
        coeffs = {}
        for (x, y), s in zip(itertools.product((1, 2), (1, 2)), signs):
            for a in (1, 2):
                for bb in (1, 2):
                    coeffs[(a, bb, x, y)] = Q(s * (-1) ** (a + bb))
        from .behavior import Inequality
        val = evaluate_inequality(Inequality(sc, coeffs, Q(2), "<="), b)
        best = val if best is None else max(best, val)
    return best


# ---------------------------------------------------------------------------
# JSON / CSV
# ---------------------------------------------------------------------------

def dag_to_json(g: CausalDag) -> dict:
    return {"nodes": [{"name": n.name, "kind": n.kind, "card": n.cardinality}
                      for n in g.nodes],
            "edges": [list(e) for e in g.edges]}


def dag_from_json(data: dict) -> CausalDag:
    nodes = tuple(Node(d["name"], d["kind"], int(d["card"])) for d in data["nodes"])
    return CausalDag(nodes=nodes, edges=tuple(tuple(e) for e in data["edges"]))


def distribution_to_json(d: JointDistribution) -> dict:
    entries = []
    for assign in sorted(d.table):
        v = d.table[assign]
        if is_rational(v):
            num, den = v.numerator, v.denominator
            entries.append({"assignment": list(assign),
                            "num": int(num), "den": int(den)})
        else:
            entries.append({"assignment": list(assign), "value": float(v)})
    return {"nodes": [{"name": n.name, "kind": n.kind, "card": n.cardinality}
                      for n in d.nodes],
            "entries": entries}


def distribution_from_json(data: dict) -> JointDistribution:
    nodes = tuple(Node(n["name"], n["kind"], int(n["card"]))
                  for n in data["nodes"])
    table = {}
    for e in data["entries"]:
        key = tuple(int(v) for v in e["assignment"])
        if "num" in e:
            table[key] = Q(int(e["num"]), int(e["den"]))
        else:
            table[key] = float(e["value"])
    return JointDistribution(nodes=nodes, table=table)


def scan_to_csv(rows: Sequence[DagScanRow]) -> str:
    lines = ["dag_id,edges,ns_implied,lhv_forced,classification"]
    for r in rows:
        edges = ";".join(f"{u}->{v}" for u, v in r.edges)
        lines.append(f"{r.dag_id},{edges},{r.ns_implied},{r.lhv_forced},"
                     f"{r.classification}")
    return "\n".join(lines) + "\n"
