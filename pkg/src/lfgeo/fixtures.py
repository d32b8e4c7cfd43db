"""Derived-value fixtures: every numeric claim the test suite relies on is
re-derivable here through the independent oracles (vertex enumeration,
double description, exact LPs, the grid oracle, exhaustive scans) and
written as JSON/CSV under a fixtures directory.

The default run covers everything except the exact Fourier-Motzkin
projection of the 3x3 extension system, which takes hours; ``full=True``
adds it.  All derivations are deterministic for a given seed.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from . import causal, principles, quantum
from .behavior import (Behavior, Inequality, Scenario, behavior_to_json,
                       chsh_inequality, evaluate_inequality,
                       inequality_to_json, pr_box, validate_behavior)
from .polytope import (PolytopeKind, enumerate_facets, enumerate_lf_vertices,
                       enumerate_lhv_vertices, lf_facets_via_hull,
                       max_over_polytope, membership)
from .rationals import Q, dot, num_den, rationalize

GRID_RESOLUTION_CHSH = 360
GRID_RESOLUTION_LF33 = 24
GRID_AGREEMENT_TOL = 2e-3
OPTIMIZER_STEPS = 120


def _rat(q) -> dict:
    n, d = num_den(q)
    return {"num": n, "den": d}


def correlator_behavior(sc: Scenario, correlators: dict) -> Behavior:
    """Uniform-marginal binary behavior with E(x,y) as given:
    p(a,b|x,y) = (1 + (-1)^(a+b) E(x,y)) / 4.  No-signalling by
    construction for any rational correlators in [-1, 1]."""
    table = {}
    for x in range(1, sc.x_count + 1):
        for y in range(1, sc.y_count + 1):
            e = correlators[(x, y)]
            for a in (1, 2):
                for b in (1, 2):
                    table[(a, b, x, y)] = (1 + (-1) ** (a + b) * e) / 4
    return Behavior(sc, table)


def quantum_chsh_point(max_den: int = 10**6) -> Behavior:
    """The CHSH = 2*sqrt(2) singlet point, rationalized entrywise through
    a single rounding of 1/sqrt(2) so it stays exactly no-signalling."""
    r = rationalize(1 / math.sqrt(2), max_den)
    signs = {(1, 1): r, (1, 2): r, (2, 1): r, (2, 2): -r}
    return correlator_behavior(Scenario(2, 2, 2, 2), signs)


def _membership_fixture(kind: PolytopeKind, b: Behavior) -> dict:
    res = membership(kind, b)
    out = {"kind": kind.value, "inside": res.inside}
    if res.certificate is not None:
        cert = res.certificate
        out["certificate"] = inequality_to_json(cert)
        out["certificate_value"] = _rat(evaluate_inequality(cert, b))
        out["certificate_polytope_max"] = _rat(max_over_polytope(kind, cert))
    return out


# ---------------------------------------------------------------------------
# Individual fixture builders
# ---------------------------------------------------------------------------

def _fx_polytope_2x2() -> dict:
    sc = Scenario(2, 2, 2, 2)
    chsh = chsh_inequality(sc)
    lhv_facets = enumerate_facets(PolytopeKind.LHV, sc)
    ns_facets = enumerate_facets(PolytopeKind.NS, sc)
    lf_facets = enumerate_facets(PolytopeKind.LF, sc)
    lhv_keys = {tuple(f.vector()) + (f.bound,) for f in lhv_facets}
    lf_keys = {tuple(f.vector()) + (f.bound,) for f in lf_facets}
    lf_vertex_keys = {tuple(v.vector()) for v in enumerate_lf_vertices(sc)}
    lhv_vertex_keys = {tuple(v.vector()) for v in enumerate_lhv_vertices(sc)}
    return {
        "lhv_vertex_count": len(lhv_vertex_keys),
        "lhv_facet_count": len(lhv_facets),
        "ns_facet_count": len(ns_facets),
        "lf_facet_count": len(lf_facets),
        "chsh_lhv_max": _rat(max_over_polytope(PolytopeKind.LHV, chsh)),
        "chsh_ns_max": _rat(max_over_polytope(PolytopeKind.NS, chsh)),
        "chsh_lf_max": _rat(max_over_polytope(PolytopeKind.LF, chsh)),
        # open question settled by computation: at two settings per party
        # the LF polytope coincides with the LHV polytope
        "lf_equals_lhv": lf_keys == lhv_keys and lf_vertex_keys == lhv_vertex_keys,
    }


def _fx_prbox_verdicts() -> dict:
    b = pr_box()
    return {"behavior": behavior_to_json(b),
            "chsh_value": _rat(evaluate_inequality(chsh_inequality(b.scenario), b)),
            "verdicts": {kind.value: _membership_fixture(kind, b)
                         for kind in (PolytopeKind.LHV, PolytopeKind.LF,
                                      PolytopeKind.NS)}}


def _lf33_facets() -> list:
    return lf_facets_via_hull(Scenario(3, 3, 2, 2))


def _ns33_vertices() -> list:
    from .polytope import _vertices_of_affine_positive, scenario_equalities
    sc = Scenario(3, 3, 2, 2)
    n = sc.table_size
    return _vertices_of_affine_positive(scenario_equalities(sc), n)


def _fx_lf33_strictness(facets, ns_vertices) -> dict:
    sc = Scenario(3, 3, 2, 2)
    lhv_keys = {tuple(v.vector()) for v in enumerate_lhv_vertices(sc)}
    nonlocal_vertex = next(v for v in enumerate_lf_vertices(sc)
                           if tuple(v.vector()) not in lhv_keys)
    inside_lf = membership(PolytopeKind.LF, nonlocal_vertex)
    assert inside_lf.inside

    # first NS vertex violating any LF facet, facets in canonical order
    witness = None
    for f in facets:
        vec, bound = f.vector(), f.bound
        for v in ns_vertices:
            if dot(vec, v) > bound:
                witness = Behavior(sc, dict(zip(sc.index_set(), v)))
                break
        if witness is not None:
            break
    assert witness is not None
    assert validate_behavior(witness).ok
    return {
        "lf_vertex_outside_lhv": {
            "behavior": behavior_to_json(nonlocal_vertex),
            "lhv": _membership_fixture(PolytopeKind.LHV, nonlocal_vertex),
            "inside_lf": True,
        },
        "ns_outside_lf": {
            "behavior": behavior_to_json(witness),
            "lf": _membership_fixture(PolytopeKind.LF, witness),
            "inside_ns": membership(PolytopeKind.NS, witness).inside,
        },
    }


def select_genuine_facet(facets, ns_vertices) -> Inequality:
    """Deterministic choice of the stored genuine LF facet: the first
    facet in canonical order that (a) some no-signalling behavior
    violates, and (b) the singlet grid oracle shows quantum-violated with
    the grid-seeded optimizer agreeing within the cross-check tolerance
    (so the stored violation is oracle-confirmed)."""
    for f in facets:
        vec, bound = f.vector(), f.bound
        if not any(dot(vec, v) > bound for v in ns_vertices):
            continue
        grid = quantum.tsirelson_grid(f, GRID_RESOLUTION_LF33)
        if grid <= float(bound) + 0.1:
            continue
        seed_params = quantum.grid_seed_params(f, GRID_RESOLUTION_LF33)
        res = quantum.optimize_violation(f, steps=OPTIMIZER_STEPS, seed=0,
                                         initial=seed_params)
        if abs(res.value - grid) <= GRID_AGREEMENT_TOL:
            return f
    raise AssertionError("no grid-confirmed genuine facet found")


def _fx_lf33_violation(facet: Inequality) -> dict:
    grid = quantum.tsirelson_grid(facet, GRID_RESOLUTION_LF33)
    seed_params = quantum.grid_seed_params(facet, GRID_RESOLUTION_LF33)
    res = quantum.optimize_violation(facet, steps=OPTIMIZER_STEPS, seed=0,
                                     initial=seed_params)
    beh = quantum.born_behavior(res.config.shared_state,
                                res.config.effective_alice(),
                                res.config.effective_bob())
    rational = beh.rationalized()
    verdict = membership(PolytopeKind.LF, rational)
    assert not verdict.inside
    return {
        "facet": inequality_to_json(facet),
        "bound": _rat(facet.bound),
        "lf_max": _rat(max_over_polytope(PolytopeKind.LF, facet)),
        "ns_max": _rat(max_over_polytope(PolytopeKind.NS, facet)),
        "optimizer": quantum.optimization_to_json(res, ineq_id="lf33_facet",
                                                  seed=0, steps=OPTIMIZER_STEPS),
        "grid_value": grid,
        "grid_resolution": GRID_RESOLUTION_LF33,
        "rationalized_behavior": behavior_to_json(rational),
        "rationalized_outside_lf": not verdict.inside,
        "lf_certificate": inequality_to_json(verdict.certificate),
    }


def _fx_chsh_quantum() -> dict:
    ineq = chsh_inequality(Scenario(2, 2, 2, 2))
    res = quantum.optimize_violation(ineq, steps=50, seed=7)
    grid = quantum.tsirelson_grid(ineq, GRID_RESOLUTION_CHSH)
    return {"optimizer_value": res.value, "optimizer_seed": 7,
            "optimizer_steps": 50, "grid_value": grid,
            "grid_resolution": GRID_RESOLUTION_CHSH,
            "tsirelson": 2 * math.sqrt(2)}


def _fx_dag_scans() -> dict:
    out = {}
    for name, beh in (("prbox", pr_box()), ("quantum", quantum_chsh_point())):
        rows = causal.bell_dag_scan(beh, latent_cardinality=4)
        faithful = [r for r in rows if r.classification
                    not in ("faithful_impossible", "reproduces_fine_tuned")]
        out[name] = {
            "csv": causal.scan_to_csv(rows),
            "dag_count": len(rows),
            "faithful_impossible": sum(
                1 for r in rows if r.classification == "faithful_impossible"),
            "fine_tuned": sum(
                1 for r in rows if r.classification == "reproduces_fine_tuned"),
            "dichotomy_holds": not faithful,
        }
    return out


def bell_dag() -> causal.CausalDag:
    nodes = (causal.Node("A", "observed", 2), causal.Node("B", "observed", 2),
             causal.Node("Lambda", "latent", 2),
             causal.Node("X", "observed", 2), causal.Node("Y", "observed", 2))
    return causal.CausalDag(nodes, (("Lambda", "A"), ("Lambda", "B"),
                                    ("X", "A"), ("Y", "B")))


def _fx_faithfulness(seed: int) -> dict:
    g = bell_dag()
    rng = np.random.default_rng(seed)
    d = causal.random_markov_distribution(g, rng)
    rep = causal.faithfulness_check(g, d)
    cmc = causal.cmc_check(g, d)
    return {"seed": seed, "holds": rep.holds,
            "extra_ci_count": len(rep.extra_cis),
            "missing_ci_count": len(rep.missing_cis),
            "cmc_passes": all(r.passes for r in cmc)}


def _fx_principles() -> dict:
    g = principles.default_graph()
    qcm = principles.qcm_position()
    partial = principles.Position({
        principles.TEMPORAL_CAUSAL_ARROW, principles.RELATIVISTIC_CAUSALITY,
        principles.INDEPENDENT_INTERVENTIONS, principles.PCC})
    key_set = {principles.AOE, principles.SPACE_TIME,
               principles.TEMPORAL_CAUSAL_ARROW, principles.RELATIVISTIC_CAUSALITY,
               principles.INDEPENDENT_INTERVENTIONS, principles.PCC}
    check_bell = principles.consistent(g, qcm, ["Bell64", "Bell76"])
    check_all = principles.consistent(g, qcm, ["Bell64", "Bell76", "LF"])
    repairs_lf = principles.minimal_repairs(g, qcm, ["LF"])
    repairs_full = principles.minimal_repairs(g, principles.full_position(),
                                              ["Bell64", "Bell76", "LF"])
    return {
        "graph": principles.graph_to_json(g),
        "qcm_position": principles.position_to_json(qcm),
        "partial_closure": sorted(principles.closure(g, partial)),
        "qcm_ok_bell_only": check_bell.ok,
        "qcm_ok_with_lf": check_all.ok,
        "qcm_violated": [[n, sorted(b)] for n, b in check_all.violated],
        "qcm_repairs_lf": [sorted(r) for r in repairs_lf],
        "full_position_repairs": [sorted(r) for r in repairs_full],
        "every_full_repair_touches_key_set": all(
            set(r) & key_set for r in repairs_full),
        "key_set": sorted(key_set),
    }


# ---------------------------------------------------------------------------
# Driver
# ---------------------------------------------------------------------------

def regen(out_dir, seed: int = 0, full: bool = False) -> list:
    """Re-derive every stored fixture; returns the written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def emit(name: str, obj) -> None:
        path = out / name
        if name.endswith(".csv"):
            path.write_text(obj)
        else:
            path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
        written.append(path)

    emit("polytope_2x2.json", _fx_polytope_2x2())
    emit("prbox_verdicts.json", _fx_prbox_verdicts())

    facets = _lf33_facets()
    ns_vertices = _ns33_vertices()
    emit("lf33_facet_count.json", {"facet_count": len(facets),
                                   "vertex_count": len(enumerate_lf_vertices(
                                       Scenario(3, 3, 2, 2)))})
    emit("lf33_strictness.json", _fx_lf33_strictness(facets, ns_vertices))
    genuine = select_genuine_facet(facets, ns_vertices)
    emit("lf33_facet.json", inequality_to_json(genuine))
    emit("lf33_violation.json", _fx_lf33_violation(genuine))

    emit("chsh_quantum.json", _fx_chsh_quantum())
    emit("chsh_ineq.json", inequality_to_json(chsh_inequality(Scenario(2, 2, 2, 2))))
    emit("quantum_chsh_point.json", behavior_to_json(quantum_chsh_point()))

    scans = _fx_dag_scans()
    for name, data in scans.items():
        emit(f"dag_scan_{name}.csv", data.pop("csv"))
        emit(f"dag_scan_{name}.json", data)
    emit("bell_dag.json", causal.dag_to_json(bell_dag()))
    emit("faithfulness.json", _fx_faithfulness(seed))

    emit("principles.json", _fx_principles())
    emit("qcm_position.json", principles.position_to_json(principles.qcm_position()))

    if full:
        fme_facets = enumerate_facets(PolytopeKind.LF, Scenario(3, 3, 2, 2),
                                      fme_max_rows=200000)
        hull_keys = sorted(tuple(int(v) for v in f.vector()) + (int(f.bound),)
                           for f in facets)
        fme_keys = sorted(tuple(int(v) for v in f.vector()) + (int(f.bound),)
                          for f in fme_facets)
        emit("lf33_fme_crosscheck.json", {
            "fme_facet_count": len(fme_facets),
            "matches_hull": fme_keys == hull_keys})
    return written
