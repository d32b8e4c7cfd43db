import json
from pathlib import Path

import numpy as np
import pytest

from lfgeo.behavior import Behavior, Scenario
from lfgeo.polytope import enumerate_lhv_vertices
from lfgeo.rationals import Q

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    assert FIXTURES.is_dir(), "run `lfgeo fixtures regen` first"
    return FIXTURES


def load_fixture(name: str):
    return json.loads((FIXTURES / name).read_text())


def random_rational_weights(rng, n: int, den: int = 1000):
    raw = [int(rng.integers(1, den)) for _ in range(n)]
    total = sum(raw)
    return [Q(v, total) for v in raw]


def random_lhv_mixture(sc: Scenario, rng) -> Behavior:
    verts = enumerate_lhv_vertices(sc)
    w = random_rational_weights(rng, len(verts))
    table = {idx: sum(wi * v.p[idx] for wi, v in zip(w, verts))
             for idx in sc.index_set()}
    return Behavior(sc, table)


_NS_VERTEX_CACHE = {}


def ns_vertices(sc: Scenario):
    from lfgeo.polytope import _vertices_of_affine_positive, scenario_equalities
    if sc not in _NS_VERTEX_CACHE:
        _NS_VERTEX_CACHE[sc] = _vertices_of_affine_positive(
            scenario_equalities(sc), sc.table_size)
    return _NS_VERTEX_CACHE[sc]


def random_ns_behavior(sc: Scenario, rng) -> Behavior:
    """Random exact no-signalling behavior: rational mixture of the NS
    polytope's vertices."""
    verts = ns_vertices(sc)
    w = random_rational_weights(rng, len(verts))
    table = {}
    for i, idx in enumerate(sc.index_set()):
        table[idx] = sum(wi * v[i] for wi, v in zip(w, verts))
    return Behavior(sc, table)
