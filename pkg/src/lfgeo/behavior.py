"""Scenarios, behaviors, inequalities and deterministic strategies.

Shared vocabulary of the whole package: a bipartite scenario fixes the
numbers of settings and outcomes per party (1-based indices; setting 1 is
the "open the vault" setting in Wigner's-friend scenarios), a behavior is
the conditional table p(a,b|x,y), and an inequality is a linear functional
over behavior entries together with a bound.

Probability entries are either exact rationals (polytope pipeline) or
floats (quantum pipeline); the two never mix silently — converting a float
behavior to rationals goes through :func:`Behavior.rationalized`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping

from .rationals import Q, ZERO, as_rational, is_rational, num_den, rationalize

Index = tuple[int, int, int, int]  # (a, b, x, y)


class StructuralError(ValueError):
    """Malformed object: incomplete table, bad index range, unknown name."""


class ScenarioMismatchError(ValueError):
    """Two objects built over different scenarios were combined."""


@dataclass(frozen=True, order=True)
class Scenario:
    """Bipartite measurement scenario: settings x in 1..x_count, y in
    1..y_count; outcomes a in 1..a_count, b in 1..b_count (uniform
    cardinality across settings)."""

    x_count: int
    y_count: int
    a_count: int = 2
    b_count: int = 2

    def __post_init__(self):
        for name in ("x_count", "y_count", "a_count", "b_count"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise StructuralError(f"{name} must be a positive integer, got {v!r}")

    def index_set(self) -> Iterator[Index]:
        """All (a, b, x, y) indices in the canonical (x, y, a, b) order used
        for vector representations."""
        for x in range(1, self.x_count + 1):
            for y in range(1, self.y_count + 1):
                for a in range(1, self.a_count + 1):
                    for b in range(1, self.b_count + 1):
                        yield (a, b, x, y)

    @property
    def table_size(self) -> int:
        return self.x_count * self.y_count * self.a_count * self.b_count

    def check_index(self, idx: Index) -> None:
        a, b, x, y = idx
        if not (1 <= a <= self.a_count and 1 <= b <= self.b_count
                and 1 <= x <= self.x_count and 1 <= y <= self.y_count):
            raise StructuralError(f"index {idx} outside scenario {self}")

    def requires_vault_settings(self) -> bool:
        """Whether setting 1 can play the 'ask the friend' role on both
        sides (needs at least one further setting each)."""
        return self.x_count >= 2 and self.y_count >= 2


@dataclass(frozen=True)
class Behavior:
    """Conditional probability table p(a,b|x,y) over a scenario.

    Entries are exact rationals or floats, uniformly; ``is_exact`` tells
    which.  The table must be complete over the scenario's index set.
    """

    scenario: Scenario
    p: Mapping[Index, object]

    def __post_init__(self):
        table = dict(self.p)
        expected = set(self.scenario.index_set())
        if set(table) != expected:
            missing = expected - set(table)
            extra = set(table) - expected
            raise StructuralError(
                f"behavior table mismatch: {len(missing)} missing, {len(extra)} extra entries")
        exact = all(is_rational(v) for v in table.values())
        if not exact and not all(isinstance(v, float) for v in table.values()):
            raise StructuralError("behavior entries must be all-rational or all-float")
        object.__setattr__(self, "p", table)
        object.__setattr__(self, "_exact", exact)

    @property
    def is_exact(self) -> bool:
        return self._exact

    def __getitem__(self, idx: Index):
        return self.p[idx]

    def vector(self) -> list:
        """Entries in canonical index order."""
        return [self.p[idx] for idx in self.scenario.index_set()]

    def rationalized(self, max_den: int = 10**9) -> "Behavior":
        """Denominator-bounded rational rounding of a float behavior, then
        renormalized per setting pair so the result is exactly normalized.
        Lossy by design; exact behaviors pass through unchanged."""
        if self.is_exact:
            return self
        sc = self.scenario
        table = {idx: rationalize(v, max_den) for idx, v in self.p.items()}
        for x in range(1, sc.x_count + 1):
            for y in range(1, sc.y_count + 1):
                idxs = [(a, b, x, y) for a in range(1, sc.a_count + 1)
                        for b in range(1, sc.b_count + 1)]
                total = sum((table[i] for i in idxs), ZERO)
                if total == 0:
                    raise StructuralError(f"all-zero setting pair ({x},{y})")
                for i in idxs:
                    table[i] = table[i] / total
        return Behavior(sc, table)

    def mixed_with(self, other: "Behavior", weight) -> "Behavior":
        """Entrywise convex mixture weight*self + (1-weight)*other."""
        if self.scenario != other.scenario:
            raise ScenarioMismatchError("cannot mix behaviors over different scenarios")
        if self.is_exact and other.is_exact:
            w = as_rational(weight)
        else:
            w = float(weight)
        table = {idx: w * self.p[idx] + (1 - w) * other.p[idx]
                 for idx in self.scenario.index_set()}
        return Behavior(self.scenario, table)


@dataclass(frozen=True)
class Inequality:
    """Linear functional sum coeffs(a,b,x,y)*p(a,b|x,y) with a rational
    bound; ``sense`` is "<=" or ">=" and states the constraint satisfied
    inside the polytope the inequality bounds."""

    scenario: Scenario
    coeffs: Mapping[Index, object]
    bound: object
    sense: str = "<="

    def __post_init__(self):
        if self.sense not in ("<=", ">="):
            raise StructuralError(f"sense must be '<=' or '>=', got {self.sense!r}")
        table = {idx: as_rational(v) for idx, v in self.coeffs.items()}
        expected = set(self.scenario.index_set())
        if set(table) != expected:
            raise StructuralError("inequality coefficients must cover exactly the scenario's index set")
        object.__setattr__(self, "coeffs", table)
        object.__setattr__(self, "bound", as_rational(self.bound))

    def vector(self) -> list:
        return [self.coeffs[idx] for idx in self.scenario.index_set()]

    def as_upper_bound(self) -> "Inequality":
        """Equivalent inequality with sense normalized to <=."""
        if self.sense == "<=":
            return self
        neg = {idx: -v for idx, v in self.coeffs.items()}
        return Inequality(self.scenario, neg, -self.bound, "<=")

    def satisfied_by(self, b: Behavior, tol=0) -> bool:
        value = evaluate_inequality(self, b)
        up = self.as_upper_bound()
        if self is not up:
            value = -value
        return value <= up.bound + tol


@dataclass(frozen=True)
class DeterministicStrategy:
    """Local deterministic assignment: Alice's outcome as a function of x,
    Bob's as a function of y."""

    alice_map: Callable[[int], int]
    bob_map: Callable[[int], int]


@dataclass(frozen=True)
class ValidationReport:
    is_normalized: bool
    is_nonnegative: bool
    is_no_signalling: bool
    max_violation: object
    normalization_residual: object = ZERO
    nonnegativity_residual: object = ZERO
    no_signalling_residual: object = ZERO

    @property
    def ok(self) -> bool:
        return self.is_normalized and self.is_nonnegative and self.is_no_signalling


def validate_behavior(b: Behavior, tol=0) -> ValidationReport:
    """Check normalization, nonnegativity and no-signalling of a behavior.

    Residuals are exact rationals for exact behaviors, floats otherwise;
    a flag is true iff the corresponding residual is <= tol.
    """
    sc = b.scenario
    zero = ZERO if b.is_exact else 0.0
    norm_res = zero
    neg_res = zero
    ns_res = zero

    for x in range(1, sc.x_count + 1):
        for y in range(1, sc.y_count + 1):
            total = zero
            for a in range(1, sc.a_count + 1):
                for bb in range(1, sc.b_count + 1):
                    v = b[(a, bb, x, y)]
                    total += v
                    if -v > neg_res:
                        neg_res = -v
            norm_res = max(norm_res, abs(total - 1))

    # Alice marginal must not depend on y; Bob marginal must not depend on x.
    for x in range(1, sc.x_count + 1):
        for a in range(1, sc.a_count + 1):
            margs = [sum(b[(a, bb, x, y)] for bb in range(1, sc.b_count + 1))
                     for y in range(1, sc.y_count + 1)]
            for m in margs[1:]:
                ns_res = max(ns_res, abs(m - margs[0]))
    for y in range(1, sc.y_count + 1):
        for bb in range(1, sc.b_count + 1):
            margs = [sum(b[(a, bb, x, y)] for a in range(1, sc.a_count + 1))
                     for x in range(1, sc.x_count + 1)]
            for m in margs[1:]:
                ns_res = max(ns_res, abs(m - margs[0]))

    return ValidationReport(
        is_normalized=norm_res <= tol,
        is_nonnegative=neg_res <= tol,
        is_no_signalling=ns_res <= tol,
        max_violation=max(norm_res, neg_res, ns_res),
        normalization_residual=norm_res,
        nonnegativity_residual=neg_res,
        no_signalling_residual=ns_res,
    )


def deterministic_behavior(s: DeterministicStrategy, sc: Scenario) -> Behavior:
    """The 0/1 behavior realized by a local deterministic strategy."""
    alice = {x: s.alice_map(x) for x in range(1, sc.x_count + 1)}
    bob = {y: s.bob_map(y) for y in range(1, sc.y_count + 1)}
    for x, a in alice.items():
        if not 1 <= a <= sc.a_count:
            raise StructuralError(f"alice_map({x}) = {a} outside 1..{sc.a_count}")
    for y, b in bob.items():
        if not 1 <= b <= sc.b_count:
            raise StructuralError(f"bob_map({y}) = {b} outside 1..{sc.b_count}")
    table = {}
    for idx in sc.index_set():
        a, b, x, y = idx
        table[idx] = Q(1) if (alice[x] == a and bob[y] == b) else ZERO
    return Behavior(sc, table)


def evaluate_inequality(ineq: Inequality, b: Behavior):
    """The functional value sum coeffs * p; rational iff b is exact."""
    if ineq.scenario != b.scenario:
        raise ScenarioMismatchError(
            f"inequality over {ineq.scenario} applied to behavior over {b.scenario}")
    if b.is_exact:
        total = ZERO
        for idx, c in ineq.coeffs.items():
            total += c * b.p[idx]
        return total
    return float(sum(float(c) * b.p[idx] for idx, c in ineq.coeffs.items()))


# ---------------------------------------------------------------------------
# Stock behaviors and functionals
# ---------------------------------------------------------------------------

def uniform_behavior(sc: Scenario) -> Behavior:
    v = Q(1, sc.a_count * sc.b_count)
    return Behavior(sc, {idx: v for idx in sc.index_set()})


def pr_box(sc: Scenario = Scenario(2, 2, 2, 2)) -> Behavior:
    """The extremal no-signalling box: a+b even iff (x-1)(y-1) = 0, with
    uniform marginals.  Outcomes 1,2 encode bits 0,1."""
    if (sc.a_count, sc.b_count) != (2, 2):
        raise StructuralError("PR box needs binary outcomes")
    table = {}
    for idx in sc.index_set():
        a, b, x, y = idx
        hit = ((a - 1) ^ (b - 1)) == ((x - 1) * (y - 1)) % 2
        table[idx] = Q(1, 2) if hit else ZERO
    return Behavior(sc, table)


def correlator_functional(sc: Scenario, signs: Mapping[tuple[int, int], object],
                          bound, sense: str = "<=") -> Inequality:
    """Inequality sum_{x,y} signs[x,y] * E(x,y) <= bound, with the
    correlator E(x,y) = sum_ab (-1)^(a+b) p(a,b|x,y) expanded into entry
    coefficients.  Settings absent from ``signs`` get zero coefficients."""
    if (sc.a_count, sc.b_count) != (2, 2):
        raise StructuralError("correlator functionals need binary outcomes")
    coeffs = {}
    for idx in sc.index_set():
        a, b, x, y = idx
        s = signs.get((x, y), 0)
        parity = 1 if (a + b) % 2 == 0 else -1
        coeffs[idx] = as_rational(s) * parity
    return Inequality(sc, coeffs, bound, sense)


def chsh_inequality(sc: Scenario = Scenario(2, 2, 2, 2),
                    alice_settings: tuple[int, int] = (1, 2),
                    bob_settings: tuple[int, int] = (1, 2)) -> Inequality:
    """CHSH functional E(x1,y1)+E(x1,y2)+E(x2,y1)-E(x2,y2) <= 2 embedded in
    the given settings of a (possibly larger) binary scenario."""
    x1, x2 = alice_settings
    y1, y2 = bob_settings
    signs = {(x1, y1): 1, (x1, y2): 1, (x2, y1): 1, (x2, y2): -1}
    return correlator_functional(sc, signs, 2)


# ---------------------------------------------------------------------------
# JSON external format
# ---------------------------------------------------------------------------

def _scenario_to_json(sc: Scenario) -> dict:
    return {"x": sc.x_count, "y": sc.y_count, "a": sc.a_count, "b": sc.b_count}


def _scenario_from_json(obj: dict) -> Scenario:
    return Scenario(obj["x"], obj["y"], obj["a"], obj["b"])


def behavior_to_json(b: Behavior) -> dict:
    """Exhaustive num/den entry list; float behaviors must be rationalized
    first so the round trip is bit-exact."""
    if not b.is_exact:
        raise StructuralError("serialize exact behaviors only; call rationalized() first")
    entries = []
    for idx in b.scenario.index_set():
        a, bb, x, y = idx
        n, d = num_den(b.p[idx])
        entries.append({"a": a, "b": bb, "x": x, "y": y, "num": n, "den": d})
    return {"scenario": _scenario_to_json(b.scenario), "p": entries}


def behavior_from_json(obj: dict) -> Behavior:
    sc = _scenario_from_json(obj["scenario"])
    table = {}
    for e in obj["p"]:
        idx = (e["a"], e["b"], e["x"], e["y"])
        sc.check_index(idx)
        table[idx] = Q(e["num"], e["den"])
    return Behavior(sc, table)


def inequality_to_json(ineq: Inequality) -> dict:
    entries = []
    for idx in ineq.scenario.index_set():
        a, bb, x, y = idx
        n, d = num_den(ineq.coeffs[idx])
        entries.append({"a": a, "b": bb, "x": x, "y": y, "num": n, "den": d})
    bn, bd = num_den(ineq.bound)
    return {"scenario": _scenario_to_json(ineq.scenario), "coeffs": entries,
            "bound": {"num": bn, "den": bd}, "sense": ineq.sense}


def inequality_from_json(obj: dict) -> Inequality:
    sc = _scenario_from_json(obj["scenario"])
    coeffs = {}
    for e in obj["coeffs"]:
        idx = (e["a"], e["b"], e["x"], e["y"])
        sc.check_index(idx)
        coeffs[idx] = Q(e["num"], e["den"])
    bound = Q(obj["bound"]["num"], obj["bound"]["den"])
    return Inequality(sc, coeffs, bound, obj["sense"])


def dump_json(obj: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_json(path) -> dict:
    with open(path) as fh:
        return json.load(fh)
