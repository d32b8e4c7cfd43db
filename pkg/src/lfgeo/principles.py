"""AND-OR implication graph over named metaphysical principles.

Rules are definite Horn clauses (all premises imply the conclusion); no-go
theorems carry premise bundles that experiment jointly falsifies.  A
position is a set of basic commitments; consistency means no falsified
bundle lies inside the position's deductive closure, and repairs are
inclusion-minimal retractions restoring consistency.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .behavior import StructuralError

AOE = "AOE"
SPACE_TIME = "SpaceTime"
NO_SUPERDETERMINISM = "NoSuperdeterminism"
LOCALITY = "Locality"
PREDETERMINATION = "Predetermination"
LOCAL_CAUSALITY = "LocalCausality"
RPCC = "RPCC"
PCC = "PCC"
DECORRELATING_EXPLANATION = "DecorrelatingExplanation"
RELATIVISTIC_CAUSAL_ARROW = "RelativisticCausalArrow"
TEMPORAL_CAUSAL_ARROW = "TemporalCausalArrow"
RELATIVISTIC_CAUSALITY = "RelativisticCausality"
INDEPENDENT_INTERVENTIONS = "IndependentInterventions"
INTERVENTIONIST_CAUSATION = "InterventionistCausation"
LOCAL_ACTION = "LocalAction"


@dataclass(frozen=True)
class Rule:
    premises: frozenset
    conclusion: str
    citation: str = ""

    def __post_init__(self):
        object.__setattr__(self, "premises", frozenset(self.premises))
        if not self.premises:
            raise StructuralError("rule needs at least one premise")


@dataclass(frozen=True)
class Theorem:
    name: str
    bundles: tuple  # of frozenset

    def __post_init__(self):
        object.__setattr__(self, "bundles",
                           tuple(frozenset(b) for b in self.bundles))


@dataclass(frozen=True)
class PrincipleGraph:
    principles: frozenset
    rules: tuple
    theorems: tuple

    def __post_init__(self):
        object.__setattr__(self, "principles", frozenset(self.principles))
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "theorems", tuple(self.theorems))
        for r in self.rules:
            unknown = (r.premises | {r.conclusion}) - self.principles
            if unknown:
                raise StructuralError(f"rule mentions unknown principles {sorted(unknown)}")
        for t in self.theorems:
            for bundle in t.bundles:
                unknown = bundle - self.principles
                if unknown:
                    raise StructuralError(
                        f"theorem {t.name} mentions unknown principles {sorted(unknown)}")
        self._check_acyclic()

    def _check_acyclic(self):
        """A conclusion must never be among its own transitive premises."""
        deps = {}
        for r in self.rules:
            deps.setdefault(r.conclusion, set()).update(r.premises)
        for start in deps:
            seen, stack = set(), list(deps[start])
            while stack:
                n = stack.pop()
                if n == start:
                    raise StructuralError(f"cyclic derivation through {start}")
                if n not in seen:
                    seen.add(n)
                    stack.extend(deps.get(n, ()))

    def theorem(self, name: str) -> Theorem:
        for t in self.theorems:
            if t.name == name:
                return t
        raise StructuralError(f"unknown theorem {name!r}")


@dataclass(frozen=True)
class Position:
    held: frozenset

    def __post_init__(self):
        object.__setattr__(self, "held", frozenset(self.held))


@dataclass(frozen=True)
class ConsistencyResult:
    ok: bool
    violated: tuple  # of (theorem name, bundle frozenset)


def default_graph() -> PrincipleGraph:
    principles = {
        AOE, SPACE_TIME, NO_SUPERDETERMINISM, LOCALITY, PREDETERMINATION,
        LOCAL_CAUSALITY, RPCC, PCC, DECORRELATING_EXPLANATION,
        RELATIVISTIC_CAUSAL_ARROW, TEMPORAL_CAUSAL_ARROW,
        RELATIVISTIC_CAUSALITY, INDEPENDENT_INTERVENTIONS,
        INTERVENTIONIST_CAUSATION, LOCAL_ACTION,
    }
    rules = (
        Rule({PCC, DECORRELATING_EXPLANATION}, RPCC,
             "Reichenbach's principle splits into common cause + decorrelating explanation"),
        Rule({RPCC, RELATIVISTIC_CAUSAL_ARROW}, LOCAL_CAUSALITY,
             "local causality is the conjunction of the relativistic causal arrow "
             "and Reichenbach's principle"),
        Rule({TEMPORAL_CAUSAL_ARROW, RELATIVISTIC_CAUSALITY}, RELATIVISTIC_CAUSAL_ARROW,
             "a temporal arrow plus relativistic causality yields the relativistic arrow"),
        Rule({INDEPENDENT_INTERVENTIONS, PCC}, INTERVENTIONIST_CAUSATION,
             "interventionist causation arises from independent interventions "
             "plus the principle of common cause"),
        Rule({RELATIVISTIC_CAUSAL_ARROW, INTERVENTIONIST_CAUSATION}, LOCALITY,
             "the deep principles jointly imply locality"),
        Rule({RELATIVISTIC_CAUSAL_ARROW, INTERVENTIONIST_CAUSATION}, NO_SUPERDETERMINISM,
             "the deep principles jointly imply no-superdeterminism"),
        Rule({RELATIVISTIC_CAUSAL_ARROW, INTERVENTIONIST_CAUSATION}, LOCAL_ACTION,
             "the deep principles jointly imply local action"),
    )
    theorems = (
        Theorem("Bell64", (
            {AOE, SPACE_TIME, NO_SUPERDETERMINISM, LOCALITY, PREDETERMINATION},
            {AOE, SPACE_TIME, LOCAL_ACTION, PREDETERMINATION},
        )),
        Theorem("Bell76", (
            {AOE, SPACE_TIME, NO_SUPERDETERMINISM, LOCAL_CAUSALITY},
            {AOE, SPACE_TIME, LOCAL_ACTION, LOCAL_CAUSALITY},
        )),
        Theorem("LF", (
            {AOE, SPACE_TIME, NO_SUPERDETERMINISM, LOCALITY},
            {AOE, SPACE_TIME, LOCAL_ACTION},
        )),
    )
    return PrincipleGraph(principles=principles, rules=rules, theorems=theorems)


def closure(g: PrincipleGraph, pos: Position) -> frozenset:
    """Least fixed point of forward chaining from the held principles."""
    unknown = pos.held - g.principles
    if unknown:
        raise StructuralError(f"unknown principles {sorted(unknown)}")
    derived = set(pos.held)
    changed = True
    while changed:
        changed = False
        for r in g.rules:
            if r.conclusion not in derived and r.premises <= derived:
                derived.add(r.conclusion)
                changed = True
    return frozenset(derived)


def consistent(g: PrincipleGraph, pos: Position,
               falsified: Iterable[str]) -> ConsistencyResult:
    names = list(falsified)
    theorems = [g.theorem(n) for n in names]
    cl = closure(g, pos)
    violated = []
    for t in theorems:
        for bundle in t.bundles:
            if bundle <= cl:
                violated.append((t.name, bundle))
    return ConsistencyResult(ok=not violated, violated=tuple(violated))


def minimal_repairs(g: PrincipleGraph, pos: Position,
                    falsified: Iterable[str]) -> list:
    """All inclusion-minimal R subseteq held with (held - R) consistent,
    ordered by size then lexicographically."""
    names = list(falsified)
    held = sorted(pos.held)
    found = []
    for size in range(len(held) + 1):
        for combo in itertools.combinations(held, size):
            r = frozenset(combo)
            if any(prev <= r for prev in found):
                continue
            if consistent(g, Position(pos.held - r), names).ok:
                found.append(r)
        if size == 0 and found:
            break  # already consistent; the empty repair is uniquely minimal
    return sorted(found, key=lambda r: (len(r), tuple(sorted(r))))


def qcm_position() -> Position:
    """The causal-modeling camp's basic commitments."""
    return Position({AOE, SPACE_TIME, PCC, INDEPENDENT_INTERVENTIONS,
                     TEMPORAL_CAUSAL_ARROW, RELATIVISTIC_CAUSALITY})


def full_position() -> Position:
    """The basic (underived) principles, with No-Superdeterminism and
    Locality included redundantly (they are also derivable)."""
    return Position({AOE, SPACE_TIME, NO_SUPERDETERMINISM, LOCALITY,
                     PREDETERMINATION, PCC, DECORRELATING_EXPLANATION,
                     TEMPORAL_CAUSAL_ARROW, RELATIVISTIC_CAUSALITY,
                     INDEPENDENT_INTERVENTIONS})


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def graph_to_json(g: PrincipleGraph) -> dict:
    return {
        "principles": sorted(g.principles),
        "rules": [{"premises": sorted(r.premises), "conclusion": r.conclusion,
                   "citation": r.citation} for r in g.rules],
        "theorems": [{"name": t.name,
                      "bundles": [sorted(b) for b in t.bundles]}
                     for t in g.theorems],
    }


def graph_from_json(data: dict) -> PrincipleGraph:
    return PrincipleGraph(
        principles=frozenset(data["principles"]),
        rules=tuple(Rule(frozenset(r["premises"]), r["conclusion"],
                         r.get("citation", "")) for r in data["rules"]),
        theorems=tuple(Theorem(t["name"], tuple(frozenset(b) for b in t["bundles"]))
                       for t in data["theorems"]),
    )


def position_to_json(pos: Position) -> dict:
    return {"held": sorted(pos.held)}


def position_from_json(data: dict) -> Position:
    return Position(frozenset(data["held"]))
