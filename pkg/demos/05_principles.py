"""What must a causal-modeling realist give up?

The principle graph encodes metaphysical assumptions as atoms, derivations
between them as Horn clauses, and each no-go theorem as "not all of this
bundle".  Forward chaining closes a position under the rules; a position is
inconsistent with a falsified theorem when its closure covers one of the
theorem's bundles; minimal repairs are the inclusion-minimal sets of held
principles whose removal restores consistency.

The punchline: the quantum causal modeling position survives the Bell
theorems (it simply drops Predetermination and Local Causality), but its
commitments *derive* Local Action -- so the local-friendliness theorem
leaves it no repair that keeps all of its causal-modeling core intact.
"""

from lfgeo.principles import (Position, closure, consistent, default_graph,
                              full_position, minimal_repairs, qcm_position)

g = default_graph()
qcm = qcm_position()

print("== The QCM position and its closure ==")
print(f"held: {sorted(qcm.held)}")
derived = closure(g, qcm) - qcm.held
print(f"derived by forward chaining: {sorted(derived)}")

print("\n== Consistency against the falsified theorems ==")
res = consistent(g, qcm, ["Bell64", "Bell76"])
print(f"consistent with Bell64 + Bell76 falsified: {res.ok}")
res = consistent(g, qcm, ["Bell64", "Bell76", "LF"])
print(f"consistent once LF is falsified too: {res.ok}")
for name, bundle in res.violated:
    print(f"  {name} bundle fully derived: {sorted(bundle)}")

print("\n== Minimal repairs for the QCM position ==")
for r in minimal_repairs(g, qcm, ["LF"]):
    print(f"  give up {sorted(r)}")
print("(every repair sacrifices one of the six core commitments)")

print("\n== Minimal repairs for the full position ==")
full = full_position()
for r in minimal_repairs(g, full, ["Bell64", "Bell76", "LF"]):
    print(f"  give up {sorted(r)}")
