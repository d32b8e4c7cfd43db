"""Fourier-Motzkin elimination with exact redundancy control.

Projects a rational system  A_ineq x <= b_ineq, A_eq x = b_eq  onto its
first ``n_keep`` coordinates.  Equalities are used first as exact
substitutions (no blow-up); the remaining variables are eliminated one at
a time by combining positive and negative rows.  Redundancy is controlled
by Imbert's ancestor-count acceleration plus exact-LP pruning, so the
final system is irredundant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from . import linprog
from .rationals import Q, ZERO, as_rational, normalize_integer_vector


@dataclass
class ProjectedSystem:
    """Projection result over the kept coordinates: inequalities
    (coeffs, bound) meaning coeffs.x <= bound, plus the affine-hull
    equalities (coeffs, const) meaning coeffs.x = const."""

    inequalities: list
    equalities: list


def _norm_ineq(vec: list, rhs) -> tuple[tuple, object]:
    canon = normalize_integer_vector(list(vec) + [rhs])
    return canon[:-1], canon[-1]


def _substitute_equalities(ineqs: list, eqs: list, n_keep: int, n: int):
    """Gauss-eliminate equalities, pivoting on eliminated-range variables
    first so kept coordinates survive.  Returns (inequalities, leftover
    equalities over kept vars, set of substituted-away variables)."""
    work = [list(vec) + [as_rational(rhs)] for vec, rhs in eqs]
    pivot_order = list(range(n - 1, n_keep - 1, -1)) + list(range(n_keep))
    used_rows = []
    substituted = set()
    for col in pivot_order:
        piv = None
        for i, row in enumerate(work):
            if i in used_rows or row[col] == 0:
                continue
            piv = i
            break
        if piv is None:
            continue
        prow = work[piv]
        inv = 1 / prow[col]
        work[piv] = prow = [v * inv for v in prow]
        for i, row in enumerate(work):
            if i != piv and row[col] != 0:
                f = row[col]
                work[i] = [v - f * pv for v, pv in zip(row, prow)]
        used_rows.append(piv)
        substituted.add(col)
        # substitute into inequalities
        for k, (vec, rhs, anc) in enumerate(ineqs):
            f = vec[col]
            if f != 0:
                vec = [v - f * pv for v, pv in zip(vec, prow[:-1])]
                rhs = rhs - f * prow[-1]
                ineqs[k] = (vec, rhs, anc)
    leftover = []
    for i, row in enumerate(work):
        if i in used_rows:
            continue
        if any(v != 0 for v in row[:-1]):
            leftover.append((tuple(row[:-1]), row[-1]))
        elif row[-1] != 0:
            raise ValueError("inconsistent equality system")
    return ineqs, leftover, substituted


def _prune_lp(ineqs: list, eqs: list, active_vars: list) -> list:
    """Drop inequalities implied by the rest of the system (exact LPs).

    ``active_vars`` are the coordinates still free; all others are zero in
    every row by construction at this point.
    """
    kept = list(ineqs)
    i = 0
    while i < len(kept):
        vec, rhs, anc = kept[i]
        others = kept[:i] + kept[i + 1:]
        c = [vec[j] for j in active_vars]
        A_ub = [[ov[j] for j in active_vars] for ov, _, _ in others]
        b_ub = [orhs for _, orhs, _ in others]
        A_eq = [[ev[j] for j in active_vars] for ev, _ in eqs]
        b_eq = [erhs for _, erhs in eqs]
        res = linprog.solve(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                            maximize=True, nonneg=False)
        if res.status == linprog.OPTIMAL and res.value <= rhs:
            kept.pop(i)
        else:
            i += 1
    return kept


def project(A_ineq: Sequence, b_ineq: Sequence,
            A_eq: Sequence, b_eq: Sequence,
            n_keep: int,
            max_rows: int = 20000,
            lp_prune_threshold: int = 0) -> ProjectedSystem:
    """Project onto the first n_keep coordinates.

    ``lp_prune_threshold``: run LP pruning after an elimination round
    whenever the row count exceeds it (0 = prune after every round).
    ``max_rows``: hard cap on intermediate rows, exceeded -> MemoryError.
    """
    if A_ineq:
        n = len(A_ineq[0])
    elif A_eq:
        n = len(A_eq[0])
    else:
        raise ValueError("empty system")

    ineqs = [([as_rational(v) for v in vec], as_rational(rhs), frozenset([k]))
             for k, (vec, rhs) in enumerate(zip(A_ineq, b_ineq))]
    eqs = [(vec, rhs) for vec, rhs in zip(A_eq, b_eq)]
    ineqs, leftover_eqs, substituted = _substitute_equalities(ineqs, eqs, n_keep, n)

    # leftover equalities may still involve eliminated-range coordinates
    # (they could not be pivoted, meaning those coordinates are forced into
    # relations); by construction of the pivot order they cannot, but keep
    # the guard for safety.
    for vec, _ in leftover_eqs:
        if any(vec[j] != 0 for j in range(n_keep, n)):
            raise AssertionError("equality left over an eliminated coordinate")

    to_eliminate = [j for j in range(n_keep, n) if j not in substituted]
    eliminated_count = 0

    while to_eliminate:
        # greedy: eliminate the variable with the fewest pos*neg combinations
        best_var, best_cost = None, None
        for j in to_eliminate:
            p = sum(1 for vec, _, _ in ineqs if vec[j] > 0)
            q = sum(1 for vec, _, _ in ineqs if vec[j] < 0)
            cost = p * q - (p + q)
            if best_cost is None or cost < best_cost:
                best_var, best_cost = j, cost
        j = best_var
        to_eliminate.remove(j)
        eliminated_count += 1

        pos, neg, zero = [], [], []
        for vec, rhs, anc in ineqs:
            if vec[j] > 0:
                pos.append((vec, rhs, anc))
            elif vec[j] < 0:
                neg.append((vec, rhs, anc))
            else:
                zero.append((vec, rhs, anc))
        new = list(zero)
        seen = {(_norm_ineq(v, r)) for v, r, _ in zero}
        imbert_cap = 1 + eliminated_count
        for pv, pr, pa in pos:
            for nv, nr, na in neg:
                anc = pa | na
                if len(anc) > imbert_cap:
                    continue
                alpha = pv[j]
                gamma = nv[j]
                vec = [-gamma * a + alpha * b for a, b in zip(pv, nv)]
                rhs = -gamma * pr + alpha * nr
                key = _norm_ineq(vec, rhs)
                if all(v == 0 for v in key[0]):
                    continue  # trivially true (rhs >= 0 by construction)
                if key in seen:
                    continue
                seen.add(key)
                new.append(([as_rational(v) for v in key[0]], as_rational(key[1]), anc))
        ineqs = new
        if len(ineqs) > max_rows:
            raise MemoryError(f"FME blow-up: {len(ineqs)} rows exceeds cap {max_rows}")
        if len(ineqs) > lp_prune_threshold:
            cols = list(range(n_keep)) + sorted(to_eliminate)
            ineqs = _prune_lp(ineqs, leftover_eqs, cols)

    # final exact irredundancy pass over kept coordinates
    ineqs = _prune_lp(ineqs, leftover_eqs, list(range(n_keep)))

    out_ineqs = [(_norm_ineq([vec[j] for j in range(n_keep)], rhs))
                 for vec, rhs, _ in ineqs]
    out_eqs = [(tuple(vec[:n_keep]), rhs) for vec, rhs in leftover_eqs]
    return ProjectedSystem(sorted(set(out_ineqs)), out_eqs)
