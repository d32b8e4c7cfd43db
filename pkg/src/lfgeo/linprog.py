"""Exact rational linear programming via two-phase dense simplex.

All arithmetic is over exact rationals; Bland's anti-cycling rule makes
termination unconditional.  Infeasible systems come with a Farkas
certificate, which the polytope module turns into separating hyperplanes.

The solver handles the standard form

    minimize c.x   subject to  A x = b,  x >= 0,

and :func:`solve` wraps it for mixed <= / = constraints and free variables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .rationals import Q, ZERO, ONE, as_rational

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LpResult:
    status: str
    value: object = None
    x: Optional[list] = None
    # Farkas certificate for infeasible systems: multipliers y per original
    # constraint row with y.A <= 0 componentwise and y.b > 0.
    farkas: Optional[list] = None


def _pivot(T: list, basis: list, r: int, c: int) -> None:
    piv = T[r][c]
    row = T[r]
    inv = ONE / piv
    T[r] = [v * inv for v in row]
    prow = T[r]
    for i, other in enumerate(T):
        if i == r:
            continue
        f = other[c]
        if f != 0:
            T[i] = [ov - f * pv for ov, pv in zip(other, prow)]
    basis[r] = c


def _bland_step(T: list, basis: list, m: int, allowed_cols) -> str:
    """One simplex iteration on tableau T (row m = reduced-cost row,
    last column = RHS).  Returns 'optimal', 'unbounded' or 'pivoted'."""
    obj = T[m]
    enter = -1
    for j in allowed_cols:
        if obj[j] < 0:
            enter = j
            break
    if enter < 0:
        return OPTIMAL
    leave = -1
    best = None
    rhs_col = len(T[0]) - 1
    for i in range(m):
        a = T[i][enter]
        if a > 0:
            ratio = T[i][rhs_col] / a
            if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                best = ratio
                leave = i
    if leave < 0:
        return UNBOUNDED
    _pivot(T, basis, leave, enter)
    return "pivoted"


def _run_simplex(T: list, basis: list, m: int, allowed_cols) -> str:
    while True:
        st = _bland_step(T, basis, m, allowed_cols)
        if st != "pivoted":
            return st


def solve_standard(A: Sequence[Sequence], b: Sequence, c: Sequence,
                   maximize: bool = False) -> LpResult:
    """minimize (or maximize) c.x subject to A x = b, x >= 0, exactly.

    On infeasibility, ``farkas`` holds y with y.A <= 0 and y.b > 0.
    """
    m = len(A)
    n = len(c)
    A = [[as_rational(v) for v in row] for row in A]
    b = [as_rational(v) for v in b]
    c = [as_rational(v) for v in c]
    if maximize:
        c = [-v for v in c]

    # Phase 1: flip rows to b >= 0, add artificials, minimize their sum.
    flipped = [False] * m
    for i in range(m):
        if b[i] < 0:
            A[i] = [-v for v in A[i]]
            b[i] = -b[i]
            flipped[i] = True

    ncols = n + m + 1
    T = []
    for i in range(m):
        row = A[i] + [ZERO] * m + [b[i]]
        row[n + i] = ONE
        T.append(row)
    basis = [n + i for i in range(m)]
    # Reduced costs of the phase-1 objective (artificials cost 1): subtract
    # each constraint row from the cost row to zero out the basic columns.
    obj = [ZERO] * ncols
    for j in range(n):
        obj[j] = -sum(T[i][j] for i in range(m))
    obj[-1] = -sum(T[i][-1] for i in range(m))
    T.append(obj)

    st = _run_simplex(T, basis, m, range(n + m))
    assert st == OPTIMAL  # phase-1 objective is bounded below by 0
    phase1 = -T[m][-1]
    if phase1 > 0:
        # Farkas multipliers from the reduced costs of the artificial
        # columns: y_i = 1 - redcost(artificial i), sign-adjusted for rows
        # flipped during setup.
        y = []
        for i in range(m):
            yi = ONE - T[m][n + i]
            y.append(-yi if flipped[i] else yi)
        return LpResult(INFEASIBLE, farkas=y)

    # Drive leftover artificials out of the basis; drop redundant rows.
    keep = []
    for i in range(m):
        if basis[i] >= n:
            piv = -1
            for j in range(n):
                if T[i][j] != 0:
                    piv = j
                    break
            if piv < 0:
                continue  # redundant constraint row
            _pivot(T, basis, i, piv)
        keep.append(i)
    if len(keep) < m:
        T = [T[i] for i in keep] + [T[m]]
        basis = [basis[i] for i in keep]
        m = len(keep)

    # Phase 2 objective: reduced costs of c against the current basis.
    obj = list(c) + [ZERO] * (len(T[0]) - n - 1) + [ZERO]
    for i in range(m):
        cb = c[basis[i]] if basis[i] < n else ZERO
        if cb != 0:
            obj = [ov - cb * tv for ov, tv in zip(obj, T[i])]
    T[m] = obj

    st = _run_simplex(T, basis, m, range(n))
    if st == UNBOUNDED:
        return LpResult(UNBOUNDED)
    x = [ZERO] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = T[i][-1]
    value = -T[m][-1]
    if maximize:
        value = -value
    return LpResult(OPTIMAL, value=value, x=x)


def solve(c: Sequence, A_ub: Sequence = (), b_ub: Sequence = (),
          A_eq: Sequence = (), b_eq: Sequence = (),
          maximize: bool = False, nonneg: bool = True) -> LpResult:
    """General-form exact LP.

    Optimize c.x subject to A_ub x <= b_ub and A_eq x = b_eq, with x >= 0
    when ``nonneg`` else x free (internally split into differences).  The
    Farkas certificate of an infeasible system is returned as multipliers
    (y_ub >= 0 first, then y_eq) with y.A >= 0 componentwise (exactly 0 in
    the free-variable case) and y.b < 0.
    """
    n = len(c)
    m_ub = len(A_ub)
    m_eq = len(A_eq)

    def expand(row):
        row = [as_rational(v) for v in row]
        return row if nonneg else row + [-v for v in row]

    nvars = n if nonneg else 2 * n
    rows = []
    rhs = []
    for i in range(m_ub):
        rows.append(expand(A_ub[i]) + [ZERO] * m_ub)
        rows[-1][nvars + i] = ONE  # slack
        rhs.append(as_rational(b_ub[i]))
    for i in range(m_eq):
        rows.append(expand(A_eq[i]) + [ZERO] * m_ub)
        rhs.append(as_rational(b_eq[i]))
    cost = expand(c) + [ZERO] * m_ub

    res = solve_standard(rows, rhs, cost, maximize=maximize)
    if res.status == OPTIMAL:
        xs = res.x
        if nonneg:
            x = xs[:n]
        else:
            x = [xs[j] - xs[n + j] for j in range(n)]
        return LpResult(OPTIMAL, value=res.value, x=x)
    if res.status == INFEASIBLE:
        # solve_standard's y has y.A <= 0, y.b > 0 over the slack-extended
        # system; negate to the conventional y.b < 0 orientation with
        # y_ub >= 0 (slack columns enforce the sign).
        y = [-v for v in res.farkas]
        return LpResult(INFEASIBLE, farkas=y)
    return res
