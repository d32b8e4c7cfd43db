"""Double description method: extreme rays of pointed polyhedral cones.

Used to turn vertex lists into facet lists (convex hull): the valid
inequalities a0 + a.v >= 0 of a full-dimensional point set form a pointed
cone in one extra dimension, whose extreme rays are exactly the facets.
"""

from __future__ import annotations

from typing import Sequence

from .rationals import Q, ZERO, as_rational, dot, normalize_integer_vector


class NotPointedError(ValueError):
    """The constraint matrix does not have full column rank."""


def _initial_square_system(rows: list) -> tuple[list[int], list[list]]:
    """Pick d linearly independent rows and invert them exactly."""
    d = len(rows[0])
    chosen = []
    M = []  # working copies, Gauss-reduced
    for idx, row in enumerate(rows):
        work = list(row)
        for prior in M:
            # prior is scaled to have a leading 1 at its pivot
            piv_col, piv_row = prior
            f = work[piv_col]
            if f != 0:
                work = [v - f * pv for v, pv in zip(work, piv_row)]
        piv = -1
        for j in range(d):
            if work[j] != 0:
                piv = j
                break
        if piv < 0:
            continue
        inv = 1 / work[piv]
        work = [v * inv for v in work]
        M.append((piv, work))
        chosen.append(idx)
        if len(chosen) == d:
            break
    if len(chosen) < d:
        raise NotPointedError("cone is not pointed (rank-deficient constraints)")
    # invert the chosen square matrix column by column
    A = [list(rows[i]) for i in chosen]
    inv_cols = []
    for k in range(d):
        e = [ZERO] * d
        e[k] = Q(1)
        inv_cols.append(_solve_square(A, e))
    # ray j = column j of A^-1 satisfies A ray_j = e_j >= 0
    rays = [tuple(inv_cols[j][i] for i in range(d)) for j in range(d)]
    return chosen, rays


def _solve_square(A: list, b: list) -> list:
    n = len(A)
    M = [list(row) + [bb] for row, bb in zip(A, b)]
    for col in range(n):
        piv = -1
        for i in range(col, n):
            if M[i][col] != 0:
                piv = i
                break
        if piv < 0:
            raise NotPointedError("singular system")
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [v * inv for v in M[col]]
        for i in range(n):
            if i != col and M[i][col] != 0:
                f = M[i][col]
                M[i] = [v - f * pv for v, pv in zip(M[i], M[col])]
    return [M[i][n] for i in range(n)]


def extreme_rays(constraints: Sequence[Sequence]) -> list[tuple]:
    """Extreme rays of the pointed cone {x : C x >= 0}.

    Rays are returned as integer tuples with gcd 1, sorted
    lexicographically; the input must have full column rank.
    """
    rows = [tuple(as_rational(v) for v in row) for row in constraints]
    if not rows:
        raise NotPointedError("empty constraint system")
    d = len(rows[0])
    init_idx, rays = _initial_square_system(rows)

    # tight sets are over processed constraint indices
    processed = list(init_idx)
    ray_data = []
    for r in rays:
        tight = frozenset(i for i in processed if dot(rows[i], r) == 0)
        ray_data.append((normalize_integer_vector(r), tight))

    remaining = [i for i in range(len(rows)) if i not in set(init_idx)]
    for idx in remaining:
        c = rows[idx]
        pos, neg, zero = [], [], []
        for r, tight in ray_data:
            v = dot(c, r)
            if v > 0:
                pos.append((r, tight, v))
            elif v < 0:
                neg.append((r, tight, v))
            else:
                zero.append((r, tight | {idx}))
        processed.append(idx)
        if not neg:
            ray_data = [(r, t) for r, t, _ in pos] + zero
            continue
        new = [(r, t) for r, t, _ in pos] + zero
        all_tights = [t for _, t, _ in pos] + [t for _, t in zero] + [t for _, t, _ in neg]
        for rp, tp, vp in pos:
            for rn, tn, vn in neg:
                common = tp & tn
                if len(common) < d - 2:
                    continue
                # adjacency: no third ray is tight on all common constraints
                adjacent = True
                for t in all_tights:
                    if t is tp or t is tn:
                        continue
                    if common <= t:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                combo = tuple(vp * bn - vn * bp for bp, bn in zip(rp, rn))
                combo = normalize_integer_vector(combo)
                new.append((combo, frozenset(common) | {idx}))
        ray_data = new

    out = sorted(set(r for r, _ in ray_data))
    return out


def facets_of_points(points: Sequence[Sequence]) -> list[tuple[tuple, object]]:
    """Facets of the convex hull of a full-dimensional point set.

    Each facet is returned as (coeffs, bound) meaning coeffs.x <= bound,
    integer coefficients with gcd 1.
    """
    pts = [tuple(as_rational(v) for v in p) for p in points]
    rows = [(Q(1),) + p for p in pts]
    rays = extreme_rays(rows)
    facets = []
    for ray in rays:
        a0, a = ray[0], ray[1:]
        # a0 + a.x >= 0 for all points  <=>  (-a).x <= a0
        facets.append((tuple(-v for v in a), a0))
    return sorted(facets)
