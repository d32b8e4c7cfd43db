"""Exact rational linear algebra: RREF, affine hulls, canonical forms."""

from __future__ import annotations

from typing import Sequence

from .rationals import Q, ZERO, ONE, as_rational, normalize_integer_vector


def rref(rows: Sequence[Sequence]) -> tuple[list, list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    M = [[as_rational(v) for v in row] for row in rows]
    if not M:
        return [], []
    ncols = len(M[0])
    pivots = []
    r = 0
    for col in range(ncols):
        piv = -1
        for i in range(r, len(M)):
            if M[i][col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = ONE / M[r][col]
        M[r] = [v * inv for v in M[r]]
        prow = M[r]
        for i in range(len(M)):
            if i != r and M[i][col] != 0:
                f = M[i][col]
                M[i] = [v - f * pv for v, pv in zip(M[i], prow)]
        pivots.append(col)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


class AffineHull:
    """Affine hull of a point set, with exact coordinate maps.

    Reduced coordinates of a point v are the pivot-column components of
    v - base with respect to the RREF basis of the direction space.
    """

    def __init__(self, points: Sequence[Sequence]):
        pts = [tuple(as_rational(v) for v in p) for p in points]
        if not pts:
            raise ValueError("need at least one point")
        self.base = pts[0]
        dirs = [[v - b for v, b in zip(p, self.base)] for p in pts[1:]]
        self.basis, self.pivots = rref(dirs)
        self.dim = len(self.basis)
        self.ambient_dim = len(self.base)

    def reduce_point(self, v: Sequence) -> tuple:
        w = [as_rational(x) - b for x, b in zip(v, self.base)]
        # membership in the hull is assumed; pivot components are the coords
        return tuple(w[p] for p in self.pivots)

    def lift_inequality(self, coeffs: Sequence, bound) -> tuple[tuple, object]:
        """Map sum coeffs.t <= bound over reduced coordinates to an
        inequality over ambient coordinates (one representative; only
        defined modulo the hull's equality space)."""
        full = [ZERO] * self.ambient_dim
        for c, p in zip(coeffs, self.pivots):
            full[p] = as_rational(c)
        shift = sum(full[p] * self.base[p] for p in self.pivots)
        return tuple(full), as_rational(bound) + shift


class EqualityReducer:
    """Canonical representative of linear functionals modulo an affine
    equality space.

    Equalities e.x = c are stored homogeneously as (e, -c); an inequality
    f.x <= beta maps to (f, -beta), gets its pivot components eliminated
    against the RREF of the equality space, and is scaled to integers with
    gcd 1 (positive scaling, so the <= sense is preserved).
    """

    def __init__(self, equalities: Sequence[tuple[Sequence, object]]):
        rows = [list(e) + [-as_rational(c)] for e, c in equalities]
        self.rows, self.pivots = rref(rows)

    def reduce(self, coeffs: Sequence, bound) -> tuple[tuple, ...]:
        vec = [as_rational(v) for v in coeffs] + [-as_rational(bound)]
        for row, p in zip(self.rows, self.pivots):
            f = vec[p]
            if f != 0:
                vec = [v - f * rv for v, rv in zip(vec, row)]
        return normalize_integer_vector(vec)

    @staticmethod
    def split(canon: tuple) -> tuple[tuple, int]:
        """Back from canonical vector to (integer coeffs, integer bound)."""
        return canon[:-1], -canon[-1]
