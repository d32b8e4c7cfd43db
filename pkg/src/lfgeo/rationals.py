"""Exact rational arithmetic helpers.

The polytope pipeline is float-free: every probability, coefficient and LP
tableau entry is a rational number.  gmpy2.mpq is used when available (it is
roughly an order of magnitude faster than fractions.Fraction on the dense
simplex tableaus this package manipulates); fractions.Fraction is the
fallback so the package stays importable without the C extension.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

try:
    from gmpy2 import mpq as Q  # type: ignore
except ImportError:  # pragma: no cover
    Q = Fraction

ZERO = Q(0)
ONE = Q(1)


def is_rational(x) -> bool:
    return isinstance(x, (int, Fraction)) or type(x).__name__ == "mpq"


def as_rational(x) -> "Q":
    """Coerce ints, Fractions, mpqs and (num, den) pairs to Q.

    Floats are deliberately rejected: lossy conversions must go through
    :func:`rationalize` so they are explicit at the call site.
    """
    if isinstance(x, float):
        raise TypeError("floats are not accepted here; use rationalize()")
    if isinstance(x, tuple):
        return Q(x[0], x[1])
    return Q(x)


def rationalize(x: float, max_den: int = 10**9) -> "Q":
    """Denominator-bounded rational rounding of a float (lossy, explicit)."""
    f = Fraction(x).limit_denominator(max_den)
    return Q(f.numerator, f.denominator)


def num_den(q) -> tuple[int, int]:
    q = as_rational(q)
    return int(q.numerator), int(q.denominator)


def normalize_integer_vector(vec: Sequence) -> tuple:
    """Scale a rational vector by the positive factor making it integral
    with gcd 1.  The zero vector maps to itself."""
    vec = [as_rational(v) for v in vec]
    denoms = [int(v.denominator) for v in vec]
    scale = 1
    for d in denoms:
        scale = scale * d // gcd(scale, d)
    ints = [int(v * scale) for v in vec]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(ints)


def dot(u: Iterable, v: Iterable):
    total = ZERO
    for a, b in zip(u, v):
        total += a * b
    return total
