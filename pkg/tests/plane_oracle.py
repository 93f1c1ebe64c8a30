"""Independent h0 oracle: linear systems of plane curves.

``h0(a*l - m1*e1 - ... - m4*e4)`` on Y4 is the dimension of the space of
degree-``a`` forms with multiplicity at least ``mi`` at the four points
(1:0:0), (0:1:0), (0:0:1), (1:1:1).  A negative ``mi`` imposes nothing
(``ei`` is then a fixed component), so it is clamped to 0.  The rank of the
condition matrix is computed exactly with sympy.
"""

from __future__ import annotations

from functools import lru_cache
from math import perm as falling

import sympy


def _monomials(a: int) -> list[tuple[int, int, int]]:
    return [(i, j, a - i - j) for i in range(a + 1) for j in range(a + 1 - i)]


@lru_cache(maxsize=None)
def plane_h0(a: int, m: tuple[int, int, int, int]) -> int:
    if a < 0:
        return 0
    m = tuple(max(x, 0) for x in m)
    monos = _monomials(a)
    rows = []
    # Coordinate points: a monomial vanishes to order (degree in the other two variables).
    for k, mk in enumerate(m[:3]):
        for idx, mono in enumerate(monos):
            if a - mono[k] < mk:
                rows.append([1 if t == idx else 0 for t in range(len(monos))])
    # (1:1:1): all derivatives d^u/dx^u d^v/dy^v of f(x, y, 1) with u + v < m4 vanish at (1, 1).
    for u in range(m[3]):
        for v in range(m[3] - u):
            rows.append([falling(i, u) * falling(j, v) for i, j, _ in monos])
    if not rows:
        return len(monos)
    return len(monos) - sympy.Matrix(rows).rank()


def oracle_h0(coeffs: tuple[int, ...]) -> int:
    a, *b = coeffs
    return plane_h0(a, tuple(-x for x in b))
