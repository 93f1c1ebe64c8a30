"""Intersection theory on Pic of the plane blown up at r points.

A class ``a*l + b1*e1 + ... + br*er`` is stored as the integer tuple
``(a, b1, ..., br)``.  The pairing is ``l.l = 1``, ``ei.ei = -1`` and all
mixed products vanish.

Cone tests (:func:`is_nef`, :func:`h0`) only know the (-1)-curves of the
degree-5 del Pezzo surface ``Y4`` (r = 4), whose effective cone they
generate.  They refuse other ranks instead of guessing.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from dp5cover.errors import StructuralError

RANK = 4


@dataclass(frozen=True, order=True)
class DivisorClass:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) < 1:
            raise StructuralError("a divisor class needs at least the l coefficient")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @classmethod
    def of(cls, a: int, *b: int) -> DivisorClass:
        return cls((a, *b))

    @classmethod
    def zero(cls, r: int = RANK) -> DivisorClass:
        return cls((0,) * (r + 1))

    @property
    def r(self) -> int:
        return len(self.coeffs) - 1

    @property
    def degree(self) -> int:
        """Coefficient of ``l``."""
        return self.coeffs[0]

    def _check(self, other: DivisorClass) -> None:
        if not isinstance(other, DivisorClass):
            raise TypeError(f"expected DivisorClass, got {type(other).__name__}")
        if len(other.coeffs) != len(self.coeffs):
            raise StructuralError(
                f"lattice rank mismatch: {len(self.coeffs)} vs {len(other.coeffs)}"
            )

    def __add__(self, other: DivisorClass) -> DivisorClass:
        self._check(other)
        return DivisorClass(tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: DivisorClass) -> DivisorClass:
        self._check(other)
        return DivisorClass(tuple(x - y for x, y in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> DivisorClass:
        return DivisorClass(tuple(-x for x in self.coeffs))

    def __mul__(self, k: int) -> DivisorClass:
        if not isinstance(k, int):
            return NotImplemented
        return DivisorClass(tuple(k * x for x in self.coeffs))

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def dot(self, other: DivisorClass) -> int:
        self._check(other)
        a, *b = self.coeffs
        a2, *b2 = other.coeffs
        return a * a2 - sum(x * y for x, y in zip(b, b2))

    def square(self) -> int:
        return self.dot(self)

    def halve(self) -> DivisorClass | None:
        """Return ``D/2`` if every coefficient is even, else ``None``."""
        if any(c % 2 for c in self.coeffs):
            return None
        return DivisorClass(tuple(c // 2 for c in self.coeffs))

    def permute_points(self, perm: Sequence[int]) -> DivisorClass:
        """Relabel point ``i`` as ``perm[i-1]`` (1-based image indices)."""
        a, *b = self.coeffs
        out = [0] * len(b)
        for i, c in enumerate(b):
            out[perm[i] - 1] = c
        return DivisorClass((a, *out))

    def expression(self) -> str:
        """Render as ``3*l - 2*e1 - e4``; parses back to the same class."""
        names = ["l"] + [f"e{i}" for i in range(1, self.r + 1)]
        parts: list[str] = []
        for name, c in zip(names, self.coeffs):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            term = name if mag == 1 else f"{mag}*{name}"
            if not parts:
                parts.append(term if sign == "+" else f"-{term}")
            else:
                parts.append(f"{sign} {term}")
        return " ".join(parts) if parts else "0"

    def __str__(self) -> str:
        a, *b = self.coeffs
        return f"({a}; {', '.join(str(x) for x in b)})"


def dot(d1: DivisorClass, d2: DivisorClass) -> int:
    return d1.dot(d2)


def line(r: int = RANK) -> DivisorClass:
    return DivisorClass((1,) + (0,) * r)


def exceptional(i: int, r: int = RANK) -> DivisorClass:
    if not 1 <= i <= r:
        raise StructuralError(f"no exceptional curve e{i} for r = {r}")
    b = [0] * r
    b[i - 1] = 1
    return DivisorClass((0, *b))


def fibre(i: int, r: int = RANK) -> DivisorClass:
    """Class ``l - ei`` of a line through the i-th point."""
    return line(r) - exceptional(i, r)


def line_through(i: int, j: int, r: int = RANK) -> DivisorClass:
    """Class ``l - ei - ej`` of the strict transform of the line through two points."""
    if i == j:
        raise StructuralError("h_ij needs two distinct points")
    return line(r) - exceptional(i, r) - exceptional(j, r)


def canonical(r: int = RANK) -> DivisorClass:
    return DivisorClass((-3,) + (1,) * r)


K = canonical()
ANTICANONICAL = -K

# Canonical scan order: e1..e4 then h12, h13, h14, h23, h24, h34.
NEGATIVE_CURVES: tuple[DivisorClass, ...] = tuple(exceptional(i) for i in range(1, 5)) + tuple(
    line_through(i, j) for i, j in combinations(range(1, 5), 2)
)
NEGATIVE_CURVE_NAMES: tuple[str, ...] = tuple(f"e{i}" for i in range(1, 5)) + tuple(
    f"h{i}{j}" for i, j in combinations(range(1, 5), 2)
)


def _require_y4(d: DivisorClass) -> None:
    if d.r != RANK:
        raise StructuralError(
            f"cone computations are implemented for r = {RANK} only (got r = {d.r})"
        )


def is_nef(d: DivisorClass) -> bool:
    _require_y4(d)
    return all(d.dot(c) >= 0 for c in NEGATIVE_CURVES)


def is_nef_and_big(d: DivisorClass) -> bool:
    return is_nef(d) and d.square() > 0


def riemann_roch(d: DivisorClass) -> int:
    """``chi(O(D)) = 1 + D.(D - K)/2`` on a rational surface."""
    num = d.dot(d - canonical(d.r))
    assert num % 2 == 0, "D.(D-K) is always even"
    return 1 + num // 2


def h0(d: DivisorClass, order: Sequence[int] | None = None) -> int:
    """Dimension of ``H^0(Y4, O(D))``.

    Strips (-1)-curves that meet ``D`` negatively (they are fixed
    components) until ``D`` is nef, then applies Riemann-Roch; higher
    cohomology of a nonzero nef class vanishes because ``-K`` is ample.
    ``order`` permutes the curve scan and exists for testing; the answer
    does not depend on it.
    """
    _require_y4(d)
    if order is None:
        return _h0_cached(d.coeffs)
    curves = [NEGATIVE_CURVES[i] for i in order]
    return _strip(d, curves)


def _strip(d: DivisorClass, curves: Sequence[DivisorClass]) -> int:
    while True:
        if not d:
            return 1
        if d.dot(ANTICANONICAL) < 0:
            return 0
        for c in curves:
            if d.dot(c) < 0:
                d = d - c
                break
        else:
            return riemann_roch(d)


@lru_cache(maxsize=1 << 16)
def _h0_cached(coeffs: tuple[int, ...]) -> int:
    return _strip(DivisorClass(coeffs), NEGATIVE_CURVES)
