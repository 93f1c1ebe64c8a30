"""Named curves on Y4 and a combinatorial model of how they meet.

The catalog holds the ten (-1)-curves (``e1``..``e4``, ``h12``..``h34``)
and indexed members ``fi#k`` of the four pencils ``|l - ei|``.

Points of the plane are never given coordinates.  Instead the incidence
model records the *forced* points of the arrangement:

* ``e_i`` meets ``h_ij`` in one point, and the points ``e_i ∩ h_ij`` for
  different ``j`` are distinct (the lines ``P_iP_j`` have distinct
  directions at ``P_i``);
* ``h_ij`` and ``h_kl`` with disjoint indices meet in one point, which lies
  on no third catalog curve because the four points are in general
  position.

Every other pair of curves meets in ``C1.C2`` fresh points, incident to
those two curves only.  This encodes the choice of pencil members in
general position.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

from dp5cover.errors import NonReducedError, StructuralError
from dp5cover.lattice import DivisorClass, exceptional, fibre, line_through

_KIND_ORDER = {"e": 0, "h": 1, "f": 2}
_NAME_RE = re.compile(r"^(?:e([1-4])|h([1-4])([1-4])|f([1-4])#([1-9][0-9]*))$")


@dataclass(frozen=True)
class NamedCurve:
    """An irreducible curve of the catalog.

    ``kind`` is ``"e"``, ``"h"`` or ``"f"``; ``indices`` the point indices
    (one for ``e``/``f``, an increasing pair for ``h``); ``member`` the pencil
    member number for ``f`` and 0 otherwise.
    """

    kind: str
    indices: tuple[int, ...]
    member: int = 0

    def __post_init__(self):
        if self.kind == "h":
            i, j = self.indices
            if i == j:
                raise StructuralError("h_ij needs two distinct points")
            object.__setattr__(self, "indices", (min(i, j), max(i, j)))
        elif self.kind in ("e", "f"):
            if len(self.indices) != 1:
                raise StructuralError(f"{self.kind} curves take one index")
        else:
            raise StructuralError(f"unknown curve kind {self.kind!r}")
        if self.kind == "f" and self.member < 1:
            raise StructuralError("pencil members are numbered from 1")
        if self.kind != "f" and self.member:
            raise StructuralError("only pencil members carry a member index")
        if any(not 1 <= i <= 4 for i in self.indices):
            raise StructuralError(f"point index out of range in {self.indices}")

    @classmethod
    def parse(cls, name: str) -> NamedCurve:
        m = _NAME_RE.match(name.strip())
        if not m:
            raise StructuralError(f"unknown curve name {name!r}")
        e, hi, hj, f, k = m.groups()
        if e:
            return cls("e", (int(e),))
        if hi:
            if hi == hj:
                raise StructuralError(f"unknown curve name {name!r}")
            return cls("h", (int(hi), int(hj)))
        return cls("f", (int(f),), int(k))

    @property
    def name(self) -> str:
        if self.kind == "h":
            return f"h{self.indices[0]}{self.indices[1]}"
        if self.kind == "f":
            return f"f{self.indices[0]}#{self.member}"
        return f"e{self.indices[0]}"

    @property
    def divisor_class(self) -> DivisorClass:
        return _class_of(self.kind, self.indices)

    def sort_key(self) -> tuple:
        return (_KIND_ORDER[self.kind], self.indices, self.member)

    def __lt__(self, other: NamedCurve) -> bool:
        return self.sort_key() < other.sort_key()

    def permute_points(self, perm: Sequence[int]) -> NamedCurve:
        return NamedCurve(self.kind, tuple(perm[i - 1] for i in self.indices), self.member)

    def with_member(self, member: int) -> NamedCurve:
        return NamedCurve(self.kind, self.indices, member)

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"NamedCurve({self.name!r})"


@lru_cache(maxsize=None)
def _class_of(kind: str, indices: tuple[int, ...]) -> DivisorClass:
    if kind == "e":
        return exceptional(indices[0])
    if kind == "h":
        return line_through(*indices)
    return fibre(indices[0])


def curve(name: str) -> NamedCurve:
    return NamedCurve.parse(name)


def fixed_curves() -> list[NamedCurve]:
    """The ten (-1)-curves in canonical order."""
    return [NamedCurve("e", (i,)) for i in range(1, 5)] + [
        NamedCurve("h", (i, j)) for i, j in combinations(range(1, 5), 2)
    ]


def default_catalog(max_pencil_members: int = 1) -> list[NamedCurve]:
    if max_pencil_members < 0:
        raise StructuralError("max_pencil_members must be non-negative")
    members = [
        NamedCurve("f", (i,), k) for i in range(1, 5) for k in range(1, max_pencil_members + 1)
    ]
    return fixed_curves() + sorted(members)


def intersection_count(c1: NamedCurve, c2: NamedCurve) -> int:
    if c1 == c2:
        raise StructuralError(
            "self-intersection of an irreducible curve is not a transversality count"
        )
    return c1.divisor_class.dot(c2.divisor_class)


@dataclass(frozen=True)
class Point:
    label: str
    curves: frozenset[NamedCurve]
    forced: bool


def forced_points() -> list[tuple[str, frozenset[NamedCurve]]]:
    """Forced points of the full (-1)-curve arrangement."""
    pts = []
    for i, j in combinations(range(1, 5), 2):
        h = NamedCurve("h", (i, j))
        pts.append((f"e{i}∩h{i}{j}", frozenset({NamedCurve("e", (i,)), h})))
        pts.append((f"e{j}∩h{i}{j}", frozenset({NamedCurve("e", (j,)), h})))
    for (i, j), (k, m) in (((1, 2), (3, 4)), ((1, 3), (2, 4)), ((1, 4), (2, 3))):
        a, b = NamedCurve("h", (i, j)), NamedCurve("h", (k, m))
        pts.append((f"h{i}{j}∩h{k}{m}", frozenset({a, b})))
    return pts


@dataclass
class IncidenceModel:
    curves: list[NamedCurve]
    points: list[Point] = field(default_factory=list)

    @classmethod
    def build(cls, curves: Iterable[NamedCurve]) -> IncidenceModel:
        curves = list(curves)
        present = set(curves)
        model = cls(curves)
        forced_pairs = set()
        for label, on in forced_points():
            # A forced point exists whether or not its curves are selected;
            # it is only recorded when at least two of them are.
            here = on & present
            for pair in combinations(sorted(on), 2):
                forced_pairs.add(frozenset(pair))
            if len(here) >= 2:
                model.points.append(Point(label, frozenset(here), True))
        for c1, c2 in combinations(curves, 2):
            if frozenset((c1, c2)) in forced_pairs:
                continue
            for k in range(intersection_count(c1, c2)):
                label = f"{c1.name}∩{c2.name}" + (f"#{k + 1}" if k else "")
                model.points.append(Point(label, frozenset((c1, c2)), False))
        return model

    def points_on(self, c1: NamedCurve, c2: NamedCurve) -> list[Point]:
        return [p for p in self.points if c1 in p.curves and c2 in p.curves]


@dataclass(frozen=True)
class GenericityCertificate:
    curves: tuple[NamedCurve, ...]
    points: int
    forced_points: int

    ok = True

    def describe(self) -> str:
        return (
            f"{len(self.curves)} components, {self.points} intersection points "
            f"({self.forced_points} forced), every point on at most 2 components, "
            "all crossings transverse"
        )


@dataclass(frozen=True)
class GenericityViolation:
    point: str
    curves: tuple[NamedCurve, ...]
    reason: str

    ok = False

    def describe(self) -> str:
        names = ", ".join(c.name for c in self.curves)
        return f"{self.reason} at {self.point}: {names}"


def certify_generic_position(
    components: Sequence[NamedCurve],
) -> GenericityCertificate | GenericityViolation:
    """Certify that the given curves form a normal crossings configuration.

    Raises :class:`NonReducedError` if a curve is listed twice.
    """
    seen: set[NamedCurve] = set()
    for c in components:
        if c in seen:
            raise NonReducedError(c)
        seen.add(c)
    model = IncidenceModel.build(components)
    for p in model.points:
        if len(p.curves) > 2:
            return GenericityViolation(
                p.label, tuple(sorted(p.curves)), "more than two branch components meet"
            )
    # Transversality: every pair meets in exactly dot-many distinct points.
    for c1, c2 in combinations(components, 2):
        n = intersection_count(c1, c2)
        if n < 0 or len(model.points_on(c1, c2)) != n:
            return GenericityViolation(
                f"{c1.name}∩{c2.name}", (c1, c2), "non-transverse intersection"
            )
    return GenericityCertificate(
        tuple(components), len(model.points), sum(p.forced for p in model.points)
    )
