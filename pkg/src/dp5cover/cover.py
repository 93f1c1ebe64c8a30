"""Building data of Z_2^n-covers of Y4 and the invariants of the cover.

A Z_2^n-cover ``f: X -> Y`` is given by effective divisors ``D_sigma``
(``sigma != 0``) and classes ``L_chi`` (``chi`` non-trivial) subject to

    2 L_chi = sum of D_sigma over sigma with chi(sigma) = -1.

Pic(Y4) is torsion free, so the relations are checked as equalities of
coefficient vectors.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

from dp5cover.catalog import (
    GenericityCertificate,
    GenericityViolation,
    NamedCurve,
    certify_generic_position,
    intersection_count,
)
from dp5cover.errors import NonReducedError, StructuralError
from dp5cover.group import N, Character, GroupElement, char_eval, characters, elements
from dp5cover.lattice import RANK, DivisorClass, canonical, h0


@dataclass(frozen=True)
class EffectiveDivisor:
    components: tuple[NamedCurve, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(sorted(self.components)))

    @classmethod
    def parse(cls, names: Iterable[str]) -> EffectiveDivisor:
        return cls(tuple(NamedCurve.parse(n) for n in names))

    @property
    def divisor_class(self) -> DivisorClass:
        total = DivisorClass.zero(RANK)
        for c in self.components:
            total = total + c.divisor_class
        return total

    def is_empty(self) -> bool:
        return not self.components

    def __bool__(self) -> bool:
        return bool(self.components)

    def __str__(self) -> str:
        return " + ".join(c.name for c in self.components) if self.components else "0"


@dataclass
class BuildingData:
    """``D`` holds every non-identity element (empty divisors included)."""

    D: dict[GroupElement, EffectiveDivisor]
    L: dict[Character, DivisorClass]
    n: int = N
    name: str = ""

    def __post_init__(self):
        for sigma in self.D:
            if sigma.n != self.n or sigma.is_zero():
                raise StructuralError(f"D is indexed by non-identity elements of Z_2^{self.n}; got {sigma}")
        for chi in self.L:
            if chi.n != self.n or chi.is_trivial():
                raise StructuralError(f"L is indexed by non-trivial characters of Z_2^{self.n}; got {chi}")
        full = {s: self.D.get(s, EffectiveDivisor()) for s in elements(self.n, nonzero=True)}
        self.D = full
        self.L = dict(sorted(self.L.items()))

    @classmethod
    def from_labels(
        cls,
        D: Mapping[str, Sequence[str]],
        L: Mapping[str, DivisorClass],
        n: int = N,
        name: str = "",
    ) -> BuildingData:
        return cls(
            {GroupElement.parse(s): EffectiveDivisor.parse(v) for s, v in D.items()},
            {Character.parse(c): v for c, v in L.items()},
            n,
            name,
        )

    def class_of(self, sigma: GroupElement) -> DivisorClass:
        return self.D[sigma].divisor_class

    def sum_classes(self, sigmas: Iterable[GroupElement]) -> DivisorClass:
        total = DivisorClass.zero(RANK)
        for s in sigmas:
            total = total + self.class_of(s)
        return total

    def branch_components(self) -> list[NamedCurve]:
        return [c for s in sorted(self.D) for c in self.D[s].components]

    def branch_class(self) -> DivisorClass:
        return self.sum_classes(self.D)

    def nonempty(self) -> list[GroupElement]:
        return [s for s in sorted(self.D) if self.D[s]]

    def repeated_curve(self) -> NamedCurve | None:
        seen: set[NamedCurve] = set()
        for c in self.branch_components():
            if c in seen:
                return c
            seen.add(c)
        return None

    def with_L(self, chi: Character | str, value: DivisorClass) -> BuildingData:
        if isinstance(chi, str):
            chi = Character.parse(chi)
        L = dict(self.L)
        L[chi] = value
        return BuildingData(dict(self.D), L, self.n, self.name)

    def with_D(self, sigma: GroupElement | str, value: EffectiveDivisor) -> BuildingData:
        if isinstance(sigma, str):
            sigma = GroupElement.parse(sigma)
        D = dict(self.D)
        D[sigma] = value
        return BuildingData(D, dict(self.L), self.n, self.name)

    def permute_points(self, perm: Sequence[int]) -> BuildingData:
        """Image under the permutation ``i -> perm[i-1]`` of the four points."""
        D = {
            s: EffectiveDivisor(tuple(c.permute_points(perm) for c in d.components))
            for s, d in self.D.items()
        }
        L = {c: v.permute_points(perm) for c, v in self.L.items()}
        return BuildingData(D, L, self.n, self.name)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BuildingData):
            return NotImplemented
        return self.n == other.n and self.D == other.D and self.L == other.L


def relation_rhs(bd: BuildingData, chi: Character) -> DivisorClass:
    """Sum of ``D_sigma`` over ``sigma`` with ``chi(sigma) = -1``."""
    return bd.sum_classes(s for s in bd.D if char_eval(chi, s) == -1)


@dataclass(frozen=True)
class Relation:
    chi: Character
    lhs: DivisorClass
    rhs: DivisorClass
    sigmas: tuple[GroupElement, ...]

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs


@dataclass
class PardiniReport:
    relations: list[Relation]
    repeated_curve: NamedCurve | None
    trivial_L: list[Character]

    @property
    def reduced(self) -> bool:
        return self.repeated_curve is None

    @property
    def passed(self) -> bool:
        return self.reduced and not self.trivial_L and all(r.passed for r in self.relations)

    def failures(self) -> list[Character]:
        return [r.chi for r in self.relations if not r.passed]


def verify_pardini(bd: BuildingData) -> PardiniReport:
    missing = [c for c in characters(bd.n, nontrivial=True) if c not in bd.L]
    if missing:
        raise StructuralError(
            "missing L entries for characters " + ", ".join(c.label() for c in missing)
        )
    relations = []
    for chi in characters(bd.n, nontrivial=True):
        sigmas = tuple(s for s in sorted(bd.D) if char_eval(chi, s) == -1)
        relations.append(Relation(chi, 2 * bd.L[chi], bd.sum_classes(sigmas), sigmas))
    trivial = [c for c, v in bd.L.items() if not v]
    return PardiniReport(relations, bd.repeated_curve(), trivial)


@dataclass
class BranchReport:
    violations: list[str] = field(default_factory=list)
    certificate: GenericityCertificate | None = None

    @property
    def passed(self) -> bool:
        return not self.violations

    def describe(self) -> str:
        if self.passed:
            return self.certificate.describe() if self.certificate else "ok"
        return self.violations[0]


def verify_branch_geometry(bd: BuildingData) -> BranchReport:
    """Smooth ``D_sigma``, reduced ``B`` and normal crossings of ``B``."""
    report = BranchReport()
    for sigma in sorted(bd.D):
        comps = bd.D[sigma].components
        for a in range(len(comps)):
            for b in range(a + 1, len(comps)):
                c1, c2 = comps[a], comps[b]
                if c1 == c2:
                    continue
                n = intersection_count(c1, c2)
                if n != 0:
                    report.violations.append(
                        f"D_{sigma} is not smooth: {c1.name} and {c2.name} meet in {n} point(s)"
                    )
    repeated = bd.repeated_curve()
    if repeated is not None:
        report.violations.append(f"branch divisor not reduced: {repeated.name} is repeated")
        return report
    try:
        result = certify_generic_position(bd.branch_components())
    except NonReducedError as exc:  # pragma: no cover - caught above
        report.violations.append(str(exc))
        return report
    if isinstance(result, GenericityViolation):
        report.violations.append(result.describe())
    else:
        report.certificate = result
    return report


@dataclass(frozen=True)
class CoverInvariants:
    two_K_X: DivisorClass
    K2: int
    pg: int
    chi: int
    q: int

    def as_dict(self) -> dict:
        return {
            "two_K_X": list(self.two_K_X.coeffs),
            "K2": self.K2,
            "pg": self.pg,
            "chi": self.chi,
            "q": self.q,
        }


def two_K_class(bd: BuildingData) -> DivisorClass:
    """Class on Y whose pull-back is ``2 K_X``."""
    return 2 * canonical() + bd.branch_class()


def invariants(bd: BuildingData) -> CoverInvariants:
    """K^2, p_g, chi(O_X) and q of the cover (Y = Y4, so p_g(Y)=q(Y)=0)."""
    order = 2**bd.n
    A = two_K_class(bd)
    K2 = 2 ** (bd.n - 2) * A.square()
    KY = canonical()
    pg = sum(h0(KY + L) for L in bd.L.values())
    chi = order
    for c, L in bd.L.items():
        num = L.dot(L + KY)
        if num % 2:
            raise ArithmeticError(f"L_{c}.(L_{c}+K) = {num} is odd")
        chi += num // 2
    return CoverInvariants(A, K2, pg, chi, pg - chi + 1)


@dataclass(frozen=True)
class CanonicalGenerator:
    chi: Character
    base_class: DivisorClass
    sigmas: tuple[GroupElement, ...]


def canonical_generators(bd: BuildingData) -> list[CanonicalGenerator]:
    """Generators ``f^*|K_Y + L_chi| + sum R_sigma`` of ``|K_X|``, chi in J."""
    out = []
    KY = canonical()
    for chi in characters(bd.n, nontrivial=True):
        base = KY + bd.L[chi]
        if h0(base) > 0:
            sigmas = tuple(
                s for s in sorted(bd.D) if char_eval(chi, s) == 1 and bd.D[s]
            )
            out.append(CanonicalGenerator(chi, base, sigmas))
    return out
