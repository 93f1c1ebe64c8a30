"""Degree-20 criterion for Z_2^4-covers of Y4 and its consequences.

Writing ``D(b)`` for the sum of ``D_sigma`` over the elements whose first
two bits are ``b``, the criterion asks for

1. smooth ``D_sigma`` and a normal crossings branch divisor;
2. ``D(01) = D(10) = D(11) = -K``;
3. ``h0(K + L_chi) = 0`` unless ``chi`` is ``1000``, ``0100`` or ``1100``;
4. ``D(00) - K`` nef and big.

Under these hypotheses ``|K_X|`` is spanned by three divisors whose common
part is the reduced preimage of ``D(00)`` and whose moving parts share no
point, so the canonical map is a morphism onto the plane of degree ``M^2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from dp5cover.catalog import NamedCurve
from dp5cover.cover import (
    BranchReport,
    BuildingData,
    EffectiveDivisor,
    canonical_generators,
    invariants,
    two_K_class,
    verify_branch_geometry,
)
from dp5cover.errors import NotAPencilError, UnsupportedQuotientError
from dp5cover.group import (
    Character,
    GroupElement,
    Subgroup,
    char_eval,
    characters,
    elements,
    perp,
)
from dp5cover.lattice import ANTICANONICAL, DivisorClass, canonical, h0, is_nef_and_big

GAMMA = Subgroup.parse("0001", "0010")
CANONICAL_CHARACTERS = tuple(Character.parse(s) for s in ("1000", "0100", "1100"))
BLOCK_PREFIXES = ((0, 1), (1, 0), (1, 1))


def block(prefix: tuple[int, int], n: int = 4) -> list[GroupElement]:
    """Non-zero elements whose leading two bits equal ``prefix``."""
    return [s for s in elements(n, nonzero=True) if s.bits[:2] == prefix]


def block_class(bd: BuildingData, prefix: tuple[int, int]) -> DivisorClass:
    return bd.sum_classes(block(prefix, bd.n))


@dataclass
class Verdict:
    passed: bool
    detail: str

    def as_dict(self) -> dict:
        return {"passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class FixedComponent:
    """Reduced preimage ``R`` of a component of ``D(00)``.

    ``R^2 = 4 C^2`` and ``K_X.R = 4 A.C`` with ``A`` the class of
    ``2K_X``.  When ``K_X.R = 0`` every component of ``R`` is a
    (-2)-curve and there are ``-R^2/2`` of them.
    """

    curve: NamedCurve
    sigma: GroupElement
    self_intersection: int
    canonical_degree: int

    @property
    def minus_two_curves(self) -> int | None:
        if self.canonical_degree == 0 and self.self_intersection < 0:
            return -self.self_intersection // 2
        return None

    def describe(self) -> str:
        k = self.minus_two_curves
        tail = f" (splits into {k} (-2)-curves)" if k else ""
        return f"preimage of {self.curve.name}{tail}"

    def as_dict(self) -> dict:
        return {
            "curve": self.curve.name,
            "sigma": self.sigma.label(),
            "R2": self.self_intersection,
            "KR": self.canonical_degree,
            "minus_two_curves": self.minus_two_curves,
        }


@dataclass
class Conclusions:
    K2: int
    pg: int
    degree: int
    fixed_part: list[FixedComponent]
    mobile_square: int

    def as_dict(self) -> dict:
        return {
            "K2": self.K2,
            "pg": self.pg,
            "degree": self.degree,
            "fixed_part": [c.as_dict() for c in self.fixed_part],
            "mobile_square": self.mobile_square,
        }


@dataclass
class Theorem1Report:
    h1_snc: Verdict
    h2_factorization: Verdict
    h3_vanishing: Verdict
    h4_nefbig: Verdict
    conclusions: Conclusions | None = None
    branch: BranchReport | None = field(default=None, repr=False)

    @property
    def verdicts(self) -> dict[str, Verdict]:
        return {
            "h1_snc": self.h1_snc,
            "h2_factorization": self.h2_factorization,
            "h3_vanishing": self.h3_vanishing,
            "h4_nefbig": self.h4_nefbig,
        }

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts.values())

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "hypotheses": {k: v.as_dict() for k, v in self.verdicts.items()},
            "conclusions": self.conclusions.as_dict() if self.conclusions else None,
        }


def check_theorem1(bd: BuildingData) -> Theorem1Report:
    KY = canonical()

    branch = verify_branch_geometry(bd)
    h1 = Verdict(branch.passed, branch.describe())

    bad_blocks = []
    for prefix in BLOCK_PREFIXES:
        cls = block_class(bd, prefix)
        if cls != ANTICANONICAL:
            bad_blocks.append(f"D({prefix[0]}{prefix[1]}**) = {cls.expression()} != -K")
    h2 = Verdict(not bad_blocks, "; ".join(bad_blocks) or "all three blocks are anticanonical")

    nonvanishing = []
    for chi in characters(bd.n, nontrivial=True):
        if chi in CANONICAL_CHARACTERS:
            continue
        d = h0(KY + bd.L[chi])
        if d:
            nonvanishing.append(f"h0(K+L_{chi}) = {d}")
    h3 = Verdict(not nonvanishing, "; ".join(nonvanishing) or "h0(K+L_chi) = 0 for the 12 other characters")

    A = block_class(bd, (0, 0)) - KY
    nb = is_nef_and_big(A)
    h4 = Verdict(nb, f"D(00**) - K = {A.expression()}, square {A.square()}" + ("" if nb else ", not nef and big"))

    report = Theorem1Report(h1, h2, h3, h4, branch=branch)
    if not report.passed:
        return report

    inv = invariants(bd)
    assert inv.two_K_X == A, "2K_X must pull back from D(00) - K"
    fixed = []
    for sigma in block((0, 0), bd.n):
        for c in bd.D[sigma].components:
            C = c.divisor_class
            fixed.append(FixedComponent(c, sigma, 4 * C.square(), 4 * A.dot(C)))
    # M is the reduced preimage of D(01**): f^*D(01**) = 2M, so M^2 = 2^(n-2) D(01**)^2.
    # |M| is base point free (hypothesis 1) and maps onto a plane, so deg = M^2.
    mobile_square = 2 ** (bd.n - 2) * block_class(bd, (0, 1)).square()
    report.conclusions = Conclusions(
        K2=2 ** (bd.n - 2) * A.square(),
        pg=inv.pg,
        degree=mobile_square,
        fixed_part=fixed,
        mobile_square=mobile_square,
    )
    return report


def fixed_sigmas_from_generators(bd: BuildingData) -> set[GroupElement]:
    """Elements whose ``R_sigma`` is common to all canonical generators."""
    gens = canonical_generators(bd)
    if not gens:
        return set()
    common = set(gens[0].sigmas)
    for g in gens[1:]:
        common &= set(g.sigmas)
    return common


@dataclass
class BidoubleData:
    D1: EffectiveDivisor
    D2: EffectiveDivisor
    D3: EffectiveDivisor
    L1: DivisorClass
    L2: DivisorClass
    L3: DivisorClass
    degree_phi_Z: int
    characters: tuple[Character, Character, Character]
    cosets: tuple[tuple[GroupElement, ...], ...]

    @property
    def all_anticanonical(self) -> bool:
        return all(
            x == ANTICANONICAL
            for x in (
                self.D1.divisor_class,
                self.D2.divisor_class,
                self.D3.divisor_class,
                self.L1,
                self.L2,
                self.L3,
            )
        )

    def as_dict(self) -> dict:
        out = {}
        for i, (d, L, chi, coset) in enumerate(
            zip((self.D1, self.D2, self.D3), (self.L1, self.L2, self.L3), self.characters, self.cosets), 1
        ):
            out[f"D{i}"] = {
                "sigmas": [s.label() for s in coset],
                "components": [c.name for c in d.components],
                "class": list(d.divisor_class.coeffs),
            }
            out[f"L{i}"] = {"chi": chi.label(), "class": list(L.coeffs)}
        out["degree_phi_Z"] = self.degree_phi_Z
        out["all_anticanonical"] = self.all_anticanonical
        return out


def quotient_factorization(bd: BuildingData, gamma: Subgroup = GAMMA) -> BidoubleData:
    """Bidouble cover ``Z = X/gamma -> Y4`` through which the canonical map factors."""
    if gamma != GAMMA:
        raise UnsupportedQuotientError(
            f"only the quotient by <0001, 0010> is supported, got {gamma!r}"
        )
    cosets: dict[GroupElement, list[GroupElement]] = {}
    for sigma in sorted(bd.D):
        if sigma in gamma:
            continue
        cosets.setdefault(gamma.coset_key(sigma), []).append(sigma)
    # cosets keyed 0100, 1000, 1100 in that order
    keys = sorted(cosets)
    chars = [c for c in perp(gamma) if not c.is_trivial()]
    Ds, Ls, paired = [], [], []
    for key in keys:
        comps = tuple(c for s in cosets[key] for c in bd.D[s].components)
        Ds.append(EffectiveDivisor(comps))
        # L_i belongs to the character of gamma-perp that is trivial on the i-th coset
        (chi,) = [c for c in chars if char_eval(c, key) == 1]
        paired.append(chi)
        Ls.append(bd.L[chi])
    D1 = Ds[0].divisor_class
    return BidoubleData(
        *Ds,
        *Ls,
        degree_phi_Z=D1.square(),
        characters=tuple(paired),
        cosets=tuple(tuple(cosets[k]) for k in keys),
    )


def pencil_genus(bd: BuildingData, pencil: DivisorClass) -> int:
    """Genus of ``F = f^*(P)`` for a pencil ``P`` with ``P^2 = 0``.

    ``F^2 = 16 P^2 = 0`` and ``K_X.F = 8 A.P`` where ``2K_X = f^*A``.
    """
    if pencil.square() != 0:
        raise NotAPencilError(f"{pencil.expression()} has self-intersection {pencil.square()}, not 0")
    order = 2**bd.n
    A = two_K_class(bd)
    F2 = order * pencil.square()
    KF = (order // 2) * A.dot(pencil)
    return 1 + (F2 + KF) // 2


@dataclass
class DeformationReport:
    first: dict[GroupElement, int]
    second: dict[tuple[GroupElement, Character], int]

    @property
    def moving(self) -> dict[GroupElement, int]:
        return {s: d for s, d in self.first.items() if d >= 2}

    @property
    def base_space(self) -> list[int]:
        """Dimensions of the projective-space factors ``P^(h0-1)``."""
        return [d - 1 for d in self.moving.values()]

    def base_space_str(self) -> str:
        return " x ".join(f"P^{k}" for k in self.base_space) or "point"

    @property
    def second_total(self) -> int:
        return sum(self.second.values())

    @property
    def galois_only(self) -> bool:
        return self.second_total == 0

    def as_dict(self) -> dict:
        return {
            "h0_D": {s.label(): d for s, d in self.first.items()},
            "h0_D_minus_L": {f"{s.label()},{c.label()}": d for (s, c), d in self.second.items() if d},
            "second_total": self.second_total,
            "moving": [s.label() for s in self.moving],
            "base_space": self.base_space_str(),
            "galois_only": self.galois_only,
        }


def deformations(bd: BuildingData) -> DeformationReport:
    first = {s: h0(bd.class_of(s)) for s in sorted(bd.D) if bd.D[s]}
    second = {}
    for sigma in sorted(bd.D):
        for chi in characters(bd.n, nontrivial=True):
            if char_eval(chi, sigma) == 1:
                second[(sigma, chi)] = h0(bd.class_of(sigma) - bd.L[chi])
    return DeformationReport(first, second)
