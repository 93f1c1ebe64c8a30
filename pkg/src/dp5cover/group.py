"""Elements, characters and subgroups of the elementary abelian group Z_2^n.

Elements and characters are both bit vectors; they are kept as separate
types so that the pairing ``chi(sigma)`` cannot be applied the wrong way
round by accident.  Both render as bit strings such as ``"0110"``.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from dp5cover.errors import StructuralError

N = 4


def _parse_bits(text: str) -> tuple[int, ...]:
    if not text or any(ch not in "01" for ch in text):
        raise StructuralError(f"expected a bit string like '0110', got {text!r}")
    return tuple(int(ch) for ch in text)


@dataclass(frozen=True, order=True)
class _Bits:
    bits: tuple[int, ...]

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise StructuralError(f"bits must be 0 or 1: {self.bits}")

    @property
    def n(self) -> int:
        return len(self.bits)

    def is_zero(self) -> bool:
        return not any(self.bits)

    def label(self) -> str:
        return "".join(map(str, self.bits))

    def __str__(self) -> str:
        return self.label()


@dataclass(frozen=True, order=True)
class GroupElement(_Bits):
    @classmethod
    def parse(cls, text: str) -> GroupElement:
        return cls(_parse_bits(text))

    def __add__(self, other: GroupElement) -> GroupElement:
        if not isinstance(other, GroupElement):
            return NotImplemented
        if other.n != self.n:
            raise StructuralError("group elements of different rank")
        return GroupElement(tuple(a ^ b for a, b in zip(self.bits, other.bits)))

    def __repr__(self) -> str:
        return f"GroupElement({self.label()!r})"


@dataclass(frozen=True, order=True)
class Character(_Bits):
    @classmethod
    def parse(cls, text: str) -> Character:
        return cls(_parse_bits(text))

    def __mul__(self, other: Character) -> Character:
        if not isinstance(other, Character):
            return NotImplemented
        if other.n != self.n:
            raise StructuralError("characters of different rank")
        return Character(tuple(a ^ b for a, b in zip(self.bits, other.bits)))

    def is_trivial(self) -> bool:
        return self.is_zero()

    def __call__(self, sigma: GroupElement) -> int:
        return char_eval(self, sigma)

    def __repr__(self) -> str:
        return f"Character({self.label()!r})"


def char_eval(chi: Character, sigma: GroupElement) -> int:
    """Return ``(-1)^(sum of j_i a_i)``."""
    if not isinstance(chi, Character) or not isinstance(sigma, GroupElement):
        raise TypeError("char_eval takes (Character, GroupElement)")
    if chi.n != sigma.n:
        raise StructuralError(f"rank mismatch: character {chi} vs element {sigma}")
    parity = sum(j & a for j, a in zip(chi.bits, sigma.bits)) & 1
    return -1 if parity else 1


@lru_cache(maxsize=None)
def elements(n: int = N, *, nonzero: bool = False) -> tuple[GroupElement, ...]:
    out = [GroupElement(bits) for bits in product((0, 1), repeat=n)]
    return tuple(g for g in out if not g.is_zero()) if nonzero else tuple(out)


@lru_cache(maxsize=None)
def characters(n: int = N, *, nontrivial: bool = False) -> tuple[Character, ...]:
    out = [Character(bits) for bits in product((0, 1), repeat=n)]
    return tuple(c for c in out if not c.is_trivial()) if nontrivial else tuple(out)


class Subgroup:
    """Subgroup of Z_2^n generated by a list of elements."""

    def __init__(self, generators: Iterable[GroupElement], n: int = N):
        self.generators = tuple(generators)
        for g in self.generators:
            if g.n != n:
                raise StructuralError(f"generator {g} does not lie in Z_2^{n}")
        self.n = n
        span = {GroupElement((0,) * n)}
        for g in self.generators:
            span |= {s + g for s in span}
        self.elements = frozenset(span)

    @classmethod
    def parse(cls, *labels: str) -> Subgroup:
        gens = [GroupElement.parse(s) for s in labels]
        n = gens[0].n if gens else N
        return cls(gens, n)

    def __contains__(self, sigma: GroupElement) -> bool:
        return sigma in self.elements

    def __iter__(self) -> Iterator[GroupElement]:
        return iter(sorted(self.elements))

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other) -> bool:
        return isinstance(other, Subgroup) and self.elements == other.elements

    def __hash__(self) -> int:
        return hash(self.elements)

    def coset_key(self, sigma: GroupElement) -> GroupElement:
        """Smallest element of ``sigma + self``; labels the coset."""
        return min(sigma + g for g in self.elements)

    def __repr__(self) -> str:
        return f"Subgroup<{', '.join(g.label() for g in self.generators)}>"


def perp(gamma: Subgroup) -> list[Character]:
    """Characters that are trivial on every element of ``gamma``."""
    return [
        chi
        for chi in characters(gamma.n)
        if all(char_eval(chi, s) == 1 for s in gamma.elements)
    ]


def annihilator(chars: Iterable[Character], n: int = N) -> Subgroup:
    """Elements on which every character in ``chars`` evaluates to +1."""
    chars = list(chars)
    elems = [s for s in elements(n) if all(char_eval(c, s) == 1 for c in chars)]
    return Subgroup(elems, n)


def all_subgroups(n: int = N) -> list[Subgroup]:
    seen: dict[frozenset, Subgroup] = {}
    frontier = [Subgroup([], n)]
    while frontier:
        nxt = []
        for sub in frontier:
            if sub.elements in seen:
                continue
            seen[sub.elements] = sub
            for g in elements(n, nonzero=True):
                if g not in sub:
                    nxt.append(Subgroup(sub.generators + (g,), n))
        frontier = nxt
    return list(seen.values())
