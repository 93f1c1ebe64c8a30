from __future__ import annotations

import pytest

from dp5cover.errors import StructuralError
from dp5cover.group import (
    Character,
    GroupElement,
    Subgroup,
    all_subgroups,
    annihilator,
    char_eval,
    characters,
    elements,
    perp,
)


def test_counts():
    assert len(elements(4)) == 16
    assert len(elements(4, nonzero=True)) == 15
    assert len(characters(4, nontrivial=True)) == 15


@pytest.mark.parametrize(
    "chi, sigma, value",
    [("0001", "0001", -1), ("0011", "0011", 1), ("1111", "0111", -1), ("1000", "0111", 1)],
)
def test_char_eval(chi, sigma, value):
    assert char_eval(Character.parse(chi), GroupElement.parse(sigma)) == value
    assert Character.parse(chi)(GroupElement.parse(sigma)) == value


def test_char_eval_type_and_rank_errors():
    with pytest.raises(TypeError):
        char_eval(GroupElement.parse("0001"), Character.parse("0001"))
    with pytest.raises(StructuralError):
        char_eval(Character.parse("001"), GroupElement.parse("0001"))


def test_parse_rejects_garbage():
    for bad in ["", "0120", "ab"]:
        with pytest.raises(StructuralError):
            GroupElement.parse(bad)


def test_characters_are_homomorphisms():
    for chi in characters(4):
        for a in elements(4):
            for b in elements(4):
                assert chi(a + b) == chi(a) * chi(b)


def test_orthogonality():
    for chi in characters(4, nontrivial=True):
        assert sum(chi(s) for s in elements(4)) == 0


def test_group_laws():
    a, b = GroupElement.parse("0110"), GroupElement.parse("1100")
    assert a + b == GroupElement.parse("1010")
    assert (a + a).is_zero()
    assert Character.parse("0110") * Character.parse("0110") == Character.parse("0000")


def test_perp_of_gamma():
    gamma = Subgroup.parse("0001", "0010")
    assert len(gamma) == 4
    assert sorted(c.label() for c in perp(gamma)) == ["0000", "0100", "1000", "1100"]


def test_perp_duality_exhaustive():
    subs = all_subgroups(4)
    assert len(subs) == 67  # subspaces of F_2^4: 1 + 15 + 35 + 15 + 1
    for g in subs:
        p = perp(g)
        assert len(g) * len(p) == 16
        assert annihilator(p) == g


def test_coset_key():
    gamma = Subgroup.parse("0001", "0010")
    assert gamma.coset_key(GroupElement.parse("0111")) == GroupElement.parse("0100")
    assert GroupElement.parse("0011") in gamma
