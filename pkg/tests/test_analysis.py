from __future__ import annotations

import pytest

from dp5cover.analysis import (
    GAMMA,
    check_theorem1,
    deformations,
    fixed_sigmas_from_generators,
    pencil_genus,
    quotient_factorization,
)
from dp5cover.catalog import curve
from dp5cover.cover import EffectiveDivisor
from dp5cover.errors import NotAPencilError, UnsupportedQuotientError
from dp5cover.group import GroupElement, Subgroup
from dp5cover.lattice import ANTICANONICAL, fibre, line


def test_construction1(bd1):
    rep = check_theorem1(bd1)
    assert rep.passed
    c = rep.conclusions
    assert (c.degree, c.K2, c.pg) == (20, 20, 3)
    assert c.fixed_part == []


def test_construction2_fixed_part(bd2):
    rep = check_theorem1(bd2)
    assert rep.passed
    (fc,) = rep.conclusions.fixed_part
    assert fc.curve == curve("e4")
    assert fc.minus_two_curves == 2
    assert fc.describe() == "preimage of e4 (splits into 2 (-2)-curves)"
    assert rep.conclusions.K2 == 24


def test_fixed_sigmas_match_gamma_block(bd2):
    assert fixed_sigmas_from_generators(bd2) == {GroupElement.parse("0011")}


def test_L0011_anticanonical_breaks_vanishing(bd1):
    rep = check_theorem1(bd1.with_L("0011", ANTICANONICAL))
    assert not rep.h3_vanishing.passed
    assert "L_0011" in rep.h3_vanishing.detail
    assert rep.conclusions is None


def test_block_violation_named(bd1):
    rep = check_theorem1(bd1.with_D("0101", EffectiveDivisor()))
    assert not rep.h2_factorization.passed
    assert "D(01**)" in rep.h2_factorization.detail


def test_nef_big_detail(bd1, bd2):
    # D(00) - K = 2K_X pulled down; its square times 4 is K^2
    assert check_theorem1(bd1).h4_nefbig.detail.endswith("square 5")
    assert check_theorem1(bd2).h4_nefbig.detail == "D(00**) - K = 3*l - e1 - e2 - e3, square 6"


def test_factorization(bundled):
    data = quotient_factorization(bundled)
    assert data.all_anticanonical
    assert data.degree_phi_Z == 5
    assert [c.label() for c in data.characters] == ["1000", "0100", "1100"]


def test_other_quotients_unsupported(bd1):
    with pytest.raises(UnsupportedQuotientError):
        quotient_factorization(bd1, Subgroup.parse("0001"))
    assert GAMMA == Subgroup.parse("0011", "0001")


def test_pencil_genera(bd1, bd2):
    assert [pencil_genus(bd1, fibre(i)) for i in range(1, 5)] == [9, 9, 9, 9]
    assert [pencil_genus(bd2, fibre(i)) for i in range(1, 5)] == [9, 9, 9, 13]
    with pytest.raises(NotAPencilError):
        pencil_genus(bd1, line())


def test_deformations(bd1, bd2):
    d1, d2 = deformations(bd1), deformations(bd2)
    assert sorted(s.label() for s in d1.moving) == ["0110", "1001", "1111"]
    assert sorted(s.label() for s in d2.moving) == ["0110", "0111", "1011"]
    for d in (d1, d2):
        assert d.base_space_str() == "P^1 x P^1 x P^1"
        assert d.galois_only
