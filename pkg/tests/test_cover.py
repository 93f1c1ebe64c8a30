from __future__ import annotations

import pytest

from dp5cover.bdfile import parse_class_expr
from dp5cover.catalog import curve
from dp5cover.cover import (
    BuildingData,
    EffectiveDivisor,
    canonical_generators,
    invariants,
    relation_rhs,
    verify_branch_geometry,
    verify_pardini,
)
from dp5cover.errors import StructuralError
from dp5cover.group import Character, GroupElement
from dp5cover.lattice import DivisorClass, exceptional


def test_bundled_relations_hold(bundled):
    rep = verify_pardini(bundled)
    assert rep.passed
    assert len(rep.relations) == 15
    assert rep.failures() == []


def test_every_sigma_present(bd1):
    assert len(bd1.D) == 15
    assert not bd1.D[GroupElement.parse("0001")]
    assert len(bd1.nonempty()) == 9


def test_perturbed_L0001_fails_only_there(bd1):
    bad = bd1.with_L("0001", bd1.L[Character.parse("0001")] + exceptional(4))
    rep = verify_pardini(bad)
    assert not rep.passed
    assert [c.label() for c in rep.failures()] == ["0001"]


def test_missing_L_is_structural(bd1):
    L = dict(bd1.L)
    del L[Character.parse("0110")]
    with pytest.raises(StructuralError, match="0110"):
        verify_pardini(BuildingData(dict(bd1.D), L))


def test_repeated_curve_detected(bd1):
    bad = bd1.with_D("0001", EffectiveDivisor((curve("h14"),)))
    assert bad.repeated_curve() == curve("h14")
    assert not verify_pardini(bad).passed
    rep = verify_branch_geometry(bad)
    assert not rep.passed
    assert "h14" in rep.describe()


def test_singular_D_sigma_detected(bd1):
    bad = bd1.with_D("0001", EffectiveDivisor((curve("e4"), curve("h14"))))
    rep = verify_branch_geometry(bad.with_D("0101", EffectiveDivisor()))
    assert not rep.passed
    assert "D_0001" in rep.violations[0]


def test_relation_rhs(bd1):
    rhs = relation_rhs(bd1, Character.parse("0001"))
    assert rhs == 2 * parse_class_expr("2*f1 + f2 - e4")


def test_invariants(bd1, bd2):
    i1, i2 = invariants(bd1), invariants(bd2)
    assert (i1.K2, i1.pg, i1.chi, i1.q) == (20, 3, 4, 0)
    assert (i2.K2, i2.pg, i2.chi, i2.q) == (24, 3, 4, 0)
    assert i1.two_K_X == DivisorClass.of(3, -1, -1, -1, -1)


def test_canonical_generators(bd1):
    gens = canonical_generators(bd1)
    assert sorted(g.chi.label() for g in gens) == ["0100", "1000", "1100"]


def test_bad_keys_rejected():
    with pytest.raises(StructuralError):
        BuildingData({GroupElement.parse("0000"): EffectiveDivisor()}, {})
    with pytest.raises(StructuralError):
        BuildingData({}, {Character.parse("0000"): DivisorClass.zero()})


def test_permuted_data_still_valid(bd2):
    assert verify_pardini(bd2.permute_points((2, 1, 4, 3))).passed
