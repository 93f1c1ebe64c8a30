from __future__ import annotations

from itertools import combinations

import pytest

from dp5cover.catalog import (
    IncidenceModel,
    NamedCurve,
    certify_generic_position,
    curve,
    default_catalog,
    fixed_curves,
    forced_points,
    intersection_count,
)
from dp5cover.errors import NonReducedError, StructuralError
from dp5cover.lattice import DivisorClass, fibre


def test_parse_and_names():
    for name in ["e1", "h23", "f4#2"]:
        assert curve(name).name == name
    assert curve("f3#1").divisor_class == fibre(3)
    assert curve("h14").divisor_class == DivisorClass.of(1, -1, 0, 0, -1)


@pytest.mark.parametrize("bad", ["e5", "h11", "f1", "f1#0", "g2", "h123"])
def test_parse_rejects(bad):
    with pytest.raises(StructuralError):
        curve(bad)


def test_h_indices_normalised():
    assert NamedCurve("h", (3, 1)).name == "h13"


def test_catalog_shape():
    assert [c.name for c in fixed_curves()] == [
        "e1", "e2", "e3", "e4", "h12", "h13", "h14", "h23", "h24", "h34"
    ]
    cat = default_catalog(2)
    assert len(cat) == 18
    assert cat == sorted(cat)


def test_intersection_counts():
    assert intersection_count(curve("e1"), curve("h12")) == 1
    assert intersection_count(curve("e1"), curve("h23")) == 0
    assert intersection_count(curve("h12"), curve("h34")) == 1
    assert intersection_count(curve("f1#1"), curve("f1#2")) == 0
    assert intersection_count(curve("f1#1"), curve("f2#1")) == 1
    with pytest.raises(StructuralError, match="self-intersection"):
        intersection_count(curve("e1"), curve("e1"))


def test_forced_points():
    pts = forced_points()
    assert len(pts) == 15
    assert all(len(on) == 2 for _, on in pts)


def test_incidence_model_counts_match_intersection_numbers():
    cat = default_catalog(1)
    model = IncidenceModel.build(cat)
    for c1, c2 in combinations(cat, 2):
        n = intersection_count(c1, c2)
        assert len(model.points_on(c1, c2)) == max(n, 0)


def test_certificate_on_full_catalog():
    cert = certify_generic_position(default_catalog(2))
    assert cert.ok
    assert "at most 2" in cert.describe()


def test_duplicate_curve_raises():
    with pytest.raises(NonReducedError, match="e1"):
        certify_generic_position([curve("e1"), curve("h12"), curve("e1")])


def test_permute_points():
    assert curve("h12").permute_points((2, 3, 1, 4)).name == "h23"
    assert curve("f4#2").permute_points((4, 3, 2, 1)).name == "f1#2"
