from __future__ import annotations

import random
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dp5cover.errors import StructuralError
from dp5cover.lattice import (
    ANTICANONICAL,
    NEGATIVE_CURVES,
    DivisorClass,
    K,
    canonical,
    dot,
    exceptional,
    fibre,
    h0,
    is_nef,
    is_nef_and_big,
    line,
    line_through,
    riemann_roch,
)
from plane_oracle import oracle_h0

BOX = [DivisorClass(c) for c in product(range(-3, 4), repeat=5)]
classes = st.tuples(*[st.integers(-6, 6)] * 5).map(DivisorClass)


def test_basis_pairing():
    assert line().square() == 1
    assert all(exceptional(i).square() == -1 for i in range(1, 5))
    assert dot(line(), exceptional(2)) == 0
    assert exceptional(1).dot(exceptional(2)) == 0


def test_named_classes():
    assert K == DivisorClass.of(-3, 1, 1, 1, 1)
    assert K.square() == 5
    assert fibre(3) == DivisorClass.of(1, 0, 0, -1, 0)
    assert line_through(2, 4) == DivisorClass.of(1, 0, -1, 0, -1)
    assert fibre(1).square() == 0


def test_minus_one_curves():
    assert len(NEGATIVE_CURVES) == 10
    for c in NEGATIVE_CURVES:
        assert c.square() == -1
        assert c.dot(K) == -1


def test_arithmetic():
    d = 2 * fibre(1) + fibre(2) - exceptional(4)
    assert d == DivisorClass.of(3, -2, -1, 0, -1)
    assert -d + d == DivisorClass.zero()
    assert not DivisorClass.zero()
    assert DivisorClass.of(4, -2, 0, 2, 0).halve() == DivisorClass.of(2, -1, 0, 1, 0)
    assert DivisorClass.of(3, 1, 0, 0, 0).halve() is None


def test_rank_mismatch_rejected():
    with pytest.raises(StructuralError):
        line() + DivisorClass.of(1, 0, 0)
    with pytest.raises(StructuralError):
        DivisorClass(())


def test_cone_functions_refuse_other_ranks():
    with pytest.raises(StructuralError, match="r = 4"):
        h0(canonical(5))
    with pytest.raises(StructuralError):
        is_nef(DivisorClass.of(1, 0, 0))


def test_expression_renders():
    assert DivisorClass.of(3, -2, 0, 0, -1).expression() == "3*l - 2*e1 - e4"
    assert DivisorClass.zero().expression() == "0"
    assert str(K) == "(-3; 1, 1, 1, 1)"


@pytest.mark.parametrize(
    "d, expected",
    [
        (ANTICANONICAL, 6),
        (fibre(3) + exceptional(1), 2),
        (line_through(1, 4), 1),
        (K, 0),
        (DivisorClass.zero(), 1),
        (line(), 3),
        (fibre(1), 2),
        (2 * line(), 6),
        (exceptional(1) + exceptional(2), 1),
        (-exceptional(1), 0),
    ],
)
def test_h0_examples(d, expected):
    assert h0(d) == expected


def test_nef_and_big():
    assert is_nef_and_big(ANTICANONICAL)
    assert is_nef(fibre(2)) and not is_nef_and_big(fibre(2))
    assert not is_nef(exceptional(1))


def test_h0_agrees_with_plane_curve_oracle_on_box():
    bad = [d for d in BOX if h0(d) != oracle_h0(d.coeffs)]
    assert not bad, bad[:5]


def test_h0_independent_of_stripping_order():
    rng = random.Random(20)
    orders = [list(range(10)), list(reversed(range(10)))]
    orders += [rng.sample(range(10), 10) for _ in range(3)]
    for d in BOX:
        ref = h0(d)
        for o in orders:
            assert h0(d, order=o) == ref, (d, o)


def test_riemann_roch_on_box():
    for d in BOX:
        if is_nef(d) and d:
            assert h0(d) == riemann_roch(d)
        # h1 >= 0 and Serre duality: h0(D) + h0(K - D) >= chi(D)
        assert h0(d) + h0(K - d) >= riemann_roch(d)


@given(classes, classes)
def test_pairing_symmetric_bilinear(a, b):
    assert a.dot(b) == b.dot(a)
    assert (a + b).square() == a.square() + 2 * a.dot(b) + b.square()


@given(classes)
def test_h0_monotone_under_adding_curves(d):
    for c in NEGATIVE_CURVES:
        assert h0(d + c) >= h0(d)


@given(classes, st.permutations([1, 2, 3, 4]))
def test_h0_invariant_under_point_permutation(d, perm):
    assert h0(d.permute_points(perm)) == h0(d)
    assert d.permute_points(perm).square() == d.square()
