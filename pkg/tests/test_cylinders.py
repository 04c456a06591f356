from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from odolin import cylinders as cyl
from odolin import measures as M
from odolin.errors import OutOfRange, WindowTooSmall
from odolin.odometer import BaseSeq
from strategies import families, window_sets

B2 = BaseSeq.constant(2)
U22 = M.uniform(B2)
T32 = M.thm32(B2)
B12 = cyl.Box.fix({1: 0, 2: 0})


def test_set_measure_examples():
    assert cyl.set_measure(cyl.FULL, T32) == 1
    assert cyl.set_measure(B12, T32) == F(32, 45)
    assert cyl.set_measure(cyl.make_block(0, 1, [(0, 0), (1, 1)]), U22) == F(1, 2)
    assert cyl.set_measure(cyl.EMPTY, T32) == 0


def test_digit_out_of_range():
    with pytest.raises(OutOfRange):
        cyl.set_measure(cyl.Box.fix({0: 2}), T32)


def test_shifted_intersection_examples():
    assert cyl.shifted_intersection_measure(cyl.FULL, cyl.FULL, 5, T32) == 1
    assert cyl.shifted_intersection_measure(B12, B12, 3, T32) == 0
    S = cyl.Box.fix({0: 0})
    assert cyl.shifted_intersection_measure(S, S, 2, U22) == F(1, 2)


def test_explicit_window_too_small():
    with pytest.raises(WindowTooSmall):
        cyl.shifted_intersection_measure(cyl.FULL, cyl.FULL, 4, T32, window=1)
    with pytest.raises(WindowTooSmall):
        cyl.shifted_intersection_measure(B12, B12, 1, T32, window=1)


def test_disjoint_examples():
    assert not cyl.disjoint_under(cyl.FULL, 1, T32)
    assert cyl.disjoint_under(B12, 3, T32)
    assert cyl.disjoint_under(cyl.Box.fix({0: 0}), 1, U22)


def test_carry_split_examples():
    assert cyl.carry_split_measure(cyl.FULL, 1, 1, U22) == (F(1, 2), F(1, 2))
    assert cyl.carry_split_measure(cyl.FULL, 1, 2, U22) == (F(3, 4), F(1, 4))
    S = cyl.Box.fix({0: 1})
    assert cyl.carry_split_measure(S, 4, 2, U22) == (F(1, 2), 0)


def test_projection_examples():
    assert cyl.project(B12, 1, 2, B2) == cyl.make_block(1, 2, [(0, 0)])
    full = cyl.project(cyl.FULL, 0, 1, B2)
    assert full.cells == frozenset({(0, 0), (0, 1), (1, 0), (1, 1)})
    blk = cyl.make_block(0, 1, [(0, 0), (1, 1)])
    assert cyl.project(blk, 0, 0, B2).cells == frozenset({(0,), (1,)})


def test_complement():
    U = cyl.complement(B12, B2)
    assert cyl.set_measure(U, T32) == 1 - F(32, 45)
    assert cyl.complement(cyl.FULL, B2) is cyl.EMPTY


@st.composite
def dp_instance(draw):
    fam = draw(families(max_radix=3))
    J = draw(st.integers(0, 3))
    S = draw(window_sets(fam.base, J))
    T = draw(window_sets(fam.base, J))
    k = draw(st.integers(0, fam.base.beta(J + 1) - 1))
    return fam, J, S, T, k


@given(dp_instance())
def test_shifted_intersection_matches_dense(inst):
    fam, J, S, T, k = inst
    got = cyl.shifted_intersection_measure(S, T, k, fam, window=J)
    assert got == oracles.shifted_intersection(S, T, k, fam, J)


@given(dp_instance())
def test_disjointness_matches_dense(inst):
    fam, J, S, _, k = inst
    assert cyl.disjoint_under(S, k, fam, window=J) == (oracles.shifted_intersection(S, S, k, fam, J) == 0)


@given(dp_instance())
def test_set_measure_matches_dense(inst):
    fam, J, S, _, _ = inst
    assert cyl.set_measure(S, fam) == oracles.set_measure(S, fam, J)


@given(dp_instance(), st.data())
def test_carry_partition_identity(inst, data):
    fam, J, S, _, k = inst
    n = data.draw(st.integers(1, J + 1))
    c0, c1 = cyl.carry_split_measure(S, k, n, fam, window=J)
    assert c0 + c1 == cyl.set_measure(S, fam)
    assert (c0, c1) == oracles.carry_split(S, k, n, fam, J)


@given(dp_instance())
def test_bijection_conservation(inst):
    fam, J, S, T, k = inst
    # f^k is a bijection: images of a partition of the domain partition the target
    parts = [cyl.Box.fix({0: d}) for d in range(fam.base.alpha(0))]
    mu_T = sum(cyl.shifted_intersection_measure(P, T, k, fam, window=J) for P in parts)
    assert mu_T == cyl.set_measure(T, fam)
    whole = cyl.shifted_intersection_measure(S, cyl.FULL, k, fam, window=J)
    assert sum(cyl.shifted_intersection_measure(S, P, k, fam, window=J) for P in parts) == whole
    if k == 0:
        assert whole == cyl.set_measure(S, fam)


@given(dp_instance(), st.data())
def test_rho_bound(inst, data):
    fam, J, _, _, k = inst
    ds = [data.draw(st.integers(0, fam.base.alpha(i) - 1)) for i in range(J + 1)]
    D = cyl.Box.fix(dict(enumerate(ds)))
    image = cyl.shifted_intersection_measure(D, cyl.FULL, k, fam, window=J)
    assert image <= fam.rho(J) * cyl.set_measure(D, fam)
