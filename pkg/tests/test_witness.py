from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from odolin import cylinders as cyl
from odolin import measures as M
from odolin.errors import EpsilonTooLarge, HorizonExhausted, KTooSmall, NotFound
from odolin.measures import ex33_digits
from odolin.odometer import BaseSeq
from odolin.witness import (
    dl_overlap_check,
    ex33_level,
    ex33_trim,
    ex33_witness,
    find_mixing_level,
    mixing_witness,
    nonmixing_probe,
    transitive_witness,
)

B2, B4 = BaseSeq.constant(2), BaseSeq.constant(4)
T32 = M.thm32(B2)


def test_mixing_witness_worked_example():
    r = mixing_witness(T32, 3, F(1, 2))
    assert r.params["l"] == 0 and r.params["k0"] == 2 and r.params["j"] == 1
    assert r.set == cyl.Box.fix({1: 0, 2: 0})
    assert r.complement_measure == F(13, 45)
    assert r.disjoint and r.accepted
    assert oracles.shifted_intersection(r.set, r.set, 3, T32, 2) == 0


def test_mixing_witness_k_too_small():
    with pytest.raises(KTooSmall):
        mixing_witness(T32, 2, F(1, 2))


def test_mixing_level_horizon():
    with pytest.raises(HorizonExhausted):
        find_mixing_level(M.uniform(B2), F(1, 2), horizon=10)


@settings(max_examples=40)
@given(st.integers(1, 2**40))
def test_mixing_witness_small_eps(offset):
    eps = F(1, 10)
    l = find_mixing_level(T32, eps)
    k = 2 * T32.base.beta(l + 1) + offset
    r = mixing_witness(T32, k, eps)
    assert r.accepted


def test_ex33_trim_sizes_and_f_shift():
    for l in range(1, 10):
        D = ex33_digits(l)
        for j in range(1, 2**l):
            E, removed = ex33_trim(l, j)
            assert len(E) >= len(D) - 2 and set(E) <= set(D)
            members = set(E)
            assert not any(u + j in members or u + j + 1 in members for u in E)
        F1 = ex33_digits(l + 1)[1:]
        assert not {u + 1 for u in F1} & set(F1)


def test_ex33_level_values():
    assert ex33_level(F(1, 2)) == 5
    assert ex33_level(F(1, 10)) == 29


@pytest.mark.parametrize("k", [2**27, 2**30 + 1, 2**40 + 2**38 - 1, 3**30])
def test_ex33_witness_accepted(k):
    r = ex33_witness(k, F(1, 2))
    assert r.accepted and r.measure > F(1, 2)


def test_ex33_witness_too_small():
    with pytest.raises(KTooSmall):
        ex33_witness(5, F(1, 2))


def test_transitive_witness_thm37():
    fam = M.thm37(B4)
    r = transitive_witness(fam, F(1, 3))
    assert r.set == cyl.make_block(2, 2, [(0,), (1,)])
    assert r.k == 32 and r.measure == F(4, 5) and r.accepted


def test_transitive_witness_not_found():
    with pytest.raises(NotFound):
        transitive_witness(M.uniform(B2), F(1, 3), window_budget=6)


@pytest.mark.parametrize("eps, n", [(F(1, 3), 2), (F(1, 10), 4), (F(1, 100), 7)])
def test_transitive_witness_picks_larger_n_for_small_eps(eps, n):
    r = transitive_witness(M.thm37(B4), eps)
    assert r.params["i"] == r.params["j"] == n
    assert 1 - F(1, 2**n + 1) > 1 - eps


@pytest.mark.parametrize("eps", [F(1, 3), F(1, 10)])
def test_transitive_duality(eps):
    fam = M.thm37(B4)
    r = transitive_witness(fam, eps)
    U = cyl.complement(r.set, fam.base)
    assert cyl.set_measure(U, fam) < eps
    assert cyl.shifted_intersection_measure(U, r.set, r.k, fam) == r.measure > 1 - eps


def test_nonmixing_probe_examples():
    p = nonmixing_probe(M.thm37(B4), 2, F(1, 128))
    assert p.m == 16 and p.all_below
    assert all(v <= F(127, 128) for v in p.maxima.values())
    u = nonmixing_probe(M.uniform(B2), 0, F(1, 33))
    assert u.m == 1 and set(u.maxima.values()) == {F(1, 2)}
    with pytest.raises(EpsilonTooLarge):
        nonmixing_probe(M.uniform(B2), 0, F(1, 4))


def test_dl_overlap_examples():
    assert dl_overlap_check(3, 4) == 1
    assert dl_overlap_check(0, 5) == 0
    D3 = set(ex33_digits(3))
    assert {d + 8 for d in D3} & D3 == set()
    assert {d + 4 for d in D3} & D3 == {7}


@settings(max_examples=30)
@given(st.integers(2**27, 2**70))
def test_ex33_witness_property(k):
    r = ex33_witness(k, F(1, 2))
    assert r.disjoint and r.complement_measure < F(1, 2)
    assert len(r.params["E_l"]) >= r.params["l"] + 1 - 2
