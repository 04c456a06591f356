from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from odolin import cylinders as cyl
from odolin import measures as M
from odolin.errors import WindowTooSmall
from odolin.odometer import BaseSeq
from odolin.operator_window import OperatorQuery, approx_root, indicator_orbit, norm_ratio_Tfk, star_constant
from strategies import families

B2 = BaseSeq.constant(2)
T32 = M.thm32(B2)


def test_norm_examples():
    assert norm_ratio_Tfk(OperatorQuery(M.uniform(BaseSeq.constant(3)), 3, 2, 17)) == 1
    assert norm_ratio_Tfk(OperatorQuery(T32, 0, 2, 1)) == 2
    assert norm_ratio_Tfk(OperatorQuery(T32, 2, 2, 3)) == oracles.norm_ratio(T32, 2, 3)


def test_query_validation():
    with pytest.raises(WindowTooSmall):
        OperatorQuery(T32, 1, 2, 4)
    with pytest.raises(ValueError):
        OperatorQuery(T32, 1, F(1, 2), 1)


def test_star_constant_examples():
    assert star_constant(M.uniform(B2), 4) == 1
    assert star_constant(T32, 0) == F(1, 2)


def test_indicator_orbit_examples():
    assert indicator_orbit(cyl.FULL, T32, 3) == [1, 1, 1, 1]
    assert indicator_orbit(cyl.Box.fix({0: 0}), M.uniform(B2), 5) == [F(1, 2)] * 6
    assert indicator_orbit(cyl.Box.fix({0: 0}), T32, 1) == [F(2, 3), F(1, 3)]


def test_approx_root():
    assert approx_root(F(2), F(3, 2)) == "1.58740105197"
    assert approx_root(F(8), F(3)) == "2.00000000000"


@given(families(max_radix=3), st.integers(0, 3), st.data())
def test_norm_matches_dense(fam, J, data):
    k = data.draw(st.integers(0, fam.base.beta(J + 1) - 1))
    assert norm_ratio_Tfk(OperatorQuery(fam, J, 2, k)) == oracles.norm_ratio(fam, J, k)


@given(families(max_radix=3), st.integers(0, 3))
def test_star_constant_formula(fam, J):
    assert star_constant(fam, J) == oracles.star_constant_formula(fam, J)


@given(families(max_radix=3))
def test_star_constant_non_increasing(fam):
    cs = [star_constant(fam, J) for J in range(5)]
    assert all(a >= b for a, b in zip(cs, cs[1:]))


@given(families(max_radix=3), st.integers(0, 2), st.data())
def test_submultiplicative(fam, J, data):
    N = fam.base.beta(J + 1)
    a = data.draw(st.integers(0, N - 1))
    b = data.draw(st.integers(0, N - 1 - a))
    R = lambda k: norm_ratio_Tfk(OperatorQuery(fam, J, 1, k))  # noqa: E731
    assert R(a + b) <= R(a) * R(b)


@given(families(max_radix=3), st.integers(0, 2), st.data())
def test_orbit_matches_dense(fam, J, data):
    ds = {i: data.draw(st.integers(0, fam.base.alpha(i) - 1)) for i in range(J + 1) if data.draw(st.booleans())}
    S = cyl.Box.fix(ds)
    N = fam.base.beta(J + 1)
    orbit = indicator_orbit(S, fam, N - 1, window=J)
    alphas = oracles.radices(fam.base, J)
    w = oracles.cell_masses(fam, J)
    for k, v in enumerate(orbit):
        # f^-k(S) = {x : x + k in S}
        expected = sum((w[x] for x in range(N) if oracles.member(S, oracles.digits((x + k) % N, alphas))), F(0))
        assert v == expected
