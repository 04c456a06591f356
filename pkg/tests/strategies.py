"""Hypothesis strategies shared by the property tests."""

from __future__ import annotations

import itertools
from fractions import Fraction

from hypothesis import strategies as st

from odolin import measures as M
from odolin.cylinders import make_block, make_box
from odolin.odometer import BaseSeq


@st.composite
def bases(draw, max_radix=4, max_len=4):
    prefix = draw(st.lists(st.integers(2, max_radix), min_size=0, max_size=max_len))
    period = draw(st.lists(st.integers(2, max_radix), min_size=1, max_size=2))
    return BaseSeq.explicit(prefix, period=period)


@st.composite
def mass_vector(draw, alpha):
    raw = draw(st.lists(st.integers(1, 9), min_size=alpha, max_size=alpha))
    total = sum(raw)
    return [Fraction(r, total) for r in raw]


@st.composite
def families(draw, max_radix=4, coords=6):
    base = draw(bases(max_radix=max_radix))
    kind = draw(st.sampled_from(["uniform", "custom", "thm32", "custom"]))
    if kind == "uniform":
        return M.uniform(base)
    if kind == "thm32":
        return M.thm32(base)
    masses = [draw(mass_vector(base.alpha(i))) for i in range(coords)]
    return M.custom(base, masses, tail="uniform")


@st.composite
def boxes(draw, base, J):
    constraints = {}
    for i in range(J + 1):
        if draw(st.booleans()):
            digits = draw(st.sets(st.integers(0, base.alpha(i) - 1), min_size=1))
            constraints[i] = digits
    return make_box(constraints)


@st.composite
def blocks(draw, base, J):
    lo = draw(st.integers(0, J))
    hi = draw(st.integers(lo, J))
    cells = list(itertools.product(*(range(base.alpha(i)) for i in range(lo, hi + 1))))
    chosen = draw(st.sets(st.sampled_from(cells), min_size=1))
    return make_block(lo, hi, chosen)


def window_sets(base, J):
    return st.one_of(boxes(base, J), blocks(base, J))
