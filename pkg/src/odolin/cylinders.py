"""Exact measure algebra on window-constrained subsets of the odometer.

Two set forms are supported: :class:`Box` (independent digit constraints per
coordinate) and :class:`Block` (an arbitrary subset of the digit product
over a coordinate range). Both leave every coordinate above their window
free.

Images ``f^k(S)`` are never materialized. For sets constrained on
``[0..J]`` and ``k < beta(J+1)``, ``f^k`` adds ``k`` to the window digits
and pushes at most one carry into the free tail, which it maps onto itself
bijectively. So every query reduces to a left-to-right pass over the window
with a one-bit carry state, accumulated in a semiring: boolean for
emptiness, sums for measures, max-products for ratio maxima.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple, Union

from .errors import OutOfRange, WindowTooSmall
from .measures import MeasureFamily
from .odometer import BaseSeq, digits_of

__all__ = [
    "Box",
    "Block",
    "EMPTY",
    "FULL",
    "WindowSet",
    "make_box",
    "make_block",
    "set_measure",
    "shifted_intersection_measure",
    "disjoint_under",
    "carry_split_measure",
    "project",
    "complement",
    "to_block",
    "contains_point",
    "SUM",
    "BOOL",
    "MAXPROD",
    "pair_dp",
]


class _Empty:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    window = -1

    def __repr__(self):
        return "EMPTY"

    def __reduce__(self):
        return (_Empty, ())


EMPTY = _Empty()


@dataclass(frozen=True)
class Box:
    """``{x : x_i in allowed[i] for every constrained i}``; ``None`` means free."""

    allowed: tuple[frozenset[int] | None, ...] = ()

    def __post_init__(self):
        allowed = [None if s is None else frozenset(int(d) for d in s) for s in self.allowed]
        while allowed and allowed[-1] is None:
            allowed.pop()
        if any(s is not None and not s for s in allowed):
            raise ValueError("Box coordinates must be nonempty; use EMPTY for the empty set")
        object.__setattr__(self, "allowed", tuple(allowed))

    @property
    def window(self) -> int:
        return len(self.allowed) - 1

    def at(self, i: int) -> frozenset[int] | None:
        return self.allowed[i] if i < len(self.allowed) else None

    @classmethod
    def fix(cls, assignment: Mapping[int, int]) -> "Box":
        """Box pinning coordinate ``i`` to digit ``assignment[i]``."""
        return make_box({i: {d} for i, d in assignment.items()})

    def describe(self) -> str:
        parts = [f"x_{i} in {sorted(s)}" for i, s in enumerate(self.allowed) if s is not None]
        return "Box{" + ", ".join(parts) + "}" if parts else "FULL"


@dataclass(frozen=True)
class Block:
    """``{x : (x_lo, ..., x_hi) in cells}``."""

    lo: int
    hi: int
    cells: frozenset[tuple[int, ...]]

    def __post_init__(self):
        if not 0 <= self.lo <= self.hi:
            raise ValueError(f"bad block range [{self.lo}..{self.hi}]")
        cells = frozenset(tuple(int(d) for d in c) for c in self.cells)
        if not cells:
            raise ValueError("Block needs at least one cell; use EMPTY for the empty set")
        width = self.hi - self.lo + 1
        if any(len(c) != width for c in cells):
            raise ValueError(f"every cell must have {width} digits")
        object.__setattr__(self, "cells", cells)

    @property
    def window(self) -> int:
        return self.hi

    def describe(self) -> str:
        return f"Block[{self.lo}..{self.hi}]{{{', '.join(''.join(map(str, c)) if max(c, default=0) < 10 else str(c) for c in sorted(self.cells))}}}"


WindowSet = Union[Box, Block, _Empty]
FULL = Box(())


def make_box(constraints: Mapping[int, Iterable[int]]) -> WindowSet:
    """Box from ``{coordinate: allowed digits}``; empty digit sets give EMPTY."""
    if not constraints:
        return FULL
    J = max(constraints)
    allowed = [None] * (J + 1)
    for i, s in constraints.items():
        s = frozenset(s)
        if not s:
            return EMPTY
        allowed[i] = s
    return Box(tuple(allowed))


def make_block(lo: int, hi: int, cells: Iterable[Iterable[int]]) -> WindowSet:
    cells = frozenset(tuple(c) for c in cells)
    return Block(lo, hi, cells) if cells else EMPTY


def _check_digits(S: WindowSet, base: BaseSeq) -> None:
    if isinstance(S, Box):
        for i, s in enumerate(S.allowed):
            if s is not None and not all(0 <= d < base.alpha(i) for d in s):
                raise OutOfRange(f"Box digit outside A_{i}")
    elif isinstance(S, Block):
        alphas = [base.alpha(i) for i in range(S.lo, S.hi + 1)]
        for c in S.cells:
            if not all(0 <= d < a for d, a in zip(c, alphas)):
                raise OutOfRange(f"Block cell {c} outside the digit product")


def contains_point(S: WindowSet, digits) -> bool:
    """Membership of a point given by its window digits (missing digits count as free)."""
    if S is EMPTY:
        return False
    if isinstance(S, Box):
        return all(s is None or (i < len(digits) and digits[i] in s) for i, s in enumerate(S.allowed))
    return tuple(digits[S.lo:S.hi + 1]) in S.cells


def set_measure(S: WindowSet, family: MeasureFamily) -> Fraction:
    """Exact ``mu(S)``."""
    if S is EMPTY:
        return Fraction(0)
    _check_digits(S, family.base)
    if isinstance(S, Box):
        out = Fraction(1)
        for i, s in enumerate(S.allowed):
            if s is not None:
                c = family.coord(i)
                out *= sum((c[d] for d in s), Fraction(0))
        return out
    coords = [family.coord(i) for i in range(S.lo, S.hi + 1)]
    total = Fraction(0)
    for cell in S.cells:
        w = Fraction(1)
        for c, d in zip(coords, cell):
            w *= c[d]
        total += w
    return total


# -- carry DP -----------------------------------------------------------------


class Semiring(NamedTuple):
    zero: object
    one: object
    plus: Callable
    times: Callable


SUM = Semiring(Fraction(0), Fraction(1), lambda a, b: a + b, lambda a, b: a * b)
BOOL = Semiring(False, True, lambda a, b: a or b, lambda a, b: a and b)
# Valid because every weight is positive: zero is absorbing and neutral for max.
MAXPROD = Semiring(Fraction(0), Fraction(1), max, lambda a, b: a * b)


def _segments(sets: Iterable[WindowSet], J: int) -> list[tuple[int, int]]:
    """Split ``[0..J]`` so that every Block range lies inside one segment."""
    ranges = sorted((S.lo, S.hi) for S in sets if isinstance(S, Block))
    merged: list[list[int]] = []
    for lo, hi in ranges:
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    segs, i = [], 0
    for lo, hi in merged:
        segs.extend((s, s) for s in range(i, lo))
        segs.append((lo, hi))
        i = hi + 1
    segs.extend((s, s) for s in range(i, J + 1))
    return segs


def _options(S: WindowSet, lo: int, hi: int, alphas: list[int]) -> Iterator[tuple[int, ...]]:
    """Digit tuples on ``[lo..hi]`` allowed by ``S``."""
    if S is EMPTY:
        return
    if isinstance(S, Box):
        ranges = []
        for i, a in zip(range(lo, hi + 1), alphas):
            s = S.at(i)
            ranges.append(range(a) if s is None else sorted(s))
        yield from itertools.product(*ranges)
        return
    if S.hi < lo or S.lo > hi:
        yield from itertools.product(*(range(a) for a in alphas))
        return
    before = [range(a) for a in alphas[: S.lo - lo]]
    after = [range(a) for a in alphas[S.hi - lo + 1:]]
    for cell in sorted(S.cells):
        for b in itertools.product(*before):
            for t in itertools.product(*after):
                yield b + cell + t


def _allows(S: WindowSet, lo: int, hi: int, e: tuple[int, ...]) -> bool:
    if S is EMPTY:
        return False
    if isinstance(S, Box):
        for i, d in zip(range(lo, hi + 1), e):
            s = S.at(i)
            if s is not None and d not in s:
                return False
        return True
    if S.hi < lo or S.lo > hi:
        return True
    return e[S.lo - lo:S.hi - lo + 1] in S.cells


def _add_segment(x, kd, carry, alphas):
    out, carries = [], []
    for xi, ki, a in zip(x, kd, alphas):
        carries.append(carry)
        s = xi + ki + carry
        if s >= a:
            out.append(s - a)
            carry = 1
        else:
            out.append(s)
            carry = 0
    return tuple(out), carry, carries


def pair_dp(
    S: WindowSet,
    T: WindowSet,
    k: int,
    base: BaseSeq,
    J: int,
    semiring: Semiring,
    weight: Callable[[int, int, int], object],
    track: int | None = None,
) -> dict:
    """Aggregate ``weight`` over ``x in S`` with ``x + k in T`` on the window ``[0..J]``.

    ``weight(i, x_i, e_i)`` scores coordinate ``i`` mapping digit ``x_i`` to
    ``e_i``; path weights multiply and paths combine with the semiring.
    Returns a dict keyed by the carry into position ``track`` (key ``None``
    when nothing is tracked).
    """
    if k < 0:
        raise OutOfRange("shift must be non-negative")
    if k >= base.beta(J + 1):
        raise WindowTooSmall(f"shift {k} needs a window wider than [0..{J}]")
    for X in (S, T):
        if X is not EMPTY and X.window > J:
            raise WindowTooSmall(f"set constrained up to {X.window}, window is [0..{J}]")
    kd = digits_of(k, base, J)
    zero, one, plus, times = semiring
    states = {(0, 0 if track == 0 else None): one}
    for lo, hi in _segments((S, T), J):
        alphas = [base.alpha(i) for i in range(lo, hi + 1)]
        kseg = kd[lo:hi + 1]
        trans: dict[int, dict] = {0: {}, 1: {}}
        for cin in {c for c, _ in states}:
            agg = trans[cin]
            for x in _options(S, lo, hi, alphas):
                e, cout, carries = _add_segment(x, kseg, cin, alphas)
                if not _allows(T, lo, hi, e):
                    continue
                w = one
                for off, (xi, ei) in enumerate(zip(x, e)):
                    w = times(w, weight(lo + off, xi, ei))
                if track is not None and lo < track <= hi:
                    key = (cout, carries[track - lo])
                elif track == hi + 1:
                    key = (cout, cout)
                else:
                    key = (cout, None)
                agg[key] = plus(agg.get(key, zero), w)
        new: dict = {}
        for (cin, tr), acc in states.items():
            for (cout, tnew), w in trans[cin].items():
                key = (cout, tr if tnew is None else tnew)
                new[key] = plus(new.get(key, zero), times(acc, w))
        states = new
    out: dict = {}
    for (_, tr), v in states.items():
        out[tr] = plus(out.get(tr, zero), v)
    return out


def _window(J, k, base, *sets) -> int:
    """Explicit window, or the smallest one holding the sets and the shift."""
    if J is not None:
        return J
    return max([base.window_for(k)] + [S.window for S in sets if S is not EMPTY])


def shifted_intersection_measure(
    S: WindowSet, T: WindowSet, k: int, family: MeasureFamily, window: int | None = None
) -> Fraction:
    """Exact ``mu(f^k(S) & T)``, weighting each point by the mass of its image."""
    if S is EMPTY or T is EMPTY:
        return Fraction(0)
    J = _window(window, k, family.base, S, T)
    base = family.base
    _check_digits(S, base)
    _check_digits(T, base)
    coords = [family.coord(i) for i in range(J + 1)]
    out = pair_dp(S, T, k, base, J, SUM, lambda i, x, e: coords[i][e])
    return sum(out.values(), Fraction(0))


def disjoint_under(S: WindowSet, k: int, family: MeasureFamily, window: int | None = None) -> bool:
    """``S & f^k(S)`` is empty.

    Masses are positive and sets are unions of cells, so emptiness and
    measure zero coincide; the boolean DP answers without rationals.
    """
    if S is EMPTY:
        return True
    J = _window(window, k, family.base, S)
    _check_digits(S, family.base)
    out = pair_dp(S, S, k, family.base, J, BOOL, lambda i, x, e: True)
    return not any(out.values())


def carry_split_measure(
    S: WindowSet, k: int, n: int, family: MeasureFamily, window: int | None = None
) -> tuple[Fraction, Fraction]:
    """``(mu(C(k,S,n,0)), mu(C(k,S,n,1)))``: mass of ``S`` split by the carry into ``n``."""
    base = family.base
    J = _window(window, k, base, S)
    if window is None:
        J = max(J, n - 1)
    if S is EMPTY:
        return Fraction(0), Fraction(0)
    _check_digits(S, base)
    coords = [family.coord(i) for i in range(J + 1)]
    out = pair_dp(S, FULL, k, base, J, SUM, lambda i, x, e: coords[i][x], track=n)
    return out.get(0, Fraction(0)), out.get(1, Fraction(0))


# -- projections and conversions ---------------------------------------------


def to_block(S: WindowSet, base: BaseSeq, lo: int, hi: int) -> WindowSet:
    """Re-express ``S`` as a Block over ``[lo..hi]``; ``S`` must be constrained inside it."""
    if S is EMPTY:
        return EMPTY
    if isinstance(S, Box):
        if S.allowed and any(s is not None for s in S.allowed[:lo]) or S.window > hi:
            raise ValueError(f"{S.describe()} is constrained outside [{lo}..{hi}]")
        ranges = [sorted(S.at(i)) if S.at(i) is not None else range(base.alpha(i)) for i in range(lo, hi + 1)]
        return make_block(lo, hi, itertools.product(*ranges))
    if S.lo < lo or S.hi > hi:
        raise ValueError(f"block [{S.lo}..{S.hi}] does not fit in [{lo}..{hi}]")
    alphas = [base.alpha(i) for i in range(lo, hi + 1)]
    return make_block(lo, hi, _options(S, lo, hi, alphas))


def project(S: WindowSet, i: int, j: int, base: BaseSeq) -> WindowSet:
    """Image of ``S`` under the coordinate projection onto ``[i..j]``, as a Block."""
    if S is EMPTY:
        return EMPTY
    if i > j:
        raise ValueError("empty coordinate range")
    alphas = [base.alpha(s) for s in range(i, j + 1)]
    if isinstance(S, Box):
        return make_block(i, j, _options(S, i, j, alphas))
    # Block: project cells onto the overlap, free elsewhere
    lo, hi = max(i, S.lo), min(j, S.hi)
    if lo > hi:
        return make_block(i, j, itertools.product(*(range(a) for a in alphas)))
    parts = {c[lo - S.lo:hi - S.lo + 1] for c in S.cells}
    before = [range(a) for a in alphas[: lo - i]]
    after = [range(a) for a in alphas[hi - i + 1:]]
    cells = (b + p + t for p in parts for b in itertools.product(*before) for t in itertools.product(*after))
    return make_block(i, j, cells)


def complement(S: WindowSet, base: BaseSeq, lo: int | None = None, hi: int | None = None) -> WindowSet:
    """Complement of ``S`` as a Block over ``[lo..hi]`` (default: the constrained range)."""
    if S is EMPTY:
        raise ValueError("complement of the empty set is the full space; pass FULL explicitly")
    if isinstance(S, Block):
        lo = S.lo if lo is None else lo
        hi = S.hi if hi is None else hi
    else:
        constrained = [i for i, s in enumerate(S.allowed) if s is not None]
        if not constrained:
            return EMPTY
        lo = constrained[0] if lo is None else lo
        hi = constrained[-1] if hi is None else hi
    inside = to_block(S, base, lo, hi).cells
    every = itertools.product(*(range(base.alpha(i)) for i in range(lo, hi + 1)))
    return make_block(lo, hi, (c for c in every if c not in inside))
