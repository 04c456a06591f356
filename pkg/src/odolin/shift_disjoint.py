"""Largest sets disjoint from a shift of themselves.

For a coordinate block ``[i..j]`` with ``N = alpha_i * ... * alpha_j`` cells,
addition of ``k`` modulo ``N`` (carry out of the block ignored) permutes the
cells into ``gcd(N, k)`` cycles. A set is disjoint from its shift exactly
when it contains no two consecutive cycle elements, so the best set for a
fixed shift is a maximum-weight independent set on disjoint cycles.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InvalidShift, SizeLimit
from .measures import MeasureFamily

DEFAULT_SIZE_CAP = 2**14
BRUTE_FORCE_CAP = 16


def size_cap() -> int:
    """DP size cap, overridable through ``ODOLIN_SIZE_CAP``."""
    raw = os.environ.get("ODOLIN_SIZE_CAP")
    return int(raw) if raw else DEFAULT_SIZE_CAP


@dataclass(frozen=True)
class ShiftProblem:
    """Cell weights on ``Z_N`` and a shift ``k`` with ``1 <= k < N``."""

    N: int
    weights: tuple[Fraction, ...]
    k: int
    check_total: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(Fraction(w) for w in self.weights))
        if len(self.weights) != self.N:
            raise ValueError(f"expected {self.N} weights, got {len(self.weights)}")
        if not 1 <= self.k < self.N:
            raise InvalidShift(f"shift must satisfy 1 <= k < {self.N}, got {self.k}")
        if self.check_total and sum(self.weights) != 1:
            raise ValueError("weights must sum to 1")


@dataclass(frozen=True)
class PsiResult:
    value: Fraction
    k: int
    witness: tuple[int, ...]
    N: int
    lo: int
    hi: int

    def witness_digits(self, family: MeasureFamily) -> list[tuple[int, ...]]:
        """Witness cells as digit tuples ``(d_lo, ..., d_hi)``."""
        alphas = [family.base.alpha(s) for s in range(self.lo, self.hi + 1)]
        return [_to_digits(a, alphas) for a in self.witness]

    def shift_digits(self, family: MeasureFamily) -> tuple[int, ...]:
        alphas = [family.base.alpha(s) for s in range(self.lo, self.hi + 1)]
        return _to_digits(self.k, alphas)


def _to_digits(a: int, alphas: Sequence[int]) -> tuple[int, ...]:
    out = []
    for r in alphas:
        a, d = divmod(a, r)
        out.append(d)
    return tuple(out)


def block_size(family: MeasureFamily, i: int, j: int) -> int:
    return math.prod(family.base.alpha(s) for s in range(i, j + 1))


def block_weights(family: MeasureFamily, i: int, j: int) -> tuple[Fraction, ...]:
    """Product-cell masses over ``[i..j]``; coordinate ``i`` is least significant."""
    if i > j:
        raise ValueError("empty coordinate range")
    weights = [Fraction(1)]
    for s in range(i, j + 1):
        mu = family.masses(s)
        weights = [w * m for m in mu for w in weights]
    return tuple(weights)


def _as_integers(weights: Sequence[Fraction]) -> tuple[list[int], int]:
    denom = 1
    for w in weights:
        denom = math.lcm(denom, w.denominator)
    return [w.numerator * (denom // w.denominator) for w in weights], denom


def _cycles(N: int, k: int) -> list[list[int]]:
    g = math.gcd(N, k)
    length = N // g
    return [[(r + t * k) % N for t in range(length)] for r in range(g)]


def _path_best(vals: Sequence[int]) -> int:
    take, skip = 0, 0
    for v in vals:
        take, skip = skip + v, max(take, skip)
    return max(take, skip)


def _cycle_best(vals: Sequence[int]) -> int:
    return max(_path_best(vals[1:]), _path_best(vals[:-1]))


def _path_pick(vals: Sequence[int]) -> tuple[int, list[int]]:
    """Best path independent set and its positions; ``vals`` must make the optimum unique."""
    n = len(vals)
    dp = [0] * (n + 1)
    for t in range(n):
        dp[t + 1] = max(dp[t], (dp[t - 1] if t else 0) + vals[t])
    picked, t = [], n
    while t > 0:
        if dp[t] == dp[t - 1]:
            t -= 1
        else:
            picked.append(t - 1)
            t -= 2
    return dp[n], picked


def _cycle_pick(cycle: Sequence[int], ints: Sequence[int]) -> list[int]:
    """Optimal independent set on one cycle, preferring small elements.

    Each element gets a tie-break bit below the weight, more significant for
    smaller elements, so the unique optimum of the keyed problem is the
    heaviest set whose sorted listing is lexicographically smallest.
    """
    L = len(cycle)
    rank = {a: r for r, a in enumerate(sorted(cycle))}
    keys = [(ints[a] << L) | (1 << (L - 1 - rank[a])) for a in cycle]
    va, pa = _path_pick(keys[1:])
    vb, pb = _path_pick(keys[:-1])
    if va > vb:
        return [cycle[1 + t] for t in pa]
    return [cycle[t] for t in pb]


def best_for_shift(p: ShiftProblem) -> tuple[Fraction, tuple[int, ...]]:
    """Heaviest ``A`` with ``((A + k) mod N) & A`` empty, and that ``A``."""
    ints, denom = _as_integers(p.weights)
    witness: list[int] = []
    for cycle in _cycles(p.N, p.k):
        witness.extend(_cycle_pick(cycle, ints))
    witness.sort()
    return Fraction(sum(ints[a] for a in witness), denom), tuple(witness)


def shift_value(weights: Sequence[Fraction], k: int) -> Fraction:
    """Value of :func:`best_for_shift` without building the witness."""
    N = len(weights)
    if not 1 <= k < N:
        raise InvalidShift(f"shift must satisfy 1 <= k < {N}, got {k}")
    ints, denom = _as_integers(weights)
    total = 0
    for cycle in _cycles(N, k):
        total += _cycle_best([ints[a] for a in cycle])
    return Fraction(total, denom)


def _scan(weights, ints, denom, shifts: Iterable[int]) -> tuple[Fraction, int]:
    N = len(weights)
    best, best_k = -1, None
    for k in shifts:
        if not 1 <= k < N:
            raise InvalidShift(f"shift must satisfy 1 <= k < {N}, got {k}")
        total = sum(_cycle_best([ints[a] for a in cycle]) for cycle in _cycles(N, k))
        if total > best:
            best, best_k = total, k
    if best_k is None:
        raise InvalidShift("no candidate shifts")
    return Fraction(best, denom), best_k


def psi_range(
    family: MeasureFamily,
    i: int,
    j: int,
    k_budget: Sequence[int] | None = None,
    cap: int | None = None,
) -> PsiResult:
    """Maximum over shifts of the best shift-disjoint mass on the block ``[i..j]``.

    Ties go to the smallest shift, then to the lexicographically smallest
    witness. ``k_budget`` restricts the candidate shifts and lifts the cap.
    """
    if i > j:
        raise ValueError("need i <= j")
    N = block_size(family, i, j)
    cap = size_cap() if cap is None else cap
    if k_budget is None and N > cap:
        raise SizeLimit(f"block [{i}..{j}] has {N} cells, cap is {cap}")
    weights = block_weights(family, i, j)
    ints, denom = _as_integers(weights)
    shifts = range(1, N) if k_budget is None else sorted(set(k_budget))
    value, k = _scan(weights, ints, denom, shifts)
    _, witness = best_for_shift(ShiftProblem(N, weights, k))
    return PsiResult(value, k, witness, N, i, j)


def psi_single(family: MeasureFamily, i: int, cap: int | None = None) -> PsiResult:
    return psi_range(family, i, i, cap=cap)


def window_shift_max(family: MeasureFamily, J: int, m: int, cap: int | None = None) -> Fraction:
    """Best shift-disjoint mass for the fixed shift ``m`` over ``Z_beta(J+1)``."""
    N = family.base.beta(J + 1)
    cap = size_cap() if cap is None else cap
    if N > cap:
        raise SizeLimit(f"window [0..{J}] has {N} cells, cap is {cap}")
    return shift_value(block_weights(family, 0, J), m)


def brute_force_psi(family: MeasureFamily, i: int, j: int) -> PsiResult:
    """Exhaustive search over every subset and every shift; ``N <= 16``."""
    alphas = [family.base.alpha(s) for s in range(i, j + 1)]
    N = math.prod(alphas)
    if N > BRUTE_FORCE_CAP:
        raise SizeLimit(f"brute force limited to {BRUTE_FORCE_CAP} cells, got {N}")
    weights = []
    for a in range(N):
        w = Fraction(1)
        for s, d in zip(range(i, j + 1), _to_digits(a, alphas)):
            w *= family.mass(s, d)
        weights.append(w)
    return brute_force_weights(weights, i, j)


def brute_force_weights(weights: Sequence[Fraction], lo: int = 0, hi: int = 0) -> PsiResult:
    N = len(weights)
    full = 1 << N
    sums = [Fraction(0)] * full
    for mask in range(1, full):
        low = mask & -mask
        sums[mask] = sums[mask ^ low] + weights[low.bit_length() - 1]
    best = None
    for k in range(1, N):
        image = [1 << ((a + k) % N) for a in range(N)]
        for mask in range(1, full):
            shifted, m = 0, mask
            while m:
                low = m & -m
                shifted |= image[low.bit_length() - 1]
                m ^= low
            if shifted & mask:
                continue
            v = sums[mask]
            if best is None or v > best[0]:
                best = (v, k, _members(mask))
            elif v == best[0] and k == best[1]:
                members = _members(mask)
                if members < best[2]:
                    best = (v, k, members)
    return PsiResult(best[0], best[1], best[2], N, lo, hi)


def _members(mask: int) -> tuple[int, ...]:
    return tuple(a for a in range(mask.bit_length()) if mask >> a & 1)
