"""Independent reference computations by plain enumeration.

Nothing here calls the package's DP code; the only shared pieces are the
radix sequence and the per-coordinate mass vectors.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from odolin.cylinders import EMPTY, Block, Box


def radices(base, J):
    return [base.alpha(i) for i in range(J + 1)]


def digits(n, alphas):
    out = []
    for a in alphas:
        n, d = divmod(n, a)
        out.append(d)
    return tuple(out)


def value(ds, alphas):
    total, scale = 0, 1
    for d, a in zip(ds, alphas):
        total += d * scale
        scale *= a
    return total


def cell_masses(family, J):
    alphas = radices(family.base, J)
    out = []
    for n in range(_prod(alphas)):
        w = Fraction(1)
        for i, d in enumerate(digits(n, alphas)):
            w *= family.masses(i)[d]
        out.append(w)
    return out


def _prod(xs):
    p = 1
    for x in xs:
        p *= x
    return p


def member(S, ds):
    if S is EMPTY:
        return False
    if isinstance(S, Box):
        return all(a is None or ds[i] in a for i, a in enumerate(S.allowed))
    assert isinstance(S, Block)
    return tuple(ds[S.lo : S.hi + 1]) in S.cells


def shifted_intersection(S, T, k, family, J):
    """``mu(f^k(S) & T)`` summed over window cells; the free tail carries full mass."""
    alphas = radices(family.base, J)
    N = _prod(alphas)
    w = cell_masses(family, J)
    total = Fraction(0)
    for x in range(N):
        y = (x + k) % N
        if member(S, digits(x, alphas)) and member(T, digits(y, alphas)):
            total += w[y]
    return total


def set_measure(S, family, J):
    alphas = radices(family.base, J)
    w = cell_masses(family, J)
    return sum((w[x] for x in range(len(w)) if member(S, digits(x, alphas))), Fraction(0))


def carry_split(S, k, n, family, J):
    """Mass of ``S`` split by whether adding ``k`` carries into position ``n``."""
    alphas = radices(family.base, J)
    beta_n = _prod(alphas[:n])
    w = cell_masses(family, J)
    split = [Fraction(0), Fraction(0)]
    for x in range(len(w)):
        if member(S, digits(x, alphas)):
            split[(x % beta_n) + (k % beta_n) >= beta_n] += w[x]
    return tuple(split)


def norm_ratio(family, J, k):
    w = cell_masses(family, J)
    N = len(w)
    return max(w[x] / w[(x + k) % N] for x in range(N))


def star_constant_formula(family, J):
    """``min mu(cell_w) / mu(cell_(w-1))`` written with the ratios ``lambda_i(j)``.

    For ``w`` whose lowest nonzero digit ``j`` sits at position ``l`` the
    ratio is ``lambda_l(j) * prod_(i<l) lambda_i(0)``; for ``w = 0`` it is
    the full product ``prod_(i<=J) lambda_i(0)``.
    """

    def lam(i, j):
        mu = family.masses(i)
        return mu[j] / mu[j - 1]

    best = None
    prefix = Fraction(1)
    for l in range(J + 1):
        for j in range(1, family.base.alpha(l)):
            v = lam(l, j) * prefix
            best = v if best is None else min(best, v)
        prefix *= lam(l, 0)
    return min(best, prefix)


def brute_psi_value(weights):
    """Largest weight of ``A`` with ``(A + k) mod N`` disjoint from ``A``, over ``0 < k < N``."""
    N = len(weights)
    best = Fraction(0)
    for k in range(1, N):
        for r in range(1, N + 1):
            for A in itertools.combinations(range(N), r):
                s = set(A)
                if any((a + k) % N in s for a in A):
                    continue
                best = max(best, sum(weights[a] for a in A))
    return best


def block_cell_weights(family, i, j):
    alphas = [family.base.alpha(s) for s in range(i, j + 1)]
    out = []
    for n in range(_prod(alphas)):
        w = Fraction(1)
        for s, d in zip(range(i, j + 1), digits(n, alphas)):
            w *= family.masses(s)[d]
        out.append(w)
    return out
