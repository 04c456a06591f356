"""The composition operator restricted to window-measurable step functions.

Step functions constant on the cells of ``[0..J]`` form an invariant
subspace for ``T_f^k`` when ``k < beta(J+1)``. On it, ``T_f^k`` permutes
cell values, so its ``L^p`` norm is ``R^(1/p)`` with
``R = max_w mu(cell_(w-k)) / mu(cell_w)``. All comparisons use the exact
rational ``R``; ``p`` only enters the decimal rendering.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Context, Decimal
from fractions import Fraction

from . import cylinders as cyl
from .errors import WindowTooSmall
from .measures import MeasureFamily

DECIMAL_DIGITS = 12


def approx_root(R: Fraction, p: Fraction, digits: int = DECIMAL_DIGITS) -> str:
    """``R ** (1/p)`` to ``digits`` significant digits (approximate)."""
    ctx = Context(prec=digits + 10)
    x = ctx.divide(Decimal(R.numerator), Decimal(R.denominator))
    root = ctx.power(x, ctx.divide(Decimal(1), ctx.divide(Decimal(p.numerator), Decimal(p.denominator))))
    return format(Context(prec=digits).plus(root), "g")


@dataclass(frozen=True)
class OperatorQuery:
    family: MeasureFamily
    J: int
    p: Fraction
    k: int

    def __post_init__(self):
        object.__setattr__(self, "p", Fraction(self.p))
        if self.p < 1:
            raise ValueError("p must be >= 1")
        if not 0 <= self.k < self.family.base.beta(self.J + 1):
            raise WindowTooSmall(f"k = {self.k} does not fit in window [0..{self.J}]")


def norm_ratio_Tfk(q: OperatorQuery) -> Fraction:
    """Exact ``R``; the window norm of ``T_f^k`` is ``R ** (1/p)``.

    ``R = max_x mu(cell_x) / mu(cell_(x+k))``, found by a max-product pass
    over the window digits; the carry out of the window wraps cells around
    and is ignored.
    """
    coords = [q.family.coord(i) for i in range(q.J + 1)]
    out = cyl.pair_dp(
        cyl.FULL, cyl.FULL, q.k, q.family.base, q.J, cyl.MAXPROD, lambda i, x, e: coords[i][x] / coords[i][e]
    )
    return max(out.values())


def norm_report(q: OperatorQuery) -> tuple[Fraction, str]:
    R = norm_ratio_Tfk(q)
    return R, approx_root(R, q.p)


def star_constant(family: MeasureFamily, J: int) -> Fraction:
    """Best ``c`` with ``mu(B) >= c * mu(f^-1(B))`` for sets measurable on ``[0..J]``.

    ``c_J = min_w mu(cell_w) / mu(cell_(w-1))``, the reciprocal of the
    window ratio for ``k = 1``. Non-increasing in ``J``.
    """
    if family.base.beta(J + 1) < 2:
        raise WindowTooSmall("window needs at least two cells")
    return 1 / norm_ratio_Tfk(OperatorQuery(family, J, Fraction(1), 1))


def indicator_orbit(
    S: cyl.WindowSet, family: MeasureFamily, k_max: int, window: int | None = None
) -> list[Fraction]:
    """``mu(f^-k(S))`` for ``k = 0..k_max``; equals ``||T_f^k 1_S||_p^p`` for every ``p``.

    On the window, ``f^-k`` is addition of ``beta(J+1) - k``; the free tail
    absorbs the borrow.
    """
    J = window if window is not None else max(S.window, family.base.window_for(k_max))
    N = family.base.beta(J + 1)
    if k_max >= N:
        raise WindowTooSmall(f"k_max = {k_max} needs a window wider than [0..{J}]")
    out = [cyl.set_measure(S, family)]
    for k in range(1, k_max + 1):
        out.append(cyl.shifted_intersection_measure(S, cyl.FULL, N - k, family, window=J))
    return out
