"""Explicit witness sets for the mixing and transitivity criteria.

A witness for a shift ``k`` is a set ``B`` with small complement and
``B & f^k(B)`` empty. Every construction here is re-checked through the
carry DP in :mod:`odolin.cylinders` before it is reported as accepted;
nothing is trusted from the construction alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import cylinders as cyl
from .errors import EpsilonTooLarge, HorizonExhausted, KTooSmall, NotFound, SizeLimit
from .measures import MeasureFamily, ex33, ex33_digits
from .odometer import digits_of
from .shift_disjoint import block_size, psi_range, size_cap, window_shift_max

DEFAULT_HORIZON = 64


@dataclass
class WitnessReport:
    k: int
    set: cyl.WindowSet
    measure: Fraction
    complement_measure: Fraction
    disjoint: bool
    eps: Fraction
    construction: str
    params: dict = field(default_factory=dict)

    @property
    def accepted(self) -> bool:
        return self.disjoint and self.complement_measure < self.eps


def _verify(family, B, k, eps, construction, params) -> WitnessReport:
    mu = cyl.set_measure(B, family)
    return WitnessReport(
        k=k,
        set=B,
        measure=mu,
        complement_measure=1 - mu,
        disjoint=cyl.disjoint_under(B, k, family),
        eps=Fraction(eps),
        construction=construction,
        params=params,
    )


def _top_digit(k: int, family: MeasureFamily) -> tuple[int, int]:
    """Position and value of the most significant nonzero digit of ``k``."""
    J = family.base.window_for(k)
    d = digits_of(k, family.base, J)
    return J, d[J]


def find_mixing_level(family: MeasureFamily, eps: Fraction, horizon: int = DEFAULT_HORIZON) -> int:
    """Smallest ``l`` with ``eta_i * eta_(i+1) > 1 - eps`` for every ``l <= i < horizon``."""
    eps = Fraction(eps)
    l = None
    for i in range(horizon - 1, -1, -1):
        if family.eta(i) * family.eta(i + 1) > 1 - eps:
            l = i
        else:
            break
    if l is None:
        raise HorizonExhausted(f"eta_i * eta_(i+1) > 1 - {eps} fails at the end of the horizon {horizon}")
    return l


def mixing_witness(
    family: MeasureFamily, k: int, eps: Fraction, horizon: int = DEFAULT_HORIZON
) -> WitnessReport:
    """Pin the two coordinates at and above the top digit of ``k`` to their heaviest digits.

    With ``j`` the position of the top nonzero digit of ``k``, either the
    image changes digit ``j`` or a carry leaves ``j`` and changes digit
    ``j + 1``; both moves leave the set.
    """
    eps = Fraction(eps)
    l = find_mixing_level(family, eps, horizon)
    k0 = family.base.beta(l + 1)
    if k <= k0:
        raise KTooSmall(f"k = {k} must exceed k_0 = {k0}")
    j, _ = _top_digit(k, family)
    a_j, a_j1 = family.coord(j).argmax(), family.coord(j + 1).argmax()
    B = cyl.Box.fix({j: a_j, j + 1: a_j1})
    return _verify(family, B, k, eps, "top-digit-pin", {"l": l, "k0": k0, "j": j, "a_j": a_j, "a_j1": a_j1})


def ex33_product(l: int) -> Fraction:
    """Lower bound for the witness mass at level ``l`` in the ``ex33`` family."""
    m_l, m_l1 = Fraction(2 ** (l + 2)), Fraction(2 ** (l + 3))
    d_l, d_l1 = l + 1, l + 2
    return (1 - 1 / m_l) * (1 - 1 / m_l1) * Fraction(d_l - 2, d_l) * Fraction(d_l1 - 1, d_l1)


def ex33_level(eps: Fraction, horizon: int = DEFAULT_HORIZON) -> int:
    """Smallest ``l_0`` with the product bound above ``1 - eps`` from ``l_0`` to the horizon."""
    eps = Fraction(eps)
    l0 = None
    for l in range(horizon, -1, -1):
        if ex33_product(l) > 1 - eps:
            l0 = l
        else:
            break
    if l0 is None:
        raise HorizonExhausted(f"product bound never exceeds 1 - {eps} by level {horizon}")
    return l0


def ex33_trim(l: int, j: int) -> tuple[list[int], list[int]]:
    """``E_l``: drop from ``D_l`` the overlap element under ``+j`` and under ``+(j+1)``.

    Returns ``(E_l, removed)``. Addition is in the integers.
    """
    E = ex33_digits(l)
    removed = []
    for shift in (j, j + 1):
        members = set(E)
        hit = [u + shift for u in E if u + shift in members]
        if hit:
            removed.append(hit[0])
            E = [d for d in E if d != hit[0]]
    return E, removed


def ex33_witness(k: int, eps: Fraction, family: MeasureFamily | None = None) -> WitnessReport:
    family = family or ex33()
    eps = Fraction(eps)
    l0 = ex33_level(eps)
    k0 = family.base.beta(l0 + 1)
    if k < k0:
        raise KTooSmall(f"k = {k} must be at least k_0 = {k0}")
    l, j = _top_digit(k, family)
    E, removed = ex33_trim(l, j)
    F = ex33_digits(l + 1)[1:]
    B = cyl.make_box({l: E, l + 1: F})
    params = {
        "l0": l0,
        "k0": k0,
        "l": l,
        "j": j,
        "E_l": E,
        "removed": removed,
        "F_l1": F,
        "wraps": 2**l + j + 1 > 2 ** (l + 2) - 1,
    }
    return _verify(family, B, k, eps, "sparse-digit-sets", params)


def transitive_witness(
    family: MeasureFamily, eps: Fraction, window_budget: int = 12, cap: int | None = None
) -> WitnessReport:
    """Search blocks for a shift-disjoint set of mass above ``1 - eps``.

    Single coordinates ``0..window_budget`` are tried first, then blocks
    ``[i..j]`` ordered by ``j`` and, within that, by decreasing ``i``, as
    long as the block fits under the size cap.
    """
    eps = Fraction(eps)
    cap = size_cap() if cap is None else cap
    candidates = [(n, n) for n in range(window_budget + 1)]
    candidates += [(i, j) for j in range(window_budget + 1) for i in range(j - 1, -1, -1)]
    for i, j in candidates:
        if block_size(family, i, j) > cap:
            continue
        res = psi_range(family, i, j, cap=cap)
        if res.value > 1 - eps:
            break
    else:
        raise NotFound(f"no block within [0..{window_budget}] has psi > 1 - {eps}")
    B = cyl.make_block(i, j, res.witness_digits(family))
    k = res.k * family.base.beta(i)
    report = _verify(family, B, k, eps, "block-search", {"i": i, "j": j, "h": res.k, "psi": res.value})
    U = cyl.complement(B, family.base)
    report.params["complement_image"] = cyl.shifted_intersection_measure(U, B, k, family)
    return report


@dataclass
class ProbeReport:
    l: int
    a: int
    b: int
    m: int
    eps: Fraction
    bound: Fraction
    argument: str
    maxima: dict[int, Fraction]
    skipped: list[int]

    @property
    def all_below(self) -> bool:
        return all(v <= 1 - self.eps for v in self.maxima.values())


def nonmixing_probe(
    family: MeasureFamily, l: int, eps: Fraction, window_budget: int = 2, cap: int | None = None
) -> ProbeReport:
    """Best shift-disjoint mass for the two-point shift at level ``l`` on windows ``l..l+budget``.

    ``a`` is the heaviest digit at ``l``, ``b`` the heaviest of the rest,
    and ``m = |a - b| * beta_l``. For ``eps`` below a sixteenth of the
    smaller of their masses, no set of mass above ``1 - eps`` misses its
    ``m``-shift, so every reported maximum must stay at or below ``1 - eps``.
    """
    eps = Fraction(eps)
    c = family.coord(l)
    a = c.argmax()
    b = c.argmax_excluding(a)
    bound = min(c[a], c[b]) / 16
    if not 0 < eps < bound:
        raise EpsilonTooLarge(f"need 0 < eps < {bound} at level {l}, got {eps}")
    argument = "overlap" if eps < family.defect(l) / 16 else "two-point"
    m = abs(a - b) * family.base.beta(l)
    cap = size_cap() if cap is None else cap
    maxima, skipped = {}, []
    for J in range(l, l + window_budget + 1):
        try:
            maxima[J] = window_shift_max(family, J, m, cap=cap)
        except SizeLimit:
            skipped.append(J)
    return ProbeReport(l, a, b, m, eps, bound, argument, maxima, skipped)


def dl_overlap_check(l: int, j_max: int) -> int:
    """Largest ``|(D_l + j) & D_l|`` over ``1 <= j <= j_max``."""
    D = set(ex33_digits(l))
    return max((len({d + j for d in D} & D) for j in range(1, j_max + 1)), default=0)
