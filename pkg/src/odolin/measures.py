"""Product measures on the odometer and their characterizing scalars.

Each coordinate carries a probability vector on ``{0, ..., alpha_i - 1}``
with strictly positive exact rational masses. Masses are stored sparsely
(a default value plus explicit exceptions) so coordinates with radix in the
billions still answer max/min/ratio queries in time proportional to the
number of exceptional digits.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .errors import InvalidFamily
from .odometer import BaseSeq

__all__ = [
    "CoordMeasure",
    "Declaration",
    "MeasureFamily",
    "uniform",
    "thm32",
    "ex33",
    "thm36",
    "thm37",
    "custom",
    "FAMILY_KINDS",
]

FAMILY_KINDS = ("uniform", "thm32", "ex33", "thm36", "thm37", "custom")

# Declaration kinds. The first six describe limits of the scalars computed
# here; the last four record facts established by a construction.
DECLARATION_KINDS = {
    "lim_eta": "lim eta_i = {v}",
    "limsup_eta": "limsup eta_i = {v}",
    "lim_defect": "lim (1 - eta_i)/alpha_i = {v}",
    "rho_bounded": "rho_n bounded",
    "rho_unbounded": "rho_n unbounded",
    "alpha_bounded": "alpha_i bounded",
    "limsup_psi": "limsup psi_(i,j) = {v}",
    "mass_floor": "infinitely many coordinates carry two digits of mass >= {v}",
    "diamond": "inf lambda_l(j) prod_(i<l) lambda_i(0) >= {v} > 0",
    "mixing_witnesses": "for every eps an explicit set B_k exists for all large k",
}


@dataclass(frozen=True)
class Declaration:
    """A declared asymptotic fact with its justification.

    ``verified`` is True only for facts established by the construction
    of a built-in family; user assertions stay unverified.
    """

    kind: str
    value: Fraction | None = None
    justification: str = "user assertion"
    verified: bool = False

    def __post_init__(self):
        if self.kind not in DECLARATION_KINDS:
            raise InvalidFamily(f"unknown declaration kind {self.kind!r}")
        if self.value is not None:
            object.__setattr__(self, "value", Fraction(self.value))

    def text(self) -> str:
        if self.kind == "diamond" and self.value is None:
            return "inf lambda_l(j) prod_(i<l) lambda_i(0) > 0"
        return DECLARATION_KINDS[self.kind].format(v=self.value)


class CoordMeasure:
    """Probability vector on ``A_i`` stored as default mass plus exceptions."""

    __slots__ = ("alpha", "default", "exceptions")

    def __init__(self, alpha: int, default: Fraction | None, exceptions: Mapping[int, Fraction]):
        self.alpha = alpha
        self.exceptions = {int(d): Fraction(m) for d, m in exceptions.items()}
        n_default = alpha - len(self.exceptions)
        self.default = Fraction(default) if n_default and default is not None else None
        if n_default and self.default is None:
            raise InvalidFamily("missing default mass for non-exceptional digits")
        if any(not 0 <= d < alpha for d in self.exceptions):
            raise InvalidFamily(f"exceptional digit outside [0, {alpha})")
        masses = list(self.exceptions.values()) + ([self.default] if self.default is not None else [])
        if any(m <= 0 for m in masses):
            raise InvalidFamily("every digit must carry strictly positive mass")
        total = sum(self.exceptions.values(), Fraction(0)) + n_default * (self.default or 0)
        if total != 1:
            raise InvalidFamily(f"masses sum to {total}, not 1")

    @classmethod
    def from_vector(cls, masses: Sequence[Fraction]) -> "CoordMeasure":
        return cls(len(masses), None, {d: m for d, m in enumerate(masses)})

    def __getitem__(self, d: int) -> Fraction:
        if not 0 <= d < self.alpha:
            raise IndexError(d)
        m = self.exceptions.get(d)
        return self.default if m is None else m

    def __len__(self) -> int:
        return self.alpha

    def vector(self) -> tuple[Fraction, ...]:
        return tuple(self[d] for d in range(self.alpha))

    def _distinct(self) -> list[Fraction]:
        vals = list(self.exceptions.values())
        if self.default is not None:
            vals.append(self.default)
        return vals

    @property
    def eta(self) -> Fraction:
        return max(self._distinct())

    @property
    def delta(self) -> Fraction:
        return min(self._distinct())

    def _first_non_exception(self, start: int = 0) -> int | None:
        d = start
        while d < self.alpha:
            if d not in self.exceptions:
                return d
            d += 1
        return None

    def argmax(self) -> int:
        """Smallest digit attaining the maximal mass."""
        return self.argmax_excluding(None)

    def argmax_excluding(self, skip: int | None) -> int:
        best, arg = None, None
        for d in sorted(self.exceptions):
            if d != skip and (best is None or self.exceptions[d] > best):
                best, arg = self.exceptions[d], d
        if self.default is not None:
            d = self._first_non_exception()
            if d == skip:
                d = self._first_non_exception(d + 1)
            if d is not None and (best is None or self.default > best or (self.default == best and d < arg)):
                best, arg = self.default, d
        return arg

    def lam(self, j: int) -> Fraction:
        """``mu(j) / mu(j - 1)`` with the cyclic predecessor of 0 being ``alpha - 1``."""
        return self[j] / self[(j - 1) % self.alpha]

    def min_lambda(self) -> tuple[Fraction, int]:
        """Minimal ratio and the smallest digit attaining it."""
        candidates = set()
        for d in self.exceptions:
            candidates.add(d)
            candidates.add((d + 1) % self.alpha)
        if self.default is not None:
            # some digit with both itself and its predecessor at default mass
            for d in range(min(self.alpha, 2 * len(self.exceptions) + 1)):
                if d not in self.exceptions and (d - 1) % self.alpha not in self.exceptions:
                    candidates.add(d)
                    break
        best = min(candidates, key=lambda j: (self.lam(j), j))
        return self.lam(best), best


def _positive_int(i: int, name: str = "coordinate") -> int:
    if i < 0:
        raise IndexError(f"{name} must be >= 0, got {i}")
    return i


class MeasureFamily:
    """Product measure ``mu = prod_i mu_i`` over a radix sequence.

    ``rule(i)`` builds the :class:`CoordMeasure` of coordinate ``i``;
    results are cached. Instances are safe to share between threads.
    """

    def __init__(
        self,
        base: BaseSeq,
        kind: str,
        rule: Callable[[int], CoordMeasure],
        declared: Iterable[Declaration] = (),
        params: Mapping | None = None,
    ):
        if kind not in FAMILY_KINDS:
            raise InvalidFamily(f"unknown family kind {kind!r}")
        self.base = base
        self.kind = kind
        self.declared = tuple(declared)
        self.params = dict(params or {})
        self._rule = rule
        self._coords: dict[int, CoordMeasure] = {}
        self._rho = [Fraction(1)]
        self._lock = threading.Lock()

    def __repr__(self):
        return f"MeasureFamily({self.kind!r}, base={self.base.describe()!r})"

    def coord(self, i: int) -> CoordMeasure:
        c = self._coords.get(i)
        if c is None:
            _positive_int(i)
            c = self._rule(i)
            if c.alpha != self.base.alpha(i):
                raise InvalidFamily(f"coordinate {i}: {c.alpha} masses for radix {self.base.alpha(i)}")
            self._coords[i] = c
        return c

    def masses(self, i: int) -> tuple[Fraction, ...]:
        return self.coord(i).vector()

    def mass(self, i: int, d: int) -> Fraction:
        return self.coord(i)[d]

    def eta_delta(self, i: int) -> tuple[Fraction, Fraction]:
        c = self.coord(i)
        return c.eta, c.delta

    def eta(self, i: int) -> Fraction:
        return self.coord(i).eta

    def lam(self, i: int, j: int) -> Fraction:
        c = self.coord(i)
        if not 0 <= j < c.alpha:
            raise IndexError(j)
        return c.lam(j)

    def rho(self, n: int) -> Fraction:
        """``prod_{i<=n} eta_i / delta_i``."""
        _positive_int(n)
        with self._lock:
            while len(self._rho) <= n + 1:
                i = len(self._rho) - 1
                e, d = self.eta_delta(i)
                self._rho.append(self._rho[-1] * e / d)
            return self._rho[n + 1]

    def defect(self, i: int) -> Fraction:
        """``(1 - eta_i) / alpha_i``."""
        return (1 - self.eta(i)) / self.base.alpha(i)

    def diamond_terms(self, L: int):
        """Yield ``(l, min_j term, argmin j)`` for ``l = 1..L``.

        The term is ``lambda_l(j) * prod_{i<l} lambda_i(0)``.
        """
        prefix = self.lam(0, 0)
        for l in range(1, L + 1):
            lo, j = self.coord(l).min_lambda()
            yield l, lo * prefix, j
            prefix *= self.lam(l, 0)

    def diamond_inf(self, L: int) -> tuple[Fraction, tuple[int, int]]:
        """Exact minimum of the continuity terms over ``1 <= l <= L``.

        Only an upper bound for the infimum over all ``l``.
        """
        if L < 1:
            raise ValueError("horizon must be >= 1")
        best = None
        for l, term, j in self.diamond_terms(L):
            if best is None or term < best[0]:
                best = (term, (l, j))
        return best

    def nonatomic_product(self, L: int) -> Fraction:
        out = Fraction(1)
        for i in range(_positive_int(L) + 1):
            out *= self.eta(i)
        return out

    def declaration(self, kind: str) -> Declaration | None:
        for d in self.declared:
            if d.kind == kind:
                return d
        return None

    def with_declarations(self, extra: Iterable[Declaration]) -> "MeasureFamily":
        fam = MeasureFamily(self.base, self.kind, self._rule, self.declared + tuple(extra), self.params)
        return fam


def _decl(kind, value=None, why=""):
    return Declaration(kind, None if value is None else Fraction(value), why, verified=True)


def _bounded_decl(base: BaseSeq, why: str) -> list[Declaration]:
    return [_decl("alpha_bounded", None, why)] if base.is_bounded() else []


def uniform(base: BaseSeq) -> MeasureFamily:
    def rule(i):
        a = base.alpha(i)
        return CoordMeasure(a, Fraction(1, a), {})

    declared = [
        _decl("rho_bounded", None, "uniform masses: eta_i = delta_i, so rho_n = 1 for every n"),
        _decl("diamond", 1, "uniform masses: every lambda equals 1"),
        *_bounded_decl(base, "base rule"),
    ]
    return MeasureFamily(base, "uniform", rule, declared)


def thm32(base: BaseSeq) -> MeasureFamily:
    """Mixing family: ``mu_n(0) = 1 - 1/m_n`` with ``m_n = 2^(n+1) + 1``.

    The remaining mass is spread evenly, so
    ``eta_n = 2^(n+1) / (2^(n+1) + 1)``, which increases to 1.
    Continuity needs ``sup alpha_{n+1} / beta_{n+1} < inf``, which every
    supported base rule satisfies.
    """
    def rule(n):
        a = base.alpha(n)
        m = 2 ** (n + 1) + 1
        return CoordMeasure(a, Fraction(1, m * (a - 1)), {0: 1 - Fraction(1, m)})

    declared = [
        _decl("lim_eta", 1, "eta_n = 1 - 1/(2^(n+1)+1) by construction"),
        _decl("diamond", None, "chain bound grows with l under the growth hypothesis on alpha"),
        *_bounded_decl(base, "base rule"),
    ]
    return MeasureFamily(base, "thm32", rule, declared)


def ex33_digits(n: int) -> list[int]:
    """``D_n = {2^i - 1 : 0 <= i <= n}``."""
    return [2**i - 1 for i in range(n + 1)]


def ex33(base: BaseSeq | None = None) -> MeasureFamily:
    """Mixing family with ``lim eta_i = 0`` on ``alpha_n = 2^(n+2)``.

    Mass ``1 - 1/m_n`` (``m_n = 2^(n+2)``) is spread evenly on ``D_n`` and the
    rest evenly on its complement.
    """
    if base is None:
        base = BaseSeq.power(2)
    if base.kind != "power" or base.offset != 2:
        raise InvalidFamily("ex33 forces alpha_n = 2^(n+2)")

    def rule(n):
        a = base.alpha(n)
        m = 2 ** (n + 2)
        D = ex33_digits(n)
        on = (1 - Fraction(1, m)) / len(D)
        return CoordMeasure(a, Fraction(1, m * (a - len(D))), {d: on for d in D})

    declared = [
        _decl("lim_eta", 0, "|D_n| and alpha_n - |D_n| both tend to infinity"),
        _decl("diamond", Fraction(9, 64), "chain bound 9/64"),
        _decl("mixing_witnesses", None, "B_k = {x_l in E_l, x_(l+1) in F_(l+1)} for all k >= k_0"),
    ]
    return MeasureFamily(base, "ex33", rule, declared)


def thm36_positions(base: BaseSeq, count: int) -> tuple[int, list[int]]:
    """The recurring minimal radix ``t`` and the first ``count`` special coordinates.

    Special coordinates are the 1st, 3rd, 5th, ... occurrences of ``t``, so
    infinitely many occurrences stay uniform.
    """
    t = base.liminf()
    if t is None:
        raise InvalidFamily("thm36 needs liminf alpha_n < infinity")
    stream = thm36_stream(base)
    return t, [next(stream) for _ in range(count)]


def thm36_stream(base: BaseSeq):
    t = base.liminf()
    for idx, n in enumerate(base.positions(t)):
        if idx % 2 == 0:
            yield n


def thm36(base: BaseSeq) -> MeasureFamily:
    """Transitive, non-mixing family for bases with finite ``liminf alpha_n = t``.

    On the ``k``-th special coordinate ``mu(0) = 1 - 1/(k+3)``; every other
    coordinate is uniform.
    """
    t = base.liminf()
    if t is None:
        raise InvalidFamily("thm36 needs liminf alpha_n < infinity")
    stream = thm36_stream(base)
    found: dict[int, int] = {}
    lock = threading.Lock()

    def special_index(n: int) -> int | None:
        with lock:
            while not found or max(found) < n:
                p = next(stream)
                found[p] = len(found)
        return found.get(n)

    def rule(n):
        a = base.alpha(n)
        k = special_index(n)
        if k is None:
            return CoordMeasure(a, Fraction(1, a), {})
        m = k + 3
        return CoordMeasure(a, Fraction(1, m * (a - 1)), {0: 1 - Fraction(1, m)})

    declared = [
        _decl("limsup_eta", 1, "eta = 1 - 1/(k+3) on the special coordinates"),
        _decl("mass_floor", Fraction(1, t), f"infinitely many uniform coordinates with alpha = {t}"),
        _decl("diamond", Fraction(1, 2 * (t - 1)), f"chain bound 1/(2(t-1)) with t = {t}"),
        *_bounded_decl(base, "base rule"),
    ]
    return MeasureFamily(base, "thm36", rule, declared, {"t": t})


def thm37(base: BaseSeq) -> MeasureFamily:
    """Transitive, non-mixing family for ``alpha_n >= 4``.

    ``mu_n(0) = mu_n(1) = (1 - 1/m_n)/2`` with ``m_n = 2^n + 1``; the
    remaining digits share ``1/m_n`` evenly.
    """
    if base.kind == "constant" and base.value < 4:
        raise InvalidFamily("thm37 requires alpha_n >= 4")
    if base.kind == "periodic" and min(base.prefix + base.period) < 4:
        raise InvalidFamily("thm37 requires alpha_n >= 4")
    if base.kind == "power" and base.offset < 2:
        raise InvalidFamily("thm37 requires alpha_n >= 4")

    def rule(n):
        a = base.alpha(n)
        m = 2**n + 1
        big = (1 - Fraction(1, m)) / 2
        return CoordMeasure(a, Fraction(1, m * (a - 2)), {0: big, 1: big})

    declared = [
        _decl("limsup_psi", 1, "psi_n >= mu_n({0,1}) = 1 - 1/(2^n+1) via the shift by 2"),
        _decl("mass_floor", Fraction(1, 4), "mu_n(0) = mu_n(1) >= 1/4 for every n"),
        _decl("diamond", None, "chain bound grows with l under the growth hypothesis on alpha"),
        *_bounded_decl(base, "base rule"),
    ]
    return MeasureFamily(base, "thm37", rule, declared)


def custom(
    base: BaseSeq,
    masses: Sequence[Sequence[Fraction]],
    declared: Iterable[Declaration] = (),
    tail: str = "repeat",
) -> MeasureFamily:
    """User-supplied masses for a prefix of coordinates.

    Beyond the prefix, ``tail="repeat"`` cycles the given vectors and
    ``tail="uniform"`` uses uniform masses. Declarations stay unverified.
    """
    vectors = [tuple(Fraction(m) for m in v) for v in masses]
    if not vectors:
        raise InvalidFamily("custom family needs at least one mass vector")
    if tail not in ("repeat", "uniform"):
        raise InvalidFamily(f"unknown tail rule {tail!r}")
    for i, v in enumerate(vectors):
        CoordMeasure.from_vector(v)
        if len(v) != base.alpha(i):
            raise InvalidFamily(f"coordinate {i}: {len(v)} masses for radix {base.alpha(i)}")

    def rule(i):
        if i < len(vectors):
            return CoordMeasure.from_vector(vectors[i])
        if tail == "uniform":
            a = base.alpha(i)
            return CoordMeasure(a, Fraction(1, a), {})
        return CoordMeasure.from_vector(vectors[i % len(vectors)])

    user = [Declaration(d.kind, d.value, d.justification, verified=False) for d in declared]
    return MeasureFamily(base, "custom", rule, user, {"tail": tail})


def build(kind: str, base: BaseSeq | None, **kw) -> MeasureFamily:
    """Factory keyed by family name."""
    if kind == "ex33":
        return ex33(base)
    if base is None:
        raise InvalidFamily(f"{kind} needs a base")
    if kind == "custom":
        return custom(base, **kw)
    return {"uniform": uniform, "thm32": thm32, "thm36": thm36, "thm37": thm37}[kind](base)
