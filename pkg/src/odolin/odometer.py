"""Mixed-radix integers and carry-over addition on the odometer.

A point of the odometer is a digit sequence ``(x_0, x_1, ...)`` with
``0 <= x_i < alpha(i)``; integers are identified with their digit vectors
through the radix products ``beta(i) = alpha(0) * ... * alpha(i-1)``.
Everything here works on a finite window ``[0..J]`` and never truncates:
a carry leaving the window is returned to the caller.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import InvalidBase, OutOfRange, WindowMismatch

__all__ = [
    "BaseSeq",
    "MixedRadixInt",
    "encode",
    "decode",
    "add_with_carry",
    "carry_at",
    "digits_of",
]


@dataclass(frozen=True)
class BaseSeq:
    """Rule-based radix sequence ``alpha(0), alpha(1), ...``.

    Three rules cover every base we need:

    * ``constant``: ``alpha(i) = value``
    * ``periodic``: an explicit ``prefix`` followed by a repeating ``period``
    * ``power``: ``alpha(i) = 2 ** (i + offset)``
    """

    kind: str
    value: int = 0
    prefix: tuple[int, ...] = ()
    period: tuple[int, ...] = ()
    offset: int = 0
    _betas: list = field(default_factory=lambda: [1], init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind == "constant":
            if self.value < 2:
                raise InvalidBase(f"constant radix must be >= 2, got {self.value}")
        elif self.kind == "periodic":
            if not self.period:
                raise InvalidBase("periodic base needs a non-empty period")
            bad = [a for a in self.prefix + self.period if a < 2]
            if bad:
                raise InvalidBase(f"radices must be >= 2, got {bad}")
        elif self.kind == "power":
            if self.offset < 1:
                raise InvalidBase("power base 2**(n+offset) needs offset >= 1")
        else:
            raise InvalidBase(f"unknown base rule {self.kind!r}")

    @classmethod
    def constant(cls, value: int) -> "BaseSeq":
        return cls("constant", value=value)

    @classmethod
    def explicit(cls, values: Sequence[int], period: Sequence[int] | None = None) -> "BaseSeq":
        """Explicit prefix; the tail repeats ``period`` (default: the last value)."""
        values = tuple(int(v) for v in values)
        if period is None:
            if not values:
                raise InvalidBase("explicit base needs at least one value")
            period = values[-1:]
        return cls("periodic", prefix=values, period=tuple(int(v) for v in period))

    @classmethod
    def power(cls, offset: int) -> "BaseSeq":
        return cls("power", offset=offset)

    def alpha(self, i: int) -> int:
        if i < 0:
            raise IndexError(i)
        if self.kind == "constant":
            return self.value
        if self.kind == "power":
            return 1 << (i + self.offset)
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def beta(self, i: int) -> int:
        """``beta(0) = 1``, ``beta(i+1) = beta(i) * alpha(i)``."""
        betas = self._betas
        while len(betas) <= i:
            betas.append(betas[-1] * self.alpha(len(betas) - 1))
        return betas[i]

    def alphas(self, J: int) -> list[int]:
        return [self.alpha(i) for i in range(J + 1)]

    def is_bounded(self) -> bool:
        """Whether the radices are bounded; decided from the rule, not sampled."""
        return self.kind != "power"

    def liminf(self) -> int | None:
        """``liminf alpha``; ``None`` when the radices tend to infinity."""
        if self.kind == "constant":
            return self.value
        if self.kind == "periodic":
            return min(self.period)
        return None

    def positions(self, value: int) -> Iterator[int]:
        """All coordinates ``n`` with ``alpha(n) == value``, in increasing order."""
        if self.kind == "constant":
            if value == self.value:
                n = 0
                while True:
                    yield n
                    n += 1
            return
        if self.kind == "power":
            e = value.bit_length() - 1
            if value > 0 and 1 << e == value and e >= self.offset:
                yield e - self.offset
            return
        for n, a in enumerate(self.prefix):
            if a == value:
                yield n
        hits = [r for r, a in enumerate(self.period) if a == value]
        if not hits:
            return
        start = len(self.prefix)
        while True:
            for r in hits:
                yield start + r
            start += len(self.period)

    def window_for(self, k: int) -> int:
        """Smallest ``J`` with ``k < beta(J+1)``."""
        J = 0
        while k >= self.beta(J + 1):
            J += 1
        return J

    def describe(self) -> str:
        if self.kind == "constant":
            return f"constant {self.value}"
        if self.kind == "power":
            return f"2^(n+{self.offset})"
        return f"prefix {list(self.prefix)} then repeat {list(self.period)}"


@dataclass(frozen=True)
class MixedRadixInt:
    """Digit vector ``(d_0, ..., d_J)`` on the window ``[0..J]``."""

    digits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))
        if not self.digits:
            raise ValueError("a window holds at least one digit")

    @property
    def window(self) -> int:
        return len(self.digits) - 1

    def __getitem__(self, i: int) -> int:
        return self.digits[i]

    def __len__(self) -> int:
        return len(self.digits)

    def validate(self, base: BaseSeq) -> "MixedRadixInt":
        for i, d in enumerate(self.digits):
            if not 0 <= d < base.alpha(i):
                raise OutOfRange(f"digit {d} at position {i} outside [0, {base.alpha(i)})")
        return self


def digits_of(k: int, base: BaseSeq, J: int) -> tuple[int, ...]:
    """Mixed-radix digits of ``k`` on ``[0..J]``; raises if ``k`` does not fit."""
    if k < 0:
        raise OutOfRange(f"negative integer {k}")
    out = []
    for i in range(J + 1):
        k, d = divmod(k, base.alpha(i))
        out.append(d)
    if k:
        raise OutOfRange(f"integer needs a window wider than [0..{J}]")
    return tuple(out)


def encode(k: int, J: int, base: BaseSeq) -> MixedRadixInt:
    return MixedRadixInt(digits_of(k, base, J))


def decode(x: MixedRadixInt, base: BaseSeq) -> int:
    x.validate(base)
    return sum(d * base.beta(i) for i, d in enumerate(x.digits))


def _carries(x: Sequence[int], y: Sequence[int], base: BaseSeq):
    z, eps = [], [0]
    for i, (a, b) in enumerate(zip(x, y)):
        s = a + b + eps[-1]
        alpha = base.alpha(i)
        if s < alpha:
            z.append(s)
            eps.append(0)
        else:
            z.append(s - alpha)
            eps.append(1)
    return z, eps


def add_with_carry(x: MixedRadixInt, y: MixedRadixInt, base: BaseSeq):
    """Carry-over addition to the right.

    Returns ``(z, carry_out, carries)`` where ``carries[i]`` is the carry
    entering position ``i`` (``carries[0] == 0``) and ``carry_out`` is
    ``carries[J+1]``.
    """
    if x.window != y.window:
        raise WindowMismatch(f"windows {x.window} and {y.window} differ")
    x.validate(base)
    y.validate(base)
    z, eps = _carries(x.digits, y.digits, base)
    return MixedRadixInt(z), eps[-1], tuple(eps)


def carry_at(k: MixedRadixInt, x: MixedRadixInt, n: int, base: BaseSeq) -> int:
    """Carry into position ``n`` when computing ``x + k``.

    ``n`` may be ``J + 1``, which is the carry leaving the window.
    """
    if k.window != x.window:
        raise WindowMismatch(f"windows {k.window} and {x.window} differ")
    if not 0 <= n <= x.window + 1:
        raise OutOfRange(f"position {n} outside window [0..{x.window + 1}]")
    return add_with_carry(x, k, base)[2][n]
