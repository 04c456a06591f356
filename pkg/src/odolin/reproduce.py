"""Exact reproduction checks for the built-in constructions.

Each check returns :class:`Check` records naming the inequality tested and
the exact values involved. Failures are data, not exceptions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import measures as M
from .classifier import Status, classify
from .odometer import BaseSeq
from .shift_disjoint import psi_single
from .witness import (
    dl_overlap_check,
    ex33_witness,
    find_mixing_level,
    mixing_witness,
    nonmixing_probe,
    transitive_witness,
)


@dataclass
class Check:
    name: str
    passed: bool
    values: dict = field(default_factory=dict)


DEFAULT_BASES = {
    "thm32": BaseSeq.constant(2),
    "ex33": BaseSeq.power(2),
    "thm36": BaseSeq.explicit([], period=[2, 3]),
    "thm37": BaseSeq.constant(4),
}


def _strictly(values, increasing=True):
    pairs = zip(values, values[1:])
    return all(a < b for a, b in pairs) if increasing else all(a > b for a, b in pairs)


def check_thm32(L: int, base: BaseSeq | None = None, window: int = 256) -> list[Check]:
    fam = M.thm32(base or DEFAULT_BASES["thm32"])
    out = []
    eta = [fam.eta(n) for n in range(L + 1)]
    if fam.base.kind == "constant" and fam.base.value == 2:
        expected = [1 - Fraction(1, 2 ** (n + 1) + 1) for n in range(L + 1)]
        out.append(Check("eta_n = 1 - 1/(2^(n+1)+1)", eta == expected, {"eta_L": eta[-1]}))
    out.append(Check("eta strictly increasing", _strictly(eta), {"eta_0": eta[0], "eta_L": eta[-1]}))
    value, at = fam.diamond_inf(L)
    out.append(Check("continuity infimum > 0", value > 0, {"diamond_inf": value, "at": at}))
    eps = Fraction(1, 2)
    l = find_mixing_level(fam, eps)
    k0 = fam.base.beta(l + 1)
    bad, worst = [], Fraction(0)
    for k in range(k0 + 1, k0 + window + 1):
        r = mixing_witness(fam, k, eps)
        worst = max(worst, r.complement_measure)
        if not r.accepted:
            bad.append(k)
    out.append(
        Check(
            f"mixing witnesses for every k in ({k0}, {k0 + window}] at eps = 1/2",
            not bad,
            {"k0": k0, "max_complement": worst, "failures": bad},
        )
    )
    return out


def check_ex33(L: int) -> list[Check]:
    fam = M.ex33()
    out = []
    value, at = fam.diamond_inf(max(L, 1))
    out.append(Check("continuity infimum >= 9/64", value >= Fraction(9, 64), {"diamond_inf": value, "at": at}))
    eta = [fam.eta(n) for n in range(2, L + 1)]
    out.append(Check("eta strictly decreasing for i >= 2", _strictly(eta, increasing=False), {"eta_L": fam.eta(L)}))
    closed = [(1 - Fraction(1, 2 ** (n + 2))) / (n + 1) for n in range(L + 1)]
    out.append(
        Check(
            "eta_n = (1 - 2^-(n+2)) / (n+1)",
            [fam.eta(n) for n in range(L + 1)] == closed,
            {"eta_L": fam.eta(L)},
        )
    )
    eps = Fraction(1, 2)
    probe = ex33_witness(2**40 + 3, eps, fam)
    out.append(Check("witness at k = 2^40 + 3, eps = 1/2", probe.accepted, {"complement": probe.complement_measure}))
    return out


def check_thm36(L: int, base: BaseSeq | None = None) -> list[Check]:
    base = base or DEFAULT_BASES["thm36"]
    fam = M.thm36(base)
    t = fam.params["t"]
    out = []
    value, at = fam.diamond_inf(max(L, 1))
    bound = Fraction(1, 2 * (t - 1))
    out.append(Check(f"continuity infimum >= 1/(2(t-1)) with t = {t}", value >= bound, {"diamond_inf": value, "at": at}))
    _, positions = M.thm36_positions(base, 1 + L // 2)
    special = [n for n in positions if n <= L]
    eta = [fam.eta(n) for n in special]
    expected = [1 - Fraction(1, k + 3) for k in range(len(special))]
    out.append(
        Check(
            "eta on the k-th special coordinate (k from 0) = 1 - 1/(k+3), increasing",
            eta == expected and _strictly(eta),
            {"coordinates": special, "eta": eta},
        )
    )
    v = classify(fam, L)
    ok = v.transitive is Status.CERTIFIED_YES and v.mixing is Status.CERTIFIED_NO
    out.append(Check("classified transitive and not mixing", ok, {"headline": v.headline()}))
    return out


def check_thm37(L: int, base: BaseSeq | None = None, probe_levels: int = 4) -> list[Check]:
    fam = M.thm37(base or DEFAULT_BASES["thm37"])
    out = []
    low = {}
    for n in range(L + 1):
        psi = psi_single(fam, n).value
        if psi < 1 - Fraction(1, 2**n + 1):
            low[n] = psi
    out.append(Check("psi_n >= 1 - 1/(2^n+1)", not low, {"violations": low, "psi_L": psi_single(fam, L).value}))
    r = transitive_witness(fam, Fraction(1, 3))
    out.append(
        Check(
            "transitive witness at eps = 1/3",
            r.accepted,
            {"set": r.set.describe(), "k": r.k, "measure": r.measure},
        )
    )
    eps = Fraction(1, 128)
    maxima, skipped = {}, []
    for l in range(min(L, probe_levels) + 1):
        p = nonmixing_probe(fam, l, eps)
        maxima.update({f"l={l},J={J}": v for J, v in p.maxima.items()})
        skipped += [f"l={l},J={J}" for J in p.skipped]
    top = max(maxima.values())
    out.append(
        Check(
            "nonmixing window maxima <= 127/128",
            top <= 1 - eps,
            {"max": top, "windows": len(maxima), "skipped": skipped},
        )
    )
    return out


def check_digit_overlap(L: int) -> list[Check]:
    worst = {l: dl_overlap_check(l, 2**l) for l in range(1, L + 1)}
    return [Check("max |(D_l + j) & D_l| = 1 for 1 <= j <= 2^l", all(v == 1 for v in worst.values()), {"per_level": worst})]


CHECKS = {
    "thm32": check_thm32,
    "ex33": lambda L, base=None: check_ex33(L),
    "thm36": check_thm36,
    "thm37": check_thm37,
    "lemma45": lambda L, base=None: check_digit_overlap(L),
}
