"""Verdicts on transitivity and mixing of ``T_f``.

Limits cannot be read off a finite horizon, so the verdict keeps two kinds
of statements apart:

* certified: a declared asymptotic fact plus a known implication;
* evidence-leaning: a trend in the exact horizon data, never conclusive.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InconsistentDeclarations, SizeLimit
from .measures import MeasureFamily
from .shift_disjoint import block_size, psi_range


class Status(str, enum.Enum):
    CERTIFIED_YES = "certified-yes"
    CERTIFIED_NO = "certified-no"
    LEANING = "evidence-leaning"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Thresholds:
    """Horizon heuristics; they only ever produce evidence-leaning entries."""

    eta_gap: Fraction = Fraction(1, 100)
    psi_gap: Fraction = Fraction(1, 100)
    psi_sample_cap: int = 256
    block_sample_cap: int = 64


@dataclass(frozen=True)
class Rule:
    rule_id: str
    condition: str
    inputs: tuple[str, ...]
    conclusion: str


# rule_id -> (condition, conclusion)
RULES = {
    "eta-limit-mixing": ("lim eta_i = 1 (no bound on alpha needed)", "mixing"),
    "witness-family-mixing": ("explicit disjoint sets B_k for every eps and all large k", "mixing"),
    "psi-limsup-transitive": ("limsup psi_(i,j) = 1", "transitive"),
    "eta-limsup-transitive": ("limsup eta_i = 1, since eta_i <= psi_i", "transitive"),
    "mixing-implies-transitive": ("mixing", "transitive"),
    "rho-bounded-not-transitive": ("transitivity forces limsup rho_n = infinity", "not transitive"),
    "not-transitive-not-mixing": ("not transitive", "not mixing"),
    "mass-floor-not-mixing": (
        "two digits of mass >= v > 0 at infinitely many levels block every large set at shifts |a-b| beta_l",
        "not mixing",
    ),
    "defect-not-mixing": ("mixing forces lim (1 - eta_i)/alpha_i = 0", "not mixing"),
    "bounded-eta-not-mixing": ("for bounded alpha, mixing iff lim eta_i = 1", "not mixing"),
}


DERIVED_RULES = ("mixing-implies-transitive", "not-transitive-not-mixing")


def _rule(rule_id: str, *inputs: str) -> Rule:
    cond, concl = RULES[rule_id]
    return Rule(rule_id, cond, tuple(inputs), concl)


@dataclass
class EvidenceRow:
    i: int
    alpha: int
    eta: Fraction
    delta: Fraction
    defect: Fraction
    rho: Fraction
    psi: Fraction | None
    diamond: Fraction | None
    lambda0: Fraction


@dataclass
class EvidenceTable:
    rows: list[EvidenceRow]
    psi_blocks: dict[tuple[int, int], Fraction]
    omitted: list[tuple[int, int]]

    def column(self, name: str) -> list:
        return [getattr(r, name) for r in self.rows]


@dataclass
class Verdict:
    mixing: Status
    transitive: Status
    continuity: str
    rules_fired: list[Rule]
    evidence: EvidenceTable
    notes: list[str] = field(default_factory=list)

    def headline(self) -> str:
        t, m = self.transitive, self.mixing
        if self.continuity == "not-established":
            return "OPERATOR NOT ESTABLISHED CONTINUOUS"
        if m is Status.CERTIFIED_YES:
            head = "MIXING"
        elif t is Status.CERTIFIED_NO:
            head = "NOT TRANSITIVE"
        elif t is Status.CERTIFIED_YES and m is Status.CERTIFIED_NO:
            head = "TRANSITIVE, NOT MIXING"
        elif t is Status.CERTIFIED_YES:
            head = f"TRANSITIVE (mixing {m.value})"
        else:
            head = f"UNDECIDED (transitive {t.value}, mixing {m.value})"
        certified = [r for r in self.rules_fired if r.rule_id not in DERIVED_RULES]
        if not certified:
            return head
        why = "; ".join(f"{r.rule_id}: {', '.join(r.inputs)}" for r in certified)
        return f"{head} (certified: {why})"


def _psi_or_none(family, i, j, cap):
    if block_size(family, i, j) > cap:
        return None
    try:
        return psi_range(family, i, j, cap=cap).value
    except SizeLimit:
        return None


def evidence(family: MeasureFamily, L: int, thresholds: Thresholds = Thresholds()) -> EvidenceTable:
    """Exact per-coordinate table up to ``L`` plus sampled block maxima."""
    if L < 1:
        raise ValueError("horizon must be >= 1")
    cap = thresholds.psi_sample_cap
    rows, omitted, running = [], [], None
    diamond = {l: term for l, term, _ in family.diamond_terms(L)}
    for i in range(L + 1):
        e, d = family.eta_delta(i)
        if i >= 1:
            running = diamond[i] if running is None else min(running, diamond[i])
        psi = _psi_or_none(family, i, i, cap)
        if psi is None:
            omitted.append((i, i))
        rows.append(EvidenceRow(i, family.base.alpha(i), e, d, family.defect(i), family.rho(i), psi, running, family.lam(i, 0)))
    blocks = {}
    for j in range(1, L + 1):
        for i in range(j - 1, -1, -1):
            if block_size(family, i, j) > thresholds.block_sample_cap:
                break
            blocks[(i, j)] = _psi_or_none(family, i, j, cap)
    return EvidenceTable(rows, blocks, omitted)


def _declared(family: MeasureFamily, kind: str):
    d = family.declaration(kind)
    if d is None:
        return None
    tag = "" if d.verified else " (unverified)"
    return d, f"declared {d.text()} [{d.justification}]{tag}"


def _check_pairs(family: MeasureFamily) -> None:
    lim = family.declaration("lim_eta")
    sup = family.declaration("limsup_eta")
    if lim and sup and lim.value != sup.value:
        raise InconsistentDeclarations(f"lim eta = {lim.value} but limsup eta = {sup.value}")
    if family.declaration("rho_bounded") and family.declaration("rho_unbounded"):
        raise InconsistentDeclarations("rho_n declared both bounded and unbounded")
    defect = family.declaration("lim_defect")
    if lim and lim.value == 1 and defect and defect.value > 0:
        raise InconsistentDeclarations("lim eta = 1 forces lim (1 - eta_i)/alpha_i = 0")


def _continuity(family: MeasureFamily, L: int, table: EvidenceTable) -> tuple[str, str]:
    d = _declared(family, "diamond")
    if d is not None:
        return "declared", d[1]
    tail = [r.diamond for r in table.rows if r.diamond is not None and r.i >= (3 * L) // 4]
    if tail and tail[-1] < tail[0]:
        return "not-established", f"running continuity infimum still falling at the horizon ({tail[0]} -> {tail[-1]})"
    return "horizon-evidence", f"running continuity infimum {table.rows[-1].diamond} > 0 and stable over the last quarter of the horizon"


def classify(family: MeasureFamily, L: int, thresholds: Thresholds = Thresholds()) -> Verdict:
    """Verdict from declarations (certified) and horizon trends (evidence-leaning)."""
    _check_pairs(family)
    table = evidence(family, L, thresholds)
    continuity, cont_note = _continuity(family, L, table)
    notes = [cont_note] + consistency_check(family, L)
    if continuity == "not-established":
        return Verdict(Status.UNKNOWN, Status.UNKNOWN, continuity, [], table, notes)

    yes_t, no_t, yes_m, no_m = [], [], [], []
    lim = _declared(family, "lim_eta")
    sup = _declared(family, "limsup_eta")
    if lim and lim[0].value == 1:
        yes_m.append(_rule("eta-limit-mixing", lim[1]))
    w = _declared(family, "mixing_witnesses")
    if w:
        yes_m.append(_rule("witness-family-mixing", w[1]))
    psi = _declared(family, "limsup_psi")
    if psi and psi[0].value == 1:
        yes_t.append(_rule("psi-limsup-transitive", psi[1]))
    if sup and sup[0].value == 1:
        yes_t.append(_rule("eta-limsup-transitive", sup[1]))
    rb = _declared(family, "rho_bounded")
    if rb:
        no_t.append(_rule("rho-bounded-not-transitive", rb[1]))
    floor = _declared(family, "mass_floor")
    if floor and floor[0].value > 0:
        no_m.append(_rule("mass-floor-not-mixing", floor[1]))
    defect = _declared(family, "lim_defect")
    if defect and defect[0].value > 0:
        no_m.append(_rule("defect-not-mixing", defect[1]))
    bounded = _declared(family, "alpha_bounded")
    bounded_text = bounded[1] if bounded else ("alpha bounded by the base rule" if family.base.is_bounded() else None)
    if bounded_text:
        for d in (lim, sup):
            if d and d[0].value < 1:
                no_m.append(_rule("bounded-eta-not-mixing", d[1], bounded_text))
    if yes_m:
        yes_t.append(_rule("mixing-implies-transitive", yes_m[0].rule_id))
    if no_t:
        no_m.append(_rule("not-transitive-not-mixing", no_t[0].rule_id))
    if yes_t and no_t:
        raise InconsistentDeclarations(
            f"{yes_t[0].rule_id} gives transitive but {no_t[0].rule_id} gives not transitive"
        )
    if yes_m and no_m:
        raise InconsistentDeclarations(f"{yes_m[0].rule_id} gives mixing but {no_m[0].rule_id} gives not mixing")

    def status(yes, no):
        if yes:
            return Status.CERTIFIED_YES, yes
        if no:
            return Status.CERTIFIED_NO, no
        return Status.UNKNOWN, []

    t_status, t_rules = status(yes_t, no_t)
    m_status, m_rules = status(yes_m, no_m)
    rules = t_rules + [r for r in m_rules if r not in t_rules]

    # horizon trends, never conclusive
    start = (3 * L) // 4
    tail_eta = [r.eta for r in table.rows if r.i >= start]
    mixing_lean = all(e >= 1 - thresholds.eta_gap for e in tail_eta)
    psis = [r.psi for r in table.rows if r.psi is not None] + [v for v in table.psi_blocks.values() if v is not None]
    transitive_lean = mixing_lean or any(v >= 1 - thresholds.psi_gap for v in psis)
    if m_status is Status.UNKNOWN and mixing_lean:
        m_status = Status.LEANING
        notes.append(f"mixing-leaning: eta_i >= 1 - {thresholds.eta_gap} for {start} <= i <= {L} (non-conclusive)")
    if t_status is Status.UNKNOWN and transitive_lean:
        t_status = Status.LEANING
        notes.append(f"transitive-leaning: a sampled psi is within {thresholds.psi_gap} of 1 (non-conclusive)")
    return Verdict(m_status, t_status, continuity, rules, table, notes)


def consistency_check(family: MeasureFamily, L: int) -> list[str]:
    """Declarations contradicted by exact horizon data. Never upgrades anything."""
    warnings = []
    half = L // 2
    eta = [family.eta(i) for i in range(L + 1)]

    def approaching(values, v):
        return abs(values[-1] - v) < abs(values[half] - v)

    for d in family.declared:
        if d.kind == "lim_eta" and not approaching(eta, d.value):
            warnings.append(f"declared lim eta_i = {d.value} but eta_{L} = {eta[L]} is not closer to it than eta_{half} = {eta[half]}")
        elif d.kind == "limsup_eta":
            late, early = max(eta[half:]), max(eta[: half + 1])
            if abs(late - d.value) > abs(early - d.value):
                warnings.append(f"declared limsup eta_i = {d.value} but max eta over the second half ({late}) moved away from it")
        elif d.kind == "lim_defect":
            defects = [family.defect(i) for i in range(L + 1)]
            if defects[-1] != d.value and not approaching(defects, d.value):
                warnings.append(f"declared lim (1 - eta_i)/alpha_i = {d.value} not supported by the horizon")
        elif d.kind == "rho_bounded" and family.rho(L) > family.rho(half):
            warnings.append(f"declared rho_n bounded but rho_{L} = {family.rho(L)} > rho_{half} = {family.rho(half)}")
        elif d.kind == "rho_unbounded" and family.rho(L) == family.rho(half):
            warnings.append(f"declared rho_n unbounded but rho_n is constant from {half} to {L}")
        elif d.kind == "mass_floor":
            hits = [i for i in range(half, L + 1) if _two_point_min(family, i) >= d.value]
            if not hits:
                warnings.append(f"declared two-digit mass floor {d.value} but no coordinate in [{half}..{L}] reaches it")
        elif d.kind == "diamond" and d.value is not None:
            got = family.diamond_inf(max(L, 1))[0]
            if got < d.value:
                warnings.append(f"declared continuity bound {d.value} but the horizon minimum is {got}")
        elif d.kind == "alpha_bounded" and not family.base.is_bounded():
            warnings.append("declared alpha bounded but the base rule is unbounded")
    return warnings


def _two_point_min(family: MeasureFamily, i: int) -> Fraction:
    c = family.coord(i)
    a = c.argmax()
    return min(c[a], c[c.argmax_excluding(a)])
