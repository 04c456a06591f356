from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from odolin import measures as M
from odolin.classifier import Status, Thresholds, classify, consistency_check, evidence
from odolin.errors import InconsistentDeclarations
from odolin.measures import Declaration
from odolin.odometer import BaseSeq
from strategies import families

B2, B4 = BaseSeq.constant(2), BaseSeq.constant(4)
ALT = BaseSeq.explicit([], period=[2, 3])


def test_evidence_examples():
    t = evidence(M.uniform(B2), 4)
    assert t.column("eta") == [F(1, 2)] * 5
    assert t.column("rho") == [1] * 5
    assert t.column("psi") == [F(1, 2)] * 5
    assert evidence(M.thm32(B2), 3).column("eta") == [F(2, 3), F(4, 5), F(8, 9), F(16, 17)]
    assert evidence(M.ex33(), 2).column("eta") == [F(3, 4), F(7, 16), F(5, 16)]


def test_evidence_flags_omitted_psi():
    t = evidence(M.ex33(), 8, Thresholds(psi_sample_cap=64))
    assert [i for i, _ in t.omitted] == [5, 6, 7, 8]
    assert t.rows[5].psi is None and t.rows[4].psi is not None


def test_classify_uniform():
    v = classify(M.uniform(BaseSeq.explicit([2, 5, 3])), 10)
    assert v.transitive is Status.CERTIFIED_NO and v.mixing is Status.CERTIFIED_NO
    assert v.headline().startswith("NOT TRANSITIVE")
    assert "rho-bounded-not-transitive" in [r.rule_id for r in v.rules_fired]


def test_classify_thm32():
    v = classify(M.thm32(B2), 12)
    assert v.mixing is Status.CERTIFIED_YES and v.transitive is Status.CERTIFIED_YES
    assert v.headline().startswith("MIXING (certified: eta-limit-mixing: declared lim eta_i = 1")


def test_classify_thm37():
    v = classify(M.thm37(B4), 8)
    assert v.transitive is Status.CERTIFIED_YES and v.mixing is Status.CERTIFIED_NO
    assert v.headline().startswith("TRANSITIVE, NOT MIXING")


def test_classify_thm36():
    v = classify(M.thm36(ALT), 20)
    assert (v.transitive, v.mixing) == (Status.CERTIFIED_YES, Status.CERTIFIED_NO)


def test_classify_ex33_mixing_by_witnesses():
    v = classify(M.ex33(), 10)
    assert v.mixing is Status.CERTIFIED_YES


def test_every_certified_entry_cites_a_declaration():
    for fam in (M.uniform(B2), M.thm32(B2), M.thm37(B4), M.thm36(ALT), M.ex33()):
        v = classify(fam, 8)
        direct = [r for r in v.rules_fired if not r.rule_id.endswith(("implies-transitive", "not-transitive-not-mixing"))]
        assert direct and all(any(i.startswith("declared") for i in r.inputs) for r in direct)


def test_inconsistent_declarations():
    base = M.uniform(B2)
    with pytest.raises(InconsistentDeclarations):
        classify(base.with_declarations([Declaration("lim_eta", 1)]), 5)
    t37 = M.thm37(B4).with_declarations([Declaration("lim_eta", 1)])
    with pytest.raises(InconsistentDeclarations):
        classify(t37, 5)
    both = M.custom(B2, [[F(1, 3), F(2, 3)]], [Declaration("lim_eta", 1), Declaration("limsup_eta", F(1, 2))])
    with pytest.raises(InconsistentDeclarations):
        classify(both, 5)


def test_custom_without_declarations_is_undecided():
    fam = M.custom(B2, [[F(1, 3), F(2, 3)]])
    v = classify(fam, 8)
    assert v.mixing is Status.UNKNOWN and v.transitive is Status.UNKNOWN
    assert v.rules_fired == []


def test_horizon_trends_only_lean():
    # eta close to 1 at the end of the horizon, but nothing declared
    masses = [[1 - F(1, 1000), F(1, 1000)]]
    fam = M.custom(B2, masses)
    v = classify(fam, 8)
    assert v.mixing is Status.LEANING and v.transitive is Status.LEANING
    strict = classify(fam, 8, Thresholds(eta_gap=F(1, 10**6), psi_gap=F(1, 10**6)))
    assert strict.mixing is Status.UNKNOWN


def test_consistency_examples():
    assert consistency_check(M.thm32(B2), 20) == []
    fake = M.custom(B2, [[F(1, 2), F(1, 2)]], [Declaration("lim_eta", 1)])
    assert any("lim eta" in w for w in consistency_check(fake, 20))
    ex = M.ex33().with_declarations([Declaration("lim_eta", 0)])
    assert consistency_check(ex, 20) == []


def test_consistency_rho():
    fake = M.thm32(B2).with_declarations([Declaration("rho_bounded")])
    assert any("rho" in w for w in consistency_check(fake, 10))


@settings(max_examples=25)
@given(families(max_radix=3), st.integers(2, 8))
def test_determinism_and_soundness(fam, L):
    try:
        a = classify(fam, L)
    except InconsistentDeclarations:
        return
    b = classify(fam, L)
    assert (a.mixing, a.transitive, a.rules_fired, a.headline()) == (b.mixing, b.transitive, b.rules_fired, b.headline())
    if a.mixing is Status.CERTIFIED_YES:
        assert a.transitive is not Status.CERTIFIED_NO
    if a.transitive is Status.CERTIFIED_NO:
        assert a.mixing is not Status.CERTIFIED_YES


@given(st.integers(2, 7), st.integers(1, 30))
def test_uniform_not_transitive_for_every_horizon(alpha, L):
    fam = M.uniform(BaseSeq.constant(alpha))
    assert fam.rho(L) == 1
    assert classify(fam, L, Thresholds(psi_sample_cap=8, block_sample_cap=8)).transitive is Status.CERTIFIED_NO
