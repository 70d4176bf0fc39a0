import numpy as np
import pytest

from telecert.certify import (
    Adversary,
    AdversaryModel,
    Criterion,
    ThresholdSource,
    decide,
    self_threshold,
    threshold_table,
)
from telecert.protocols import InputFamily

TAB = AdversaryModel(Adversary.CHEATING_A, ThresholdSource.TABULATED)


def test_decide_examples():
    d = decide(0.51, AdversaryModel(Adversary.CHEATING_A), m=1)
    assert d.verdict == "issue" and d.certificate == 3

    d = decide(0.5, AdversaryModel(Adversary.CHEATING_A), m=1)
    assert d.verdict == "deny"  # boundary goes to the adversary

    d = decide(0.70, AdversaryModel(Adversary.CHEATING_B), m=1,
               family=InputFamily.BLOCH, criterion=Criterion.BLOCH_POSTSELECTED)
    assert d.verdict == "issue" and d.threshold == pytest.approx(2 / 3)

    d = decide(0.375, AdversaryModel(Adversary.CHEATING_AB), m=2,
               family=InputFamily.GHZ, criterion=Criterion.THETA_AVERAGE)
    assert d.verdict == "deny"  # equality is not strict exceedance


def test_honest_certificate_needs_strict_exceedance():
    # fidelity exactly 1 does not strictly exceed the honest threshold 1,
    # so the perfection certificate is never issued
    d = decide(1.0, AdversaryModel(Adversary.HONEST))
    assert d.certificate == 1 and d.verdict == "deny"


def test_honest_protocol_passes_every_cheating_model():
    for adversary in (Adversary.CHEATING_A, Adversary.CHEATING_B, Adversary.CHEATING_AB):
        for source in ThresholdSource:
            for criterion, family, m in [
                (Criterion.POINTWISE, InputFamily.BLOCH, 1),
                (Criterion.THETA_AVERAGE, InputFamily.GHZ, 2),
                (Criterion.BLOCH_POSTSELECTED, InputFamily.BLOCH, 1),
            ]:
                if criterion is Criterion.BLOCH_POSTSELECTED and adversary is Adversary.CHEATING_A:
                    continue
                d = decide(1.0, AdversaryModel(adversary, source), m=m,
                           family=family, criterion=criterion)
                assert d.verdict == "issue", (adversary, source, criterion)


def test_self_defeating_cheats_are_denied():
    for adversary in (Adversary.CHEATING_A, Adversary.CHEATING_B, Adversary.CHEATING_AB):
        model = AdversaryModel(adversary, ThresholdSource.COMPUTED)
        for criterion, family, m in [
            (Criterion.POINTWISE, InputFamily.GHZ, 2),
            (Criterion.THETA_AVERAGE, InputFamily.GHZ, 2),
            (Criterion.BLOCH_POSTSELECTED, InputFamily.BLOCH, 1),
        ]:
            if criterion is Criterion.BLOCH_POSTSELECTED and adversary is Adversary.CHEATING_A:
                continue
            own = self_threshold(adversary, criterion, m)
            d = decide(own, model, m=m, family=family, criterion=criterion)
            assert d.verdict == "deny", (adversary, criterion)


def test_decide_monotone_in_observed():
    rng = np.random.default_rng(2)
    for model in (AdversaryModel(Adversary.CHEATING_A), AdversaryModel(Adversary.CHEATING_B)):
        observations = np.sort(rng.uniform(0, 1, size=1000))
        verdicts = [decide(x, model, m=1).verdict for x in observations]
        first_issue = verdicts.index("issue") if "issue" in verdicts else len(verdicts)
        assert all(v == "deny" for v in verdicts[:first_issue])
        assert all(v == "issue" for v in verdicts[first_issue:])


def test_decide_validation():
    with pytest.raises(ValueError):
        decide(1.2, TAB)
    with pytest.raises(ValueError):
        decide(-0.1, TAB)
    with pytest.raises(ValueError):
        decide(0.5, TAB, family=InputFamily.BLOCH, criterion=Criterion.THETA_AVERAGE)
    with pytest.raises(ValueError):
        decide(0.5, TAB, family=InputFamily.BLOCH, criterion=Criterion.BLOCH_POSTSELECTED)
    with pytest.raises(ValueError):
        Adversary.parse("cheating_c")


def test_threshold_table_m1_bloch():
    rows = threshold_table(1, InputFamily.BLOCH)
    values = {(r["model"], r["criterion"], r["source"]): r["threshold"] for r in rows}
    assert values[("honest", "pointwise", "tabulated")] == 1.0
    assert values[("cheating_a", "pointwise", "tabulated")] == 0.5
    assert values[("cheating_b", "pointwise", "tabulated")] == 0.5
    assert values[("cheating_b", "bloch_postselected", "tabulated")] == pytest.approx(2 / 3)
    assert values[("cheating_b", "bloch_postselected", "computed")] == pytest.approx(2 / 3, abs=1e-9)
    assert all(r["provenance"] for r in rows)


def test_threshold_table_m2_ghz_averaged():
    rows = threshold_table(2, InputFamily.GHZ)
    values = {(r["model"], r["criterion"], r["source"]): r["threshold"] for r in rows}
    assert values[("cheating_a", "theta_average", "tabulated")] == pytest.approx(3 / 8)
    assert values[("cheating_b", "theta_average", "tabulated")] == pytest.approx(3 / 16)
    assert values[("cheating_ab", "theta_average", "tabulated")] == pytest.approx(3 / 8)
    # the computed B-cheat average is the enumerated optimum, above the tabulated constant
    assert values[("cheating_b", "theta_average", "computed")] == pytest.approx(3 / 8, abs=1e-9)
    assert values[("cheating_a", "theta_average", "computed")] == pytest.approx(3 / 8, abs=1e-9)
