import pytest
from hypothesis import given, settings

from irvmono.profile import (
    A,
    B,
    DEMOTE_B,
    PROMOTE_A,
    BallotProfile,
    ShiftVector,
    normalize,
    tabulate,
)
from irvmono.witness import (
    ConditionNotSatisfied,
    WitnessRecord,
    construct_downward_witness,
    search_upward_witness,
    verify_witness,
)

from conftest import UPWARD_BEFORE, UPWARD_AFTER, DOWNWARD_BEFORE, downward_profiles


def test_downward_example_witness():
    w = construct_downward_witness(normalize(DOWNWARD_BEFORE))
    assert w.shift.named() == {"b2c2": 6}
    assert w.modified == BallotProfile.of(25, 5, 25, 14, 25, 6)
    assert w.trace_before.winner == A
    assert w.trace_after.winner == B
    assert w.trace_after.round2_tallies == ((B, 64), (2, 36))
    assert verify_witness(w)
    assert w.direction == "downward"


def test_construct_refuses_when_condition_fails():
    with pytest.raises(ConditionNotSatisfied):
        construct_downward_witness(normalize(UPWARD_BEFORE))


def test_upward_example_to_3_is_a_verified_upward_failure():
    w = WitnessRecord.build(UPWARD_BEFORE, ShiftVector.of(PROMOTE_A, b1a1=7))
    assert w.modified == UPWARD_AFTER
    assert verify_witness(w)
    assert w.direction == "upward"


def test_search_upward_on_upward_example():
    w = search_upward_witness(normalize(UPWARD_BEFORE))
    assert w.shift.named() == {"b2a1": 3}
    assert verify_witness(w)


def test_verifier_rejects_bad_witnesses():
    good = construct_downward_witness(normalize(DOWNWARD_BEFORE))
    stale = WitnessRecord(good.original, good.shift, DOWNWARD_BEFORE, good.trace_before, good.trace_after)
    assert "modified profile does not match the shift" in verify_witness(stale).reasons

    empty = WitnessRecord.build(DOWNWARD_BEFORE, ShiftVector.zero(DEMOTE_B))
    v = verify_witness(empty)
    assert not v
    assert "empty shift" in v.reasons and "winner unchanged" in v.reasons

    small = WitnessRecord.build(DOWNWARD_BEFORE, ShiftVector.of(DEMOTE_B, b2c2=1))
    assert verify_witness(small).reasons == ("winner unchanged",)

    over = WitnessRecord(DOWNWARD_BEFORE, ShiftVector.of(DEMOTE_B, b1a1=99), DOWNWARD_BEFORE, good.trace_before, good.trace_before)
    assert verify_witness(over).reasons[0].startswith("illegal shift")


def test_verifier_rejects_tie_after_shift():
    # b2c2 = 5 leaves A and C level at 30 in round 1
    shift = ShiftVector.of(DEMOTE_B, b2c2=5)
    before = tabulate(DOWNWARD_BEFORE)
    tied = WitnessRecord(DOWNWARD_BEFORE, shift, BallotProfile.of(25, 5, 25, 15, 25, 5), before, before)
    v = verify_witness(tied)
    assert not v and v.reasons[-1].startswith("tied election")


@settings(max_examples=300)
@given(downward_profiles())
def test_constructed_witnesses_always_verify(p):
    np_ = normalize(p)
    w = construct_downward_witness(np_)
    assert verify_witness(w)
    assert w.shift.total == np_.profile.A - np_.profile.C + 1


@given(downward_profiles())
def test_reversed_witness_is_a_valid_upward_failure(p):
    np_ = normalize(p)
    back = construct_downward_witness(np_).reversed()
    assert back.shift.direction.up and back.shift.direction.candidate == B
    assert verify_witness(back)
    assert back.reversed() == construct_downward_witness(np_)


@given(downward_profiles())
def test_witness_survives_relabeling_to_original_names(p):
    np_ = normalize(p)
    w = construct_downward_witness(np_).relabel(np_.inverse)
    assert w.original == p
    assert verify_witness(w)
