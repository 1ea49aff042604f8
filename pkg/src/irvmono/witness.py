"""Explicit before/after profiles that exhibit a monotonicity failure."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .conditions import downward_creatable
from .profile import (
    A,
    DEMOTE_B,
    PROMOTE_A,
    BallotProfile,
    NormalizedProfile,
    ShiftError,
    ShiftVector,
    TabulationTrace,
    TieError,
    apply_shift,
    tabulate,
)

UPWARD_CREATED = "upward"
DOWNWARD_CREATED = "downward"


class ConditionNotSatisfied(ValueError):
    pass


@dataclass(frozen=True)
class WitnessRecord:
    original: BallotProfile
    shift: ShiftVector
    modified: BallotProfile
    trace_before: TabulationTrace
    trace_after: TabulationTrace

    @property
    def direction(self) -> str:
        return UPWARD_CREATED if self.shift.direction.up else DOWNWARD_CREATED

    @classmethod
    def build(cls, original: BallotProfile, shift: ShiftVector) -> "WitnessRecord":
        modified = apply_shift(original, shift)
        return cls(original, shift, modified, tabulate(original), tabulate(modified))

    def reversed(self) -> "WitnessRecord":
        """The same pair read backwards: start from the modified profile and undo the shift."""
        return WitnessRecord(
            self.modified,
            self.shift.inverse(),
            self.original,
            self.trace_after,
            self.trace_before,
        )

    def relabel(self, perm: Sequence[int]) -> "WitnessRecord":
        return WitnessRecord.build(self.original.relabel(perm), self.shift.relabel(perm))


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reasons: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def verify_witness(w: WitnessRecord) -> Verdict:
    """Re-check a witness from raw counts, ignoring its cached traces.

    A shift that only raises X is an upward failure when X wins before and
    loses after; a shift that only lowers X is a downward failure when X
    loses before and wins after. Ties on either side are not a winner change.
    """
    reasons = []
    try:
        modified = apply_shift(w.original, w.shift)
    except ShiftError as exc:
        return Verdict(False, (f"illegal shift: {exc}",))
    if modified != w.modified:
        reasons.append("modified profile does not match the shift")
    if w.shift.total == 0:
        reasons.append("empty shift")
    try:
        before = tabulate(w.original).winner
        after = tabulate(modified).winner
    except TieError as exc:
        return Verdict(False, tuple(reasons) + (f"tied election: {exc}",))
    x = w.shift.direction.candidate
    if before == after:
        reasons.append("winner unchanged")
    elif w.shift.direction.up and before != x:
        reasons.append("promoted candidate did not win the original election")
    elif not w.shift.direction.up and after != x:
        reasons.append("demoted candidate does not win the modified election")
    return Verdict(not reasons, tuple(reasons))


def construct_downward_witness(np_: NormalizedProfile) -> WitnessRecord:
    """Move A - C + 1 voters from b2 (B>C>A) to c2 (C>B>A).

    That lifts C over A in round 1 while keeping B above A, so A goes out
    first and B takes A's second preferences.
    """
    report = downward_creatable(np_)
    if not report.holds:
        raise ConditionNotSatisfied(
            f"downward failure not creatable; margins {dict(report.margins)}"
        )
    p = np_.profile
    return WitnessRecord.build(p, ShiftVector.of(DEMOTE_B, b2c2=p.A - p.C + 1))


def search_upward_witness(np_: NormalizedProfile) -> Optional[WitnessRecord]:
    """Smallest verified A-promotion that makes A lose, or None."""
    from .oracle import creatable_bruteforce

    if tabulate(np_.profile).winner != A:
        raise ValueError("profile is not normalized")
    return creatable_bruteforce(np_.profile, PROMOTE_A)
