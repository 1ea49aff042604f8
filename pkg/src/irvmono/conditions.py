"""Closed-form tests for creatable monotonicity failures in the normalized frame.

All inequalities are strict and evaluated in half-vote units (every quantity
doubled) so that V/2 and the parity correction stay integral. An inequality
holds when its margin is at least 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .profile import BallotProfile, NormalizedProfile, normalize

UPWARD = "upward"
DOWNWARD = "downward"
UNITS = "half-votes"


@dataclass(frozen=True)
class ConditionReport:
    direction: str
    holds: bool
    margins: Mapping[str, int] = field(default_factory=dict)
    units: str = UNITS

    def __bool__(self) -> bool:
        return self.holds

    def as_dict(self) -> dict:
        return {
            "direction": self.direction,
            "holds": self.holds,
            "units": self.units,
            "margins": dict(self.margins),
        }


def _report(direction: str, margins: dict[str, int]) -> ConditionReport:
    return ConditionReport(direction, all(m >= 1 for m in margins.values()), margins)


def parity_correction(voters: int) -> int:
    """Twice the parity term: 1 for odd electorates, 2 for even ones."""
    return 1 if voters % 2 else 2


def upward_creatable(np_: NormalizedProfile) -> ConditionReport:
    """Raising A can cost A the election iff C + b2 > V/2 and C > V/4."""
    p = np_.profile
    V = p.V
    return _report(
        UPWARD,
        {
            "c_plus_b2_over_half": 2 * (p.C + p.b2) - V,
            "c_over_quarter": 4 * p.C - V,
        },
    )


def upward_creatable_exact(np_: NormalizedProfile) -> ConditionReport:
    """Integer-exact version of :func:`upward_creatable`.

    B must drop strictly below C while C keeps a strict majority once B's
    ballots transfer, i.e. some whole number z of remaining b2 voters with
    V/2 - C < z < C and z <= b2. The quarter test above is its continuum
    limit and admits profiles with V % 4 in (2, 3) and C = V // 4 + 1 where
    no such z exists.
    """
    p = np_.profile
    V = p.V
    half = V // 2
    return _report(
        UPWARD,
        {
            "c_plus_b2_over_half": 2 * (p.C + p.b2) - V,
            "c_room_below": 2 * (2 * p.C - half - 1),
        },
    )


def downward_creatable(np_: NormalizedProfile) -> ConditionReport:
    """Lowering B can hand B the election iff A - C < min(b2, B - A - 1, B + a1 - V/2 - δ)."""
    p = np_.profile
    V = p.V
    gap = 2 * (p.A - p.C)
    return _report(
        DOWNWARD,
        {
            "b2": 2 * p.b2 - gap,
            "b_minus_a": 2 * (p.B - p.A - 1) - gap,
            "b_after_a": 2 * (p.B + p.a1) - V - parity_correction(V) - gap,
        },
    )


@dataclass(frozen=True)
class ClassificationReport:
    normalized: NormalizedProfile
    upward: ConditionReport
    downward: ConditionReport

    @property
    def upward_creatable(self) -> bool:
        return self.upward.holds

    @property
    def downward_creatable(self) -> bool:
        return self.downward.holds

    # creating one kind of failure from P is the same event as the other kind
    # having produced P, read backwards
    @property
    def downward_has_happened_possible(self) -> bool:
        return self.upward.holds

    @property
    def upward_has_happened_possible(self) -> bool:
        return self.downward.holds

    @property
    def any_failure_possible(self) -> bool:
        return self.upward.holds or self.downward.holds

    def flags(self) -> dict[str, bool]:
        return {
            "upward_creatable": self.upward_creatable,
            "downward_creatable": self.downward_creatable,
            "upward_has_happened_possible": self.upward_has_happened_possible,
            "downward_has_happened_possible": self.downward_has_happened_possible,
            "any_failure_possible": self.any_failure_possible,
        }


def classify(profile: BallotProfile, exact_upward: bool = False) -> ClassificationReport:
    """Normalize once and evaluate both directions in that frame.

    Raises :class:`~irvmono.profile.TieError` for tied profiles.
    """
    np_ = normalize(profile)
    up = upward_creatable_exact(np_) if exact_upward else upward_creatable(np_)
    return ClassificationReport(np_, up, downward_creatable(np_))
