"""Monotonicity-failure analysis for three-candidate instant-runoff elections."""

from .conditions import (
    ClassificationReport,
    ConditionReport,
    classify,
    downward_creatable,
    upward_creatable,
    upward_creatable_exact,
)
from .profile import (
    DEMOTE_B,
    PROMOTE_A,
    BallotProfile,
    Direction,
    NormalizedProfile,
    PlayoutPattern,
    ShiftError,
    ShiftVector,
    TabulationTrace,
    TieError,
    TiePolicy,
    apply_shift,
    normalize,
    parse_ranking,
    playout_pattern,
    tabulate,
)
from .witness import (
    ConditionNotSatisfied,
    WitnessRecord,
    construct_downward_witness,
    search_upward_witness,
    verify_witness,
)

__version__ = "0.1.0"
