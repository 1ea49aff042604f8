"""Three-candidate ballot profiles, IRV tabulation, relabeling and preference shifts.

Candidates are the integers 0, 1, 2 (displayed as A, B, C). The six complete
rankings are indexed in lexicographic order, which is also the column order
a1, a2, b1, b2, c1, c2::

    a1 = A>B>C   a2 = A>C>B   b1 = B>A>C   b2 = B>C>A   c1 = C>A>B   c2 = C>B>A
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np

A, B, C = 0, 1, 2
CANDIDATES = ("A", "B", "C")
COLUMNS = ("a1", "a2", "b1", "b2", "c1", "c2")
RANKINGS: tuple[tuple[int, int, int], ...] = tuple(itertools.permutations(range(3)))
RANK_INDEX = {r: i for i, r in enumerate(RANKINGS)}


class TieError(ValueError):
    """Raised when IRV elimination or the final comparison is tied."""

    def __init__(self, round: int, tied: Sequence[int], tallies: Sequence[int]):
        self.round = round
        self.tied = tuple(tied)
        self.tallies = tuple(tallies)
        names = ", ".join(CANDIDATES[c] for c in self.tied)
        super().__init__(f"tie in round {round} between {names} at {self.tallies[0]}")


class ShiftError(ValueError):
    pass


class TiePolicy(enum.Enum):
    ERROR = "error"
    # eliminate the tied candidate that comes first in label order
    LEXICOGRAPHIC = "lexicographic"


# ---------------------------------------------------------------- rankings


def parse_ranking(text: str, candidates: Sequence[str] = CANDIDATES) -> int:
    """Parse ``"A>B>C"`` or ``"ABC"`` into a ranking index (0..5).

    Multi-character candidate names require the ``>`` separated form.
    """
    names = list(candidates)
    if len(names) != 3 or len(set(names)) != 3:
        raise ValueError(f"need exactly 3 distinct candidate names, got {names!r}")
    text = text.strip()
    if ">" in text:
        parts = [p.strip() for p in text.split(">")]
    elif all(len(n) == 1 for n in names):
        parts = list(text.replace(" ", ""))
    else:
        parts = [text]
    if len(parts) != 3 or any(not p for p in parts):
        raise ValueError(f"malformed ranking {text!r}")
    for p in parts:
        if p not in names:
            raise ValueError(f"unknown candidate {p!r} in ranking {text!r}")
    if len(set(parts)) != 3:
        raise ValueError(f"repeated candidate in ranking {text!r}")
    return RANK_INDEX[tuple(names.index(p) for p in parts)]


def format_ranking(index: int, candidates: Sequence[str] = CANDIDATES) -> str:
    return ">".join(candidates[c] for c in RANKINGS[index])


def _permute_column(perm: Sequence[int], index: int) -> int:
    return RANK_INDEX[tuple(perm[c] for c in RANKINGS[index])]


# ---------------------------------------------------------------- profiles


@dataclass(frozen=True)
class BallotProfile:
    """Voter counts for the six rankings, in column order a1..c2."""

    counts: tuple[int, int, int, int, int, int]

    def __post_init__(self):
        counts = tuple(self.counts)
        if len(counts) != 6:
            raise ValueError(f"a profile has 6 columns, got {len(counts)}")
        for name, n in zip(COLUMNS, counts):
            if isinstance(n, bool) or int(n) != n:
                raise TypeError(f"column {name} must be an integer, got {n!r}")
            if n < 0:
                raise ValueError(f"column {name} is negative ({n})")
        object.__setattr__(self, "counts", tuple(int(n) for n in counts))

    @classmethod
    def of(cls, *counts: int) -> "BallotProfile":
        return cls(tuple(counts))

    def __iter__(self) -> Iterator[int]:
        return iter(self.counts)

    def __getitem__(self, index: int) -> int:
        return self.counts[index]

    def __str__(self) -> str:
        return "(" + ", ".join(map(str, self.counts)) + ")"

    a1 = property(lambda self: self.counts[0])
    a2 = property(lambda self: self.counts[1])
    b1 = property(lambda self: self.counts[2])
    b2 = property(lambda self: self.counts[3])
    c1 = property(lambda self: self.counts[4])
    c2 = property(lambda self: self.counts[5])

    @property
    def first_round(self) -> tuple[int, int, int]:
        n = self.counts
        return (n[0] + n[1], n[2] + n[3], n[4] + n[5])

    @property
    def A(self) -> int:
        return self.counts[0] + self.counts[1]

    @property
    def B(self) -> int:
        return self.counts[2] + self.counts[3]

    @property
    def C(self) -> int:
        return self.counts[4] + self.counts[5]

    @property
    def V(self) -> int:
        return sum(self.counts)

    def transfer(self, x: int, y: int) -> int:
        """First-place votes of ``x`` once ``y`` is eliminated, e.g. C(B) = C + b2."""
        if x == y:
            raise ValueError("a candidate cannot receive its own transfer")
        gained = sum(
            n for r, n in zip(RANKINGS, self.counts) if r[0] == y and r[1] == x
        )
        return self.first_round[x] + gained

    def relabel(self, perm: Sequence[int]) -> "BallotProfile":
        """Rename candidate ``c`` to ``perm[c]``; every column moves with its ranking."""
        if sorted(perm) != [0, 1, 2]:
            raise ValueError(f"not a permutation of the candidates: {perm!r}")
        out = [0] * 6
        for i, n in enumerate(self.counts):
            out[_permute_column(perm, i)] = n
        return BallotProfile(tuple(out))


@dataclass(frozen=True)
class TallySheet:
    first_round: tuple[int, int, int]
    transfers: Mapping[tuple[int, int], int]

    def transfer(self, x: int, y: int) -> int:
        return self.transfers[(x, y)]


def tally(profile: BallotProfile) -> TallySheet:
    pairs = [(x, y) for x in range(3) for y in range(3) if x != y]
    return TallySheet(
        profile.first_round, {(x, y): profile.transfer(x, y) for x, y in pairs}
    )


# ---------------------------------------------------------------- tabulation


@dataclass(frozen=True)
class TabulationTrace:
    first_round: tuple[int, int, int]
    round1_order: tuple[int, int, int]
    eliminated_round1: int
    # (candidate, tally) for the two survivors, round-2 leader first
    round2_tallies: tuple[tuple[int, int], tuple[int, int]]
    winner: int
    had_tie: bool

    @property
    def eliminated_round2(self) -> int:
        return self.round2_tallies[1][0]

    @property
    def voters(self) -> int:
        return sum(self.first_round)

    def pattern(self) -> "PlayoutPattern":
        return PlayoutPattern(
            self.round1_order,
            (self.round2_tallies[0][0], self.round2_tallies[1][0]),
        )


def tabulate(
    profile: BallotProfile, policy: TiePolicy = TiePolicy.ERROR
) -> TabulationTrace:
    """Run a three-candidate instant runoff.

    The candidate with the fewest first-place votes is eliminated and its
    ballots move to their second choice; the larger survivor wins. Under
    ``TiePolicy.ERROR`` a tied minimum in round 1 or a tied final comparison
    raises :class:`TieError`. Ties at the top of round 1 do not affect the
    outcome and only order the trace by label.
    """
    votes = profile.first_round
    total = sum(votes)
    if total < 1:
        raise ValueError("cannot tabulate an empty profile")
    had_tie = False

    low = min(votes)
    lowest = [c for c in range(3) if votes[c] == low]
    if len(lowest) > 1:
        if policy is TiePolicy.ERROR:
            raise TieError(1, lowest, [low] * len(lowest))
        had_tie = True
    out = lowest[0]

    x, z = (c for c in range(3) if c != out)
    tx, tz = profile.transfer(x, out), profile.transfer(z, out)
    if tx == tz:
        if policy is TiePolicy.ERROR:
            raise TieError(2, (x, z), (tx, tz))
        had_tie = True
        # x precedes z in label order, so x is eliminated
        first, second = (z, tz), (x, tx)
    elif tx > tz:
        first, second = (x, tx), (z, tz)
    else:
        first, second = (z, tz), (x, tx)

    order = tuple(sorted(range(3), key=lambda c: (-votes[c], c)))
    if order[2] != out:
        # a lexicographic elimination can drop a candidate that sorts above its tie partner
        order = tuple(c for c in order if c != out) + (out,)
    return TabulationTrace(votes, order, out, (first, second), first[0], had_tie)


def winner(profile: BallotProfile, policy: TiePolicy = TiePolicy.ERROR) -> int:
    return tabulate(profile, policy).winner


# ---------------------------------------------------------------- playouts


@dataclass(frozen=True)
class PlayoutPattern:
    round1_order: tuple[int, int, int]
    # (winner, runner-up) after the round-1 elimination
    round2_order: tuple[int, int]

    @property
    def eliminated(self) -> tuple[int, int]:
        return (self.round1_order[2], self.round2_order[1])

    @property
    def winner(self) -> int:
        return self.round2_order[0]

    def render(self, candidates: Sequence[str] = CANDIDATES, primed: bool = False) -> str:
        """Arrow notation, e.g. ``BAC → A(C)B(C) → A(BC)``."""
        p = "'" if primed else ""
        # single letters run together as in "ABC"; longer names need a gap
        sep = "" if all(len(n) == 1 for n in candidates) else " "
        first = sep.join(candidates[c] + p for c in self.round1_order)
        out = candidates[self.round1_order[2]]
        w, l = self.round2_order
        second = f"{candidates[w]}({out}){p}{sep}{candidates[l]}({out}){p}"
        gone = sep.join(candidates[c] for c in sorted(self.eliminated))
        return f"{first} → {second} → {candidates[w]}({gone}){p}"

    def __str__(self) -> str:
        return self.render()


def playout_pattern(profile: BallotProfile) -> PlayoutPattern:
    return tabulate(profile).pattern()


# ---------------------------------------------------------------- normalization


@dataclass(frozen=True)
class NormalizedProfile:
    """A profile relabeled so that A wins and C is strictly last in round 1.

    ``permutation[c]`` is the new label of original candidate ``c``.
    """

    profile: BallotProfile
    permutation: tuple[int, int, int]

    @property
    def inverse(self) -> tuple[int, int, int]:
        inv = [0, 0, 0]
        for old, new in enumerate(self.permutation):
            inv[new] = old
        return tuple(inv)

    def original(self) -> BallotProfile:
        return self.profile.relabel(self.inverse)


def normalize(profile: BallotProfile) -> NormalizedProfile:
    trace = tabulate(profile)
    perm = [0, 0, 0]
    perm[trace.winner] = A
    perm[trace.eliminated_round1] = C
    perm[trace.eliminated_round2] = B
    perm = tuple(perm)
    return NormalizedProfile(profile.relabel(perm), perm)


# ---------------------------------------------------------------- shifts


@dataclass(frozen=True)
class Direction:
    """Which candidate's standing a shift changes, and which way."""

    candidate: int
    up: bool

    def __str__(self) -> str:
        return ("Promote" if self.up else "Demote") + CANDIDATES[self.candidate]

    def reverse(self) -> "Direction":
        return Direction(self.candidate, not self.up)

    def relabel(self, perm: Sequence[int]) -> "Direction":
        return Direction(perm[self.candidate], self.up)


DEMOTE_B = Direction(B, False)
PROMOTE_A = Direction(A, True)


def _generic_moves(direction: Direction) -> tuple[tuple[int, int], ...]:
    x = direction.candidate
    moves = []
    for src, r in enumerate(RANKINGS):
        pos = r.index(x)
        others = [c for c in r if c != x]
        targets = range(pos) if direction.up else range(pos + 1, 3)
        for new_pos in targets:
            dst = others[:new_pos] + [x] + others[new_pos:]
            moves.append((src, RANK_INDEX[tuple(dst)]))
    return tuple(sorted(moves))


def _named(*pairs: str) -> tuple[tuple[int, int], ...]:
    return tuple((COLUMNS.index(p[:2]), COLUMNS.index(p[2:])) for p in pairs)


_CANONICAL = {
    DEMOTE_B: _named("b1a1", "b1a2", "b2c1", "b2c2", "a1a2", "c2c1"),
    PROMOTE_A: _named("b1a1", "b2b1", "b2a1", "c1a2", "c2c1", "c2a2"),
}


def legal_moves(direction: Direction) -> tuple[tuple[int, int], ...]:
    """All single-voter column moves that only raise (or only lower) one candidate.

    A move shifts the candidate one or two places and keeps the relative
    order of the other two.
    """
    if direction in _CANONICAL:
        return _CANONICAL[direction]
    return _generic_moves(direction)


def move_name(move: tuple[int, int]) -> str:
    return COLUMNS[move[0]] + COLUMNS[move[1]]


@dataclass(frozen=True)
class ShiftVector:
    """Counts of voters moved along each legal move of ``direction``.

    ``counts`` is aligned with :func:`legal_moves` for the direction.
    """

    direction: Direction
    counts: tuple[int, ...]

    def __post_init__(self):
        counts = tuple(int(n) for n in self.counts)
        if len(counts) != len(legal_moves(self.direction)):
            raise ValueError(f"{self.direction} has {len(legal_moves(self.direction))} moves")
        if any(n < 0 for n in counts):
            raise ValueError("move counts must be non-negative")
        object.__setattr__(self, "counts", counts)

    @classmethod
    def of(cls, direction: Direction, **moves: int) -> "ShiftVector":
        """``ShiftVector.of(DEMOTE_B, b2c2=7)``."""
        names = [move_name(m) for m in legal_moves(direction)]
        for key in moves:
            if key not in names:
                raise ValueError(f"{key!r} is not a legal move for {direction}")
        return cls(direction, tuple(moves.get(n, 0) for n in names))

    @classmethod
    def zero(cls, direction: Direction) -> "ShiftVector":
        return cls(direction, (0,) * len(legal_moves(direction)))

    @property
    def moves(self) -> dict[tuple[int, int], int]:
        return dict(zip(legal_moves(self.direction), self.counts))

    @property
    def total(self) -> int:
        return sum(self.counts)

    def named(self) -> dict[str, int]:
        return {move_name(m): n for m, n in self.moves.items() if n}

    def column_deltas(self) -> tuple[int, ...]:
        """Net Δx = x - x' per column (positive when a column loses voters)."""
        delta = [0] * 6
        for (src, dst), n in self.moves.items():
            delta[src] += n
            delta[dst] -= n
        return tuple(delta)

    def inverse(self) -> "ShiftVector":
        """The moves that undo this shift, in the opposite direction."""
        rev = self.direction.reverse()
        back = {(dst, src): n for (src, dst), n in self.moves.items()}
        return ShiftVector(rev, tuple(back.get(m, 0) for m in legal_moves(rev)))

    def relabel(self, perm: Sequence[int]) -> "ShiftVector":
        d = self.direction.relabel(perm)
        mapped = {
            (_permute_column(perm, s), _permute_column(perm, t)): n
            for (s, t), n in self.moves.items()
        }
        return ShiftVector(d, tuple(mapped.get(m, 0) for m in legal_moves(d)))

    def __str__(self) -> str:
        body = ", ".join(f"m_{k}={v}" for k, v in self.named().items())
        return f"{self.direction}{{{body}}}"


def apply_shift(profile: BallotProfile, shift: ShiftVector) -> BallotProfile:
    out = list(profile.counts)
    used = [0] * 6
    for (src, dst), n in shift.moves.items():
        used[src] += n
    for i, n in enumerate(used):
        if n > profile.counts[i]:
            raise ShiftError(
                f"shift moves {n} voters out of column {COLUMNS[i]}, which has {profile.counts[i]}"
            )
    for (src, dst), n in shift.moves.items():
        out[src] -= n
        out[dst] += n
    return BallotProfile(tuple(out))


# ---------------------------------------------------------------- batches

# _SECOND[y, x]: column whose voters rank y first and x second
_SECOND = [[0] * 3 for _ in range(3)]
for (_x, _y, _z), _i in RANK_INDEX.items():
    _SECOND[_x][_y] = _i


def tabulate_block(counts):
    """Tabulate many profiles at once.

    ``counts`` is an (n, 6) integer array. Returns ``(winner, runner_up,
    eliminated, tied)`` arrays; ``tied`` marks a tied round-1 minimum or a
    tied final, following ``TiePolicy.ERROR``.
    """
    second = np.asarray(_SECOND)
    counts = np.asarray(counts, dtype=np.int64)
    rows = np.arange(counts.shape[0])
    first = counts[:, 0::2] + counts[:, 1::2]
    low = first.min(axis=1)
    tied = (first == low[:, None]).sum(axis=1) > 1
    out = first.argmin(axis=1)
    x = np.where(out == 0, 1, 0)
    z = np.where(out == 2, 1, 2)
    tx = first[rows, x] + counts[rows, second[out, x]]
    tz = first[rows, z] + counts[rows, second[out, z]]
    tied |= tx == tz
    lead = tx > tz
    return np.where(lead, x, z), np.where(lead, z, x), out, tied
