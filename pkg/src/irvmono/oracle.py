"""Brute-force ground truth for creatable monotonicity failures.

Witness search never consults the closed-form conditions: creatability is
decided by trying every legal preference shift and re-running the election.
The conditions are imported only to be compared against that verdict.
"""

from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np

from .conditions import downward_creatable, upward_creatable, upward_creatable_exact
from .profile import (
    DEMOTE_B,
    PROMOTE_A,
    BallotProfile,
    Direction,
    ShiftVector,
    TieError,
    legal_moves,
    normalize,
    tabulate,
    tabulate_block,
)
from .witness import WitnessRecord, verify_witness


def _bounded_compositions(total, caps, sources, room):
    """Tuples with sum ``total`` in lexicographic order, honouring shared source capacity."""
    if len(caps) == 1:
        if total <= room[sources[0]]:
            yield (total,)
        return
    src = sources[0]
    top = min(total, room[src])
    for n in range(top + 1):
        room[src] -= n
        for rest in _bounded_compositions(total - n, caps[1:], sources[1:], room):
            yield (n,) + rest
        room[src] += n


def enumerate_shifts(profile: BallotProfile, direction: Direction) -> Iterator[ShiftVector]:
    """Every capacity-respecting shift, by total voters moved then lexicographically.

    Includes the all-zero shift.
    """
    moves = legal_moves(direction)
    sources = [src for src, _ in moves]
    room = list(profile.counts)
    caps = [room[s] for s in sources]
    most = sum(room[s] for s in set(sources))
    for total in range(most + 1):
        for counts in _bounded_compositions(total, caps, sources, room):
            yield ShiftVector(direction, counts)


def shift_space_size(profile: BallotProfile, direction: Direction) -> int:
    """Closed-form count of :func:`enumerate_shifts`: per source column, C(n + k, k)."""
    per_source: dict[int, int] = {}
    for src, _ in legal_moves(direction):
        per_source[src] = per_source.get(src, 0) + 1
    return math.prod(math.comb(profile.counts[s] + k, k) for s, k in per_source.items())


@lru_cache(maxsize=None)
def _capped_tuples(capacity: int, k: int) -> np.ndarray:
    """All non-negative k-tuples with sum <= capacity, as an (m, k) array."""
    rows = [t for t in itertools.product(range(capacity + 1), repeat=k) if sum(t) <= capacity]
    return np.array(rows, dtype=np.int64).reshape(len(rows), k)


def _move_groups(direction: Direction) -> dict[int, list[int]]:
    groups: dict[int, list[int]] = {}
    for j, (src, _) in enumerate(legal_moves(direction)):
        groups.setdefault(src, []).append(j)
    return groups


def _product(parts, width) -> np.ndarray:
    out = np.zeros((1, width), dtype=np.int64)
    for cols, block in parts:
        n, m = out.shape[0], block.shape[0]
        out = np.repeat(out, m, axis=0)
        out[:, cols] = np.tile(block, (n, 1))
    return out


def shift_matrix(profile: BallotProfile, direction: Direction) -> np.ndarray:
    """The same set as :func:`enumerate_shifts`, unordered, as an (S, moves) array."""
    return np.concatenate(list(shift_chunks(profile, direction, limit=None)))


def shift_chunks(profile: BallotProfile, direction: Direction, limit=None) -> Iterator[np.ndarray]:
    """:func:`shift_matrix` split into pieces of at most ``limit`` rows where possible.

    Source columns are peeled off one row at a time, largest first, until
    what remains fits under ``limit``.
    """
    width = len(legal_moves(direction))
    parts = sorted(
        ((cols, _capped_tuples(profile.counts[src], len(cols))) for src, cols in _move_groups(direction).items()),
        key=lambda part: -part[1].shape[0],
    )

    def walk(fixed, rest):
        size = math.prod(block.shape[0] for _, block in rest)
        if limit is None or size <= limit or not rest:
            tail = _product(rest, width)
            for cols, row in fixed:
                tail[:, cols] = row
            yield tail
            return
        (cols, block), rest = rest[0], rest[1:]
        for row in block:
            yield from walk(fixed + [(cols, row)], rest)

    yield from walk([], parts)


# rows per array handed to the vectorized tabulator
VECTOR_LIMIT = 250_000


def _winner_or_none(counts) -> Optional[int]:
    try:
        return tabulate(BallotProfile(counts)).winner
    except TieError:
        return None


def _is_failure(direction: Direction, before: int, after: Optional[int]) -> bool:
    if after is None or after == before:
        return False
    x = direction.candidate
    return before == x if direction.up else after == x


def _first_failure_scan(profile, direction, before) -> Optional[ShiftVector]:
    moves = legal_moves(direction)
    base = profile.counts
    for shift in enumerate_shifts(profile, direction):
        counts = list(base)
        for (src, dst), n in zip(moves, shift.counts):
            counts[src] -= n
            counts[dst] += n
        if _is_failure(direction, before, _winner_or_none(counts)):
            return shift
    return None


def _first_failure_block(profile, direction, before) -> Optional[ShiftVector]:
    moves = legal_moves(direction)
    effect = np.zeros((len(moves), 6), dtype=np.int64)
    for j, (src, dst) in enumerate(moves):
        effect[j, src] -= 1
        effect[j, dst] += 1
    base = np.asarray(profile.counts, dtype=np.int64)
    x = direction.candidate
    best = None
    for shifts in shift_chunks(profile, direction, VECTOR_LIMIT):
        won, _, _, tied = tabulate_block(base + shifts @ effect)
        # the caller guarantees before == x for promotions and before != x for demotions
        hits = shifts[~tied & ((won != x) if direction.up else (won == x))]
        if not len(hits):
            continue
        keys = tuple(hits[:, j] for j in reversed(range(hits.shape[1]))) + (hits.sum(axis=1),)
        row = hits[np.lexsort(keys)[0]]
        cand = (int(row.sum()), tuple(int(n) for n in row))
        if best is None or cand < best:
            best = cand
    return None if best is None else ShiftVector(direction, best[1])


def creatable_bruteforce(
    profile: BallotProfile, direction: Direction, method: str = "auto"
) -> Optional[WitnessRecord]:
    """First shift (fewest voters moved, then lexicographic) that creates a failure.

    Modified profiles that tie are skipped. Returns None when no legal shift
    works. Raises TieError when ``profile`` itself is tied.

    ``method`` is ``"scan"`` (walk :func:`enumerate_shifts` in order and stop
    at the first hit) or ``"block"`` (tabulate the shift space in numpy
    chunks and keep the smallest hit). Both return the same witness;
    ``"auto"`` is ``"block"``.
    """
    before = tabulate(profile).winner
    x = direction.candidate
    # nothing to break: an upward failure needs X winning, a downward one X losing
    if direction.up != (before == x):
        return None
    if method in ("block", "auto"):
        shift = _first_failure_block(profile, direction, before)
    elif method == "scan":
        shift = _first_failure_scan(profile, direction, before)
    else:
        raise ValueError(f"unknown method {method!r}")
    if shift is None:
        return None
    w = WitnessRecord.build(profile, shift)
    if not verify_witness(w):
        raise AssertionError(f"oracle produced an unverifiable witness {w}")
    return w


def enumerate_profiles(voters: int) -> Iterator[BallotProfile]:
    """All compositions of ``voters`` into six ordered parts (stars and bars)."""
    if voters < 0:
        raise ValueError("voters must be non-negative")
    slots = voters + 5
    for bars in itertools.combinations(range(slots), 5):
        edges = (-1,) + bars + (slots,)
        yield BallotProfile(tuple(edges[i + 1] - edges[i] - 1 for i in range(6)))


def count_profiles(voters: int) -> int:
    return math.comb(voters + 5, 5)


# ---------------------------------------------------------------- verification

FORMULAS = {
    "downward": (DEMOTE_B, downward_creatable),
    "upward": (PROMOTE_A, upward_creatable),
    "upward-exact": (PROMOTE_A, upward_creatable_exact),
}


@dataclass(frozen=True)
class Mismatch:
    profile: BallotProfile
    direction: str
    formula_verdict: bool
    oracle_verdict: bool

    def as_dict(self) -> dict:
        return {
            "profile": list(self.profile.counts),
            "direction": self.direction,
            "formula_verdict": self.formula_verdict,
            "oracle_verdict": self.oracle_verdict,
        }


@dataclass(frozen=True)
class MismatchReport:
    max_voters: int
    direction: str
    checked_profiles: int
    skipped_ties: int
    creatable: int
    mismatches: tuple[Mismatch, ...] = field(default_factory=tuple)
    elapsed: float = field(default=0.0, compare=False)
    min_voters: int = 1

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def as_dict(self) -> dict:
        return {
            "min_voters": self.min_voters,
            "max_voters": self.max_voters,
            "direction": self.direction,
            "checked_profiles": self.checked_profiles,
            "skipped_ties": self.skipped_ties,
            "creatable": self.creatable,
            "mismatches": [m.as_dict() for m in self.mismatches],
            "elapsed_seconds": round(self.elapsed, 3),
        }


def _check_voters(args) -> tuple[int, int, int, list[Mismatch]]:
    voters, direction = args
    shift_dir, formula = FORMULAS[direction]
    checked = ties = creatable = 0
    bad = []
    for p in enumerate_profiles(voters):
        try:
            np_ = normalize(p)
        except TieError:
            ties += 1
            continue
        checked += 1
        predicted = formula(np_).holds
        found = creatable_bruteforce(np_.profile, shift_dir) is not None
        creatable += found
        if predicted != found:
            bad.append(Mismatch(p, direction, predicted, found))
    return checked, ties, creatable, bad


def exhaustive_verify(
    max_voters: int, direction: str = "downward", workers: int = 1, min_voters: int = 1
) -> MismatchReport:
    """Compare a closed-form condition with brute force on every profile with V <= max_voters.

    ``direction`` is ``"downward"``, ``"upward"`` or ``"upward-exact"``.
    Profiles that tie (and so cannot be normalized) are counted, not checked.
    """
    if max_voters < 1:
        raise ValueError("max_voters must be at least 1")
    if direction not in FORMULAS:
        raise ValueError(f"unknown direction {direction!r}")
    start = time.perf_counter()
    jobs = [(v, direction) for v in range(max(1, min_voters), max_voters + 1)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_check_voters, jobs))
    else:
        parts = [_check_voters(j) for j in jobs]
    mismatches = sorted(
        (m for part in parts for m in part[3]),
        key=lambda m: (m.profile.V, m.profile.counts),
    )
    return MismatchReport(
        max_voters,
        direction,
        sum(p[0] for p in parts),
        sum(p[1] for p in parts),
        sum(p[2] for p in parts),
        tuple(mismatches),
        time.perf_counter() - start,
        max(1, min_voters),
    )
