"""Frequency of failure-susceptible profiles under random ballot cultures."""

from __future__ import annotations

import enum
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from statistics import NormalDist

import numpy as np

from .oracle import enumerate_profiles
from .conditions import classify
from .profile import RANK_INDEX, BallotProfile, TieError, tabulate_block

BLOCK_SIZE = 8192
STATS = ("upward_creatable", "downward_creatable", "any_failure_possible")


class CultureModel(enum.Enum):
    IC = "ic"  # each voter uniform over the six rankings
    IAC = "iac"  # uniform over all six-part compositions of V


def score_interval(successes: int, trials: int, confidence: float = 0.99) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion, clamped to [0, 1]."""
    if not 0 <= successes <= trials:
        raise ValueError("need 0 <= successes <= trials")
    if trials == 0:
        return (0.0, 1.0)
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    p = successes / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z / denom * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials))
    low = 0.0 if successes == 0 else max(0.0, centre - half)
    high = 1.0 if successes == trials else min(1.0, centre + half)
    return (low, high)


# ---------------------------------------------------------------- sampling


def sample_block(model: CultureModel, voters: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` profiles as an (n, 6) integer array."""
    if voters < 1:
        raise ValueError("voters must be at least 1")
    if model is CultureModel.IC:
        return rng.multinomial(voters, [1 / 6] * 6, size=n).astype(np.int64)
    # stars and bars: 5 distinct bar positions among voters + 5 slots
    slots = voters + 5
    bars = np.empty((n, 5), dtype=np.int64)
    todo = np.arange(n)
    while todo.size:
        draw = np.sort(rng.integers(0, slots, size=(todo.size, 5)), axis=1)
        good = np.all(np.diff(draw, axis=1) > 0, axis=1)
        bars[todo[good]] = draw[good]
        todo = todo[~good]
    edges = np.concatenate(
        [np.full((n, 1), -1), bars, np.full((n, 1), slots)], axis=1
    )
    return np.diff(edges, axis=1) - 1


def sample_profile(model: CultureModel, voters: int, rng: np.random.Generator) -> BallotProfile:
    return BallotProfile(tuple(int(x) for x in sample_block(model, voters, 1, rng)[0]))


# ---------------------------------------------------------------- vectorized classification

_COL = np.zeros((3, 3, 3), dtype=np.int64)
for (x, y, z), i in RANK_INDEX.items():
    _COL[x, y, z] = i


def classify_block(counts: np.ndarray) -> dict[str, np.ndarray]:
    """Array version of :func:`irvmono.conditions.classify` for many profiles at once.

    Returns boolean arrays ``tied``, ``upward_creatable`` and
    ``downward_creatable``; both verdicts are False where ``tied`` is set.
    """
    counts = np.asarray(counts, dtype=np.int64)
    rows = np.arange(counts.shape[0])
    w, r, out, tied = tabulate_block(counts)
    first = counts[:, 0::2] + counts[:, 1::2]
    V = first.sum(axis=1)

    A = first[rows, w]
    B = first[rows, r]
    C = first[rows, out]
    a1 = counts[rows, _COL[w, r, out]]
    b2 = counts[rows, _COL[r, out, w]]

    up = (2 * (C + b2) - V >= 1) & (4 * C - V >= 1)
    gap = 2 * (A - C)
    two_delta = np.where(V % 2 == 1, 1, 2)
    down = (
        (2 * b2 - gap >= 1)
        & (2 * (B - A - 1) - gap >= 1)
        & (2 * (B + a1) - V - two_delta - gap >= 1)
    )
    return {"tied": tied, "upward_creatable": up & ~tied, "downward_creatable": down & ~tied}


# ---------------------------------------------------------------- estimation


@dataclass(frozen=True)
class Frequency:
    count: int
    denominator: int
    estimate: float
    low: float
    high: float

    def as_dict(self) -> dict:
        return {
            "count": self.count,
            "denominator": self.denominator,
            "estimate": self.estimate,
            "low": self.low,
            "high": self.high,
        }


@dataclass(frozen=True)
class FrequencyReport:
    model: CultureModel
    voters: int
    trials: int
    seed: int
    confidence: float
    upward_creatable: Frequency
    downward_creatable: Frequency
    any_failure_possible: Frequency
    tied_discarded: Frequency
    elapsed: float = field(default=0.0, compare=False)

    def as_dict(self) -> dict:
        """Deterministic payload; wall-clock time is left out so reruns compare byte for byte."""
        return {
            "model": self.model.value,
            "voters": self.voters,
            "trials": self.trials,
            "seed": self.seed,
            "confidence": self.confidence,
            "upward_creatable": self.upward_creatable.as_dict(),
            "downward_creatable": self.downward_creatable.as_dict(),
            "any_failure_possible": self.any_failure_possible.as_dict(),
            "tied_discarded": self.tied_discarded.as_dict(),
        }


def _frequency(count: int, denominator: int, confidence: float) -> Frequency:
    est = count / denominator if denominator else 0.0
    low, high = score_interval(count, denominator, confidence) if denominator else (0.0, 1.0)
    return Frequency(count, denominator, est, low, high)


def _block_counts(model, voters, seed, index, size) -> tuple[int, int, int, int]:
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))
    v = classify_block(sample_block(model, voters, size, rng))
    up, down = v["upward_creatable"], v["downward_creatable"]
    return (int(up.sum()), int(down.sum()), int((up | down).sum()), int(v["tied"].sum()))


def estimate(
    model: CultureModel,
    voters: int,
    trials: int,
    seed: int = 0,
    confidence: float = 0.99,
    workers: int = 1,
) -> FrequencyReport:
    """Classify ``trials`` sampled profiles and report susceptibility frequencies.

    Trials are split into fixed blocks, each drawing from its own stream
    derived from ``(seed, block index)``, so the report does not depend on
    ``workers``. Tied profiles are counted in ``tied_discarded`` and left out
    of the other denominators.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if voters < 1:
        raise ValueError("voters must be at least 1")
    model = CultureModel(model)
    start = time.perf_counter()
    blocks = [
        (model, voters, seed, i, min(BLOCK_SIZE, trials - i * BLOCK_SIZE))
        for i in range(math.ceil(trials / BLOCK_SIZE))
    ]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda b: _block_counts(*b), blocks))
    else:
        parts = [_block_counts(*b) for b in blocks]
    up, down, anyf, tied = (sum(col) for col in zip(*parts))
    valid = trials - tied
    return FrequencyReport(
        model,
        voters,
        trials,
        seed,
        confidence,
        _frequency(up, valid, confidence),
        _frequency(down, valid, confidence),
        _frequency(anyf, valid, confidence),
        _frequency(tied, trials, confidence),
        time.perf_counter() - start,
    )


def exact_frequencies(model: CultureModel, voters: int) -> dict[str, Fraction]:
    """Exact population fractions by enumerating every profile with ``voters`` voters.

    Susceptibility fractions are conditional on the profile being untied,
    matching the denominators of :func:`estimate`.
    """
    model = CultureModel(model)
    hits = dict.fromkeys(STATS, Fraction(0))
    tied = Fraction(0)
    total = Fraction(0)
    for p in enumerate_profiles(voters):
        if model is CultureModel.IAC:
            weight = Fraction(1)
        else:
            weight = Fraction(
                math.factorial(voters), math.prod(math.factorial(n) for n in p.counts)
            ) / 6**voters
        total += weight
        try:
            report = classify(p)
        except TieError:
            tied += weight
            continue
        flags = report.flags()
        for key in STATS:
            if flags[key]:
                hits[key] += weight
    valid = total - tied
    out = {k: (v / valid if valid else Fraction(0)) for k, v in hits.items()}
    out["tied_discarded"] = tied / total
    return out
