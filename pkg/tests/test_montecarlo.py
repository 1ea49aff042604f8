import json
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import chisquare
from statsmodels.stats.proportion import proportion_confint

from irvmono.conditions import classify
from irvmono.montecarlo import (
    CultureModel,
    classify_block,
    estimate,
    exact_frequencies,
    sample_block,
    score_interval,
)
from irvmono.oracle import enumerate_profiles
from irvmono.profile import BallotProfile, TieError


@pytest.mark.parametrize("k, n, conf", [(50, 100, 0.95), (3, 1000, 0.99), (0, 20, 0.99), (20, 20, 0.9), (1, 2, 0.5)])
def test_wilson_matches_statsmodels(k, n, conf):
    ref = proportion_confint(k, n, alpha=1 - conf, method="wilson")
    assert score_interval(k, n, conf) == pytest.approx(ref, abs=1e-12)


def test_wilson_known_value():
    low, high = score_interval(50, 100, 0.95)
    assert (round(low, 3), round(high, 3)) == (0.404, 0.596)


def test_wilson_edges():
    assert score_interval(0, 10)[0] == 0.0
    assert score_interval(10, 10)[1] == 1.0
    with pytest.raises(ValueError):
        score_interval(11, 10)


def test_iac_sampler_is_uniform_over_compositions():
    rng = np.random.default_rng(7)
    draws = sample_block(CultureModel.IAC, 2, 21_000, rng)
    assert (draws.sum(axis=1) == 2).all()
    seen = Counter(map(tuple, draws.tolist()))
    support = [p.counts for p in enumerate_profiles(2)]
    assert set(seen) == set(support)
    assert chisquare([seen[c] for c in support]).pvalue > 1e-3


def test_ic_sampler_single_voter_is_uniform_over_rankings():
    rng = np.random.default_rng(11)
    draws = sample_block(CultureModel.IC, 1, 60_000, rng)
    assert chisquare(draws.sum(axis=0)).pvalue > 1e-3


def test_vectorized_classifier_matches_scalar():
    for v in (3, 8, 13):
        profiles = list(enumerate_profiles(v))
        got = classify_block(np.array([p.counts for p in profiles]))
        for i, p in enumerate(profiles):
            try:
                f = classify(p).flags()
            except TieError:
                assert got["tied"][i]
                assert not got["upward_creatable"][i] and not got["downward_creatable"][i]
                continue
            assert not got["tied"][i]
            assert got["upward_creatable"][i] == f["upward_creatable"]
            assert got["downward_creatable"][i] == f["downward_creatable"]


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(list(CultureModel)), st.integers(40, 400), st.integers(0, 2**32))
def test_vectorized_classifier_matches_scalar_on_samples(model, voters, seed):
    counts = sample_block(model, voters, 200, np.random.default_rng(seed))
    got = classify_block(counts)
    for i, row in enumerate(counts.tolist()):
        try:
            f = classify(BallotProfile(tuple(row))).flags()
        except TieError:
            assert got["tied"][i]
            continue
        assert got["downward_creatable"][i] == f["downward_creatable"]
        assert got["upward_creatable"][i] == f["upward_creatable"]


def test_same_seed_same_report():
    a = estimate(CultureModel.IAC, 30, 20_000, seed=5)
    b = estimate(CultureModel.IAC, 30, 20_000, seed=5)
    assert json.dumps(a.as_dict()) == json.dumps(b.as_dict())
    c = estimate(CultureModel.IAC, 30, 20_000, seed=6)
    assert a.as_dict() != c.as_dict()


def test_worker_count_does_not_change_results():
    a = estimate(CultureModel.IC, 101, 30_000, seed=3, workers=1)
    b = estimate(CultureModel.IC, 101, 30_000, seed=3, workers=4)
    assert json.dumps(a.as_dict(), sort_keys=True) == json.dumps(b.as_dict(), sort_keys=True)


def test_single_voter_is_always_tied():
    r = estimate(CultureModel.IC, 1, 1000)
    assert r.tied_discarded.count == 1000
    assert r.upward_creatable.denominator == 0
    assert r.upward_creatable.estimate == 0.0


def test_report_fields():
    r = estimate("iac", 50, 10_000, seed=1)
    d = r.as_dict()
    assert d["model"] == "iac" and d["trials"] == 10_000
    assert "elapsed" not in json.dumps(d)
    any_ = r.any_failure_possible.count
    assert max(r.upward_creatable.count, r.downward_creatable.count) <= any_
    assert any_ <= r.upward_creatable.count + r.downward_creatable.count
    f = r.downward_creatable
    assert f.low <= f.estimate <= f.high
    assert r.tied_discarded.denominator == 10_000


def test_argument_validation():
    with pytest.raises(ValueError):
        estimate(CultureModel.IC, 0, 10)
    with pytest.raises(ValueError):
        estimate(CultureModel.IC, 10, 0)
    with pytest.raises(ValueError):
        estimate("urn", 10, 10)


def test_exact_frequencies_small():
    # no profile with at most 12 voters is susceptible in either direction
    for model in CultureModel:
        f = exact_frequencies(model, 12)
        assert f["any_failure_possible"] == 0
    assert float(exact_frequencies(CultureModel.IAC, 12)["tied_discarded"]) == pytest.approx(0.28636, abs=5e-6)
    assert float(exact_frequencies(CultureModel.IC, 12)["tied_discarded"]) == pytest.approx(0.42697, abs=5e-6)


def test_estimate_covers_exact_tie_rate():
    exact = float(exact_frequencies(CultureModel.IAC, 12)["tied_discarded"])
    r = estimate(CultureModel.IAC, 12, 200_000, seed=0)
    assert r.tied_discarded.low <= exact <= r.tied_discarded.high
