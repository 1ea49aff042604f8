import pytest
from hypothesis import assume
from hypothesis import strategies as st

from irvmono.profile import BallotProfile, TieError, normalize

UPWARD_BEFORE = BallotProfile.of(18, 20, 7, 25, 20, 10)
UPWARD_AFTER = BallotProfile.of(25, 20, 0, 25, 20, 10)
DOWNWARD_BEFORE = BallotProfile.of(25, 5, 25, 20, 25, 0)
DOWNWARD_AFTER = BallotProfile.of(25, 5, 25, 13, 25, 7)


def profiles(max_count=40, min_voters=1):
    return (
        st.tuples(*[st.integers(0, max_count)] * 6)
        .filter(lambda t: sum(t) >= min_voters)
        .map(BallotProfile)
    )


def try_normalize(p):
    try:
        return normalize(p)
    except TieError:
        return None


@st.composite
def downward_profiles(draw, relabel=True):
    """Normalized profiles built to satisfy the downward condition, optionally disguised."""
    from irvmono.conditions import downward_creatable, parity_correction

    gap = draw(st.integers(1, 12))
    lead = draw(st.integers(gap + 2, gap + 30))  # B - A
    c2 = draw(st.integers(0, 30))
    c1 = c2 + lead + 1 + draw(st.integers(0, 30))  # A keeps the final
    C = c1 + c2
    A = C + gap
    B = A + lead
    V = A + B + C
    # 2(B + a1) - V - 2δ - 2 gap >= 1
    lo = -(-(V - 2 * B + parity_correction(V) + 2 * gap + 1) // 2)
    assume(max(lo, 0) <= A)
    a1 = draw(st.integers(max(lo, 0), A))
    b2 = draw(st.integers(gap + 1, B))
    p = BallotProfile((a1, A - a1, B - b2, b2, c1, c2))
    assume(downward_creatable(normalize(p)).holds)
    if relabel:
        p = p.relabel(draw(st.permutations(range(3))))
    return p


# ---------------------------------------------------------------- acceptance summary

_ACCEPTANCE: list[tuple[str, str, str]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if item.module.__name__ != "test_acceptance" or report.when != "call":
        return
    title = (item.function.__doc__ or item.name).strip().splitlines()[0]
    detail = dict(item.user_properties).get("detail", "")
    _ACCEPTANCE.append(("PASS" if report.passed else "FAIL", title, detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for status, title, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{status}  {title}" + (f"  [{detail}]" if detail else ""))
