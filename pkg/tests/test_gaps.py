import pytest
from hypothesis import given
from hypothesis import strategies as st

from gapgreedy.gaps import UNBOUNDED_TREND, GapSequence, classify, k0_below, member


def test_powers_of_four():
    c = classify(GapSequence([4], "geometric", 4), 5)
    assert c.quotient_bound == 4
    assert c.additive_label == UNBOUNDED_TREND
    assert not c.quotient_trend


def test_even_numbers():
    c = classify(GapSequence([2], "arithmetic", 2), 10)
    assert c.additive_bound == 2
    assert c.quotient_bound == 2
    assert not c.additive_trend


def test_double_exponential_trend():
    n = GapSequence([4], "double-exponential", 2)
    assert n.head(4) == [4, 16, 256, 65536]
    c = classify(n, 4)
    assert c.quotient_label == UNBOUNDED_TREND
    assert c.quotient_bound == 256


def test_classify_needs_horizon_and_prefix():
    with pytest.raises(ValueError):
        classify(GapSequence([1, 2]), 1)
    with pytest.raises(ValueError):
        classify(GapSequence([1, 2]), 3)


@pytest.mark.parametrize("m,expected", [(5, 2), (8, 2), (9, 3)])
def test_k0_below(m, expected):
    assert k0_below(GapSequence([2, 4, 8]), m) == expected


def test_k0_below_rejects_small_m():
    with pytest.raises(ValueError):
        k0_below(GapSequence([2, 4, 8]), 2)


def test_member():
    n = GapSequence([2, 4, 8])
    assert member(n, 4)
    assert not member(n, 5)
    assert member(GapSequence.naturals(), 17)
    with pytest.raises(ValueError):
        member(n, 9)


def test_prefix_must_increase():
    with pytest.raises(ValueError):
        GapSequence([3, 3])
    with pytest.raises(ValueError):
        GapSequence([2, 1])
    with pytest.raises(ValueError):
        GapSequence([1], "spiral", 2)


def test_json_round_trip():
    n = GapSequence([1, 3], "arithmetic", 2)
    again = GapSequence.from_json(n.to_json())
    assert again.head(6) == n.head(6) == [1, 3, 5, 7, 9, 11]
    assert GapSequence.from_json([2, 5]).prefix == (2, 5)


def test_geometric_rule_rounds_up():
    assert GapSequence([1], "geometric", 1.5).head(5) == [1, 2, 3, 5, 8]


def test_ruleless_prefix_cannot_extend():
    with pytest.raises(IndexError):
        GapSequence([1, 2])[3]
    with pytest.raises(IndexError):
        GapSequence([1, 2]).elements_upto(5)


sequences = st.one_of(
    st.builds(lambda a, r: GapSequence([a], "geometric", r), st.integers(1, 9), st.floats(1.1, 4)),
    st.builds(lambda a, d: GapSequence([a], "arithmetic", d), st.integers(1, 9), st.integers(1, 7)),
)


@given(sequences, st.integers(2, 200))
def test_k0_brackets_m(n, m):
    if m <= n.first:
        return
    k = k0_below(n, m)
    assert n[k] < m <= n[k + 1]


@given(sequences, st.integers(2, 12), st.integers(0, 6))
def test_classify_monotone_in_horizon(n, K, extra):
    small, big = classify(n, K), classify(n, K + extra)
    assert big.quotient_bound >= small.quotient_bound
    assert big.additive_bound >= small.additive_bound


@given(sequences, st.integers(2, 15))
def test_classification_bounds_are_least(n, K):
    c = classify(n, K)
    vals = n.head(K)
    pairs = list(zip(vals, vals[1:]))
    assert all(b <= c.quotient_bound * a for a, b in pairs)
    assert any(b > (c.quotient_bound - 1) * a for a, b in pairs)
    assert max(b - a for a, b in pairs) == c.additive_bound


@given(sequences, st.integers(1, 60))
def test_member_agrees_with_head(n, m):
    assert member(n, m) == (m in n.head(m + 1))
