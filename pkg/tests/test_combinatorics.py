import pytest
from hypothesis import given, strategies as st

from subring_census.combinatorics import Composition, binomial, compositions


def test_binomial_values():
    assert binomial(4, 2) == 6
    assert binomial(6, 2) == 15
    assert binomial(7, 0) == 1
    assert binomial(3, 5) == 0


def test_binomial_rejects_negative():
    with pytest.raises(ValueError):
        binomial(-1, 0)
    with pytest.raises(ValueError):
        binomial(3, -2)


@given(st.integers(0, 60), st.integers(0, 60))
def test_binomial_symmetry(n, k):
    if k <= n:
        assert binomial(n, k) == binomial(n, n - k)


def test_compositions_strict_unique_split():
    assert [c.parts for c in compositions(2, 2, strict=True)] == [(1, 1)]


def test_compositions_weak_enumeration():
    assert [c.parts for c in compositions(3, 2)] == [(0, 3), (1, 2), (2, 1), (3, 0)]


def test_compositions_strict_pair_count():
    for e in range(2, 12):
        assert len(compositions(e, 2, strict=True)) == e - 1


def test_compositions_lex_order():
    parts = [c.parts for c in compositions(6, 3)]
    assert parts == sorted(parts)


def test_compositions_zero_parts():
    assert [c.parts for c in compositions(0, 0)] == [()]
    assert compositions(2, 0) == []


@given(st.integers(0, 14), st.integers(1, 6))
def test_composition_counts(e, m):
    assert len(compositions(e, m, strict=False)) == binomial(e + m - 1, m - 1)
    if e >= 1:
        assert len(compositions(e, m, strict=True)) == binomial(e - 1, m - 1)
    else:
        assert compositions(e, m, strict=True) == []


def test_composition_validation():
    with pytest.raises(ValueError):
        Composition((1, -1))
    with pytest.raises(ValueError):
        Composition((1, 0), strict=True)
    c = Composition((0, 2, 1))
    assert c.total == 3
    assert c.support == (1, 2)
