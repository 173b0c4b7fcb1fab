import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bullseye.limits import (StabilizedLimit, Unstable, UnstableTable,
                             certificate_consistent, filter_limit,
                             product_limit_check, subsample_consistent)


def test_constant_sample():
    res = filter_limit(lambda n: 1, 100)
    assert res == StabilizedLimit(1, 0, 100)


def test_eventually_constant_sample():
    res = filter_limit(lambda n: 0 if n < 5 else 1, 100)
    assert res == StabilizedLimit(1, 5, 100)


def test_parity_refused():
    res = filter_limit(lambda n: n % 2, 100)
    assert isinstance(res, Unstable)
    assert res.trace[:4] == (0, 1, 0, 1)


def test_edge_stabilization_refused():
    # constant only from 3/4 of the horizon on: outside the safety margin
    res = filter_limit(lambda n: 0 if n < 75 else 1, 100)
    assert isinstance(res, Unstable)


def test_certificate_soundness():
    sample = lambda n: 0 if n < 7 else 1
    cert = filter_limit(sample, 64)
    assert isinstance(cert, StabilizedLimit)
    assert certificate_consistent(sample, cert)
    assert not certificate_consistent(lambda n: 1 - sample(n), cert)


def test_subsample_consistency():
    sample = lambda n: 0 if n < 4 else 1
    cert = filter_limit(sample, 64)
    assert subsample_consistent(sample, cert)
    flappy = lambda n: 1 if n % 17 else 0
    assert not subsample_consistent(flappy, StabilizedLimit(1, 0, 64))


def test_invalid_certificate_rejected():
    with pytest.raises(ValueError):
        StabilizedLimit(1, 5, 4)


def test_product_constant_table():
    assert product_limit_check(lambda i, j: 1, 50)


def test_product_triangular_table():
    # inner limits all 1, outer 1, diagonal 1
    assert product_limit_check(lambda i, j: 1 if j >= i else 0, 50)


def test_product_parity_table_raises():
    with pytest.raises(UnstableTable):
        product_limit_check(lambda i, j: (i + j) % 2, 50)


def test_product_unstable_outer():
    # rows stabilize but their values alternate
    with pytest.raises(UnstableTable):
        product_limit_check(lambda i, j: i % 2, 50)


@settings(max_examples=50)
@given(st.integers(min_value=0, max_value=20),
       st.lists(st.sampled_from([0, 1]), min_size=0, max_size=20),
       st.sampled_from([0, 1]),
       st.integers(min_value=50, max_value=120))
def test_monotone_horizon(prefix_len, prefix, tail, horizon):
    """Once stabilized, larger horizons return the same value."""
    junk = (prefix + [1 - tail] * prefix_len)[:20]

    def sample(n):
        return junk[n] if n < len(junk) else tail

    first = filter_limit(sample, horizon)
    assert isinstance(first, StabilizedLimit)
    assert first.value == tail
    for extra in (horizon + 1, horizon * 2):
        again = filter_limit(sample, extra)
        assert isinstance(again, StabilizedLimit)
        assert again.value == first.value
        assert again.stable_from == first.stable_from


@settings(max_examples=30)
@given(st.integers(min_value=0, max_value=6), st.sampled_from([0, 1]),
       st.integers(min_value=0))
def test_random_eventually_constant_tables(bound, value, seed):
    import random
    rng = random.Random(seed)
    cells = {(i, j): rng.randint(0, 1) for i in range(bound) for j in range(bound)}

    def table(i, j):
        if i < bound and j < bound:
            return cells[i, j]
        return value

    assert product_limit_check(table, 50)
