import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stegowarden.errors import ParameterError
from stegowarden.signals import (
    Key,
    db_to_linear,
    empirical_power,
    gen_gaussian_host,
    linear_to_db,
    random_bits,
)


def test_host_variance_large_sample():
    s = gen_gaussian_host(10**6, 1.0, Key(7))
    assert abs(s.var() - 1.0) < 0.01


def test_host_single_sample_finite():
    s = gen_gaussian_host(1, 1.0, Key(3))
    assert s.shape == (1,) and np.isfinite(s[0])


def test_host_deterministic_per_key():
    a = gen_gaussian_host(1000, 2.0, Key(42))
    b = gen_gaussian_host(1000, 2.0, Key(42))
    assert np.array_equal(a, b)
    c = gen_gaussian_host(1000, 2.0, Key(43))
    assert not np.array_equal(a, c)


def test_host_normality_kurtosis():
    from scipy.stats import kurtosis

    s = gen_gaussian_host(10**6, 1.0, Key(11))
    assert abs(kurtosis(s, fisher=False) - 3.0) < 0.1


def test_host_invalid_params():
    with pytest.raises(ParameterError):
        gen_gaussian_host(0, 1.0, Key(0))
    with pytest.raises(ParameterError):
        gen_gaussian_host(10, -1.0, Key(0))
    with pytest.raises(ParameterError):
        gen_gaussian_host(10, 0.0, Key(0))


def test_key_streams_are_purpose_separated():
    k = Key(5)
    a = k.stream("host").normal(size=100)
    b = k.stream("noise").normal(size=100)
    assert not np.array_equal(a, b)
    assert np.array_equal(a, k.stream("host").normal(size=100))
    # indexed substreams differ too
    assert not np.array_equal(
        k.stream("host", 0).normal(size=10), k.stream("host", 1).normal(size=10)
    )


def test_key_child_independent_of_streams():
    k = Key(5)
    child = k.child("point", 3)
    assert child == k.child("point", 3)
    assert child != k.child("point", 4)
    assert 0 <= child.seed < 2**64


def test_key_seed_range():
    with pytest.raises(ParameterError):
        Key(-1)
    with pytest.raises(ParameterError):
        Key(2**64)


def test_empirical_power_basics():
    assert empirical_power(np.zeros(10)) == 0.0
    assert empirical_power(np.full(17, 2.0)) == pytest.approx(4.0)
    with pytest.raises(ParameterError):
        empirical_power(np.array([]))


def test_empirical_power_gaussian():
    s = gen_gaussian_host(10**6, 1.0, Key(19))
    assert abs(empirical_power(s) - 1.0) < 0.01


def test_db_examples():
    assert db_to_linear(0.0) == pytest.approx(1.0)
    assert db_to_linear(13.0) == pytest.approx(10**1.3)
    # halving the power costs 10*log10(2) = 3.0103 dB
    assert abs(linear_to_db(2.0) - 3.0103) < 1e-4
    with pytest.raises(ParameterError):
        linear_to_db(0.0)
    with pytest.raises(ParameterError):
        linear_to_db(-3.0)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=-200, max_value=200))
def test_db_round_trip(db):
    assert linear_to_db(db_to_linear(db)) == pytest.approx(db, rel=1e-12, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=1e-30, max_value=1e30))
def test_linear_round_trip(r):
    assert db_to_linear(linear_to_db(r)) == pytest.approx(r, rel=1e-12)


def test_random_bits_are_binary_and_keyed():
    bits = random_bits(Key(1), 10**4)
    assert set(np.unique(bits)) <= {0, 1}
    assert abs(bits.mean() - 0.5) < 0.02
    assert np.array_equal(bits, random_bits(Key(1), 10**4))
