import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy.stats import kstest

from stegowarden.errors import ParameterError
from stegowarden.lattice import mod_residual, quantize
from stegowarden.signals import Key

DELTAS = st.sampled_from([0.25, 0.5, 1.0, 2.0, 2.585])


def _away_from_tie(v, delta):
    # half-way points are a documented tie-break, not a property-test target
    frac = (v / delta + 0.5) % 1.0
    return min(frac, 1.0 - frac) > 1e-6


def test_quantize_examples():
    assert quantize(0.6, 1.0) == 1.0
    assert quantize(-0.5, 1.0) == 0.0  # tie rounds toward +inf
    assert quantize(0.5, 1.0) == 1.0
    assert quantize(7.3, 2.0) == 8.0


def test_mod_residual_examples():
    assert mod_residual(1.2, 1.0) == pytest.approx(0.2)
    for n in (-3, 0, 5):
        assert mod_residual(n * 0.7, 0.7) == pytest.approx(0.0, abs=1e-12)


def test_invalid_inputs():
    with pytest.raises(ParameterError):
        quantize(1.0, 0.0)
    with pytest.raises(ParameterError):
        quantize(np.nan, 1.0)
    with pytest.raises(ParameterError):
        mod_residual(np.inf, 1.0)


@settings(max_examples=300, deadline=None)
@given(st.floats(min_value=-50, max_value=50), st.integers(min_value=-20, max_value=20), DELTAS)
def test_lattice_shift_invariance(v, k, delta):
    assume(_away_from_tie(v, delta) and _away_from_tie(v + k * delta, delta))
    assert quantize(v + k * delta, delta) == pytest.approx(quantize(v, delta) + k * delta, abs=1e-9)


@settings(max_examples=300, deadline=None)
@given(st.floats(min_value=-1e4, max_value=1e4), DELTAS)
def test_quantize_within_half_step(v, delta):
    assert abs(v - quantize(v, delta)) <= delta / 2 + 1e-9


@settings(max_examples=300, deadline=None)
@given(st.floats(min_value=-1e4, max_value=1e4), DELTAS)
def test_mod_residual_range(v, delta):
    r = mod_residual(v, delta)
    assert -delta / 2 <= r < delta / 2


@settings(max_examples=300, deadline=None)
@given(st.floats(min_value=-50, max_value=50), st.integers(min_value=-20, max_value=20), DELTAS)
def test_mod_residual_periodic(v, k, delta):
    assume(_away_from_tie(v, delta) and _away_from_tie(v + k * delta, delta))
    assert mod_residual(v + k * delta, delta) == pytest.approx(mod_residual(v, delta), abs=1e-9)


def test_residual_of_uniform_is_uniform():
    rng = Key(123).stream("test-uniform")
    delta = 0.8
    v = rng.uniform(-1000, 1000, 10**6)
    r = mod_residual(v, delta)
    stat = kstest((r + delta / 2) / delta, "uniform")
    assert stat.pvalue > 0.01
