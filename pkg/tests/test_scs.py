import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import norm

from stegowarden.errors import ParameterError
from stegowarden.lattice import mod_residual
from stegowarden.scs import (
    ScsParams,
    delta_for_dwr,
    scs_embed,
    scs_extract,
    scs_theoretical_pdf,
)
from stegowarden.signals import Key, empirical_power, gen_gaussian_host, random_bits

KEY = Key(101)


def make_params(alpha, dwr_db=13.0, dithered=True, key=KEY):
    return ScsParams(alpha=alpha, delta=delta_for_dwr(dwr_db, 1.0, alpha), key=key, dithered=dithered)


def test_param_validation():
    with pytest.raises(ParameterError):
        ScsParams(alpha=0.0, delta=1.0, key=KEY)
    with pytest.raises(ParameterError):
        ScsParams(alpha=1.2, delta=1.0, key=KEY)
    with pytest.raises(ParameterError):
        ScsParams(alpha=0.5, delta=-1.0, key=KEY)


def test_delta_for_dwr_matches_nominal_power():
    # sigma_w = alpha*delta/sqrt(12) must hit the requested DWR
    for alpha, dwr in ((0.3, 13.0), (0.7, 5.0), (1.0, 30.0)):
        delta = delta_for_dwr(dwr, 1.5, alpha)
        sigma_w2 = (alpha * delta) ** 2 / 12.0
        assert 10 * np.log10(1.5**2 / sigma_w2) == pytest.approx(dwr, abs=1e-9)


def test_embed_alpha_one_lands_on_codebook():
    p = make_params(1.0)
    s = gen_gaussian_host(5000, 1.0, KEY)
    bits = random_bits(KEY, s.size)
    x = scs_embed(s, bits, p)
    from stegowarden.scs import scs_dither

    r = mod_residual(x - scs_dither(p, s.size) - bits * p.delta / 2, p.delta)
    assert np.max(np.abs(r)) < 1e-9


def test_embed_small_alpha_small_move():
    s = gen_gaussian_host(1000, 1.0, KEY)
    bits = random_bits(KEY, s.size)
    for alpha in (0.1, 0.01, 0.001):
        p = ScsParams(alpha=alpha, delta=1.0, key=KEY)
        x = scs_embed(s, bits, p)
        assert np.max(np.abs(x - s)) <= alpha * p.delta / 2 + 1e-12


def test_length_mismatch():
    p = make_params(0.5)
    with pytest.raises(ParameterError):
        scs_embed(np.zeros(10), np.zeros(9, dtype=np.uint8), p)


def test_round_trip_no_attack():
    s = gen_gaussian_host(10**4, 1.0, KEY)
    bits = random_bits(KEY, s.size)
    for alpha in (0.6, 1.0):  # (1-alpha)*delta/2 < delta/4 guarantees exact decoding
        p = make_params(alpha)
        assert np.array_equal(scs_extract(scs_embed(s, bits, p), p), bits)


def test_wrong_key_ber_half():
    s = gen_gaussian_host(10**5, 1.0, KEY)
    bits = random_bits(KEY, s.size)
    p = make_params(0.6)
    wrong = ScsParams(alpha=0.6, delta=p.delta, key=Key(999))
    ber = np.mean(scs_extract(scs_embed(s, bits, p), wrong) != bits)
    assert abs(ber - 0.5) < 0.02


def test_distortion_matches_nominal():
    # keyed uniform dither makes the quantization error exactly uniform
    s = gen_gaussian_host(10**6, 1.0, KEY)
    bits = random_bits(KEY, s.size)
    p = make_params(0.3)
    x = scs_embed(s, bits, p)
    nominal = p.alpha**2 * p.delta**2 / 12.0
    assert abs(empirical_power(x - s) / nominal - 1.0) < 0.02


def test_pdf_rejects_alpha_one():
    with pytest.raises(ParameterError):
        scs_theoretical_pdf(0.0, make_params(1.0), norm.pdf)


def test_pdf_overlapping_windows_positive_below_half():
    p = make_params(0.3, dithered=False)
    xs = np.linspace(-3, 3, 501)
    assert np.all(scs_theoretical_pdf(xs, p, norm.pdf) > 0)


def test_pdf_gaps_above_half():
    p = make_params(0.7, dithered=False)
    # gap midpoints sit half-way between adjacent half-step codewords
    gaps = np.arange(-4, 4) * p.delta / 2 + p.delta / 4
    assert np.all(scs_theoretical_pdf(gaps, p, norm.pdf) == 0)


def test_pdf_normalization():
    for alpha in (0.3, 0.7):
        p = make_params(alpha, dithered=False)
        total, _ = quad(
            lambda x: scs_theoretical_pdf(float(x), p, norm.pdf), -9, 9, limit=500
        )
        assert abs(total - 1.0) < 1e-3


def test_histogram_matches_pdf_undithered():
    # smaller-G version of the acceptance gate, quick sanity while developing
    from stegowarden.analysis import build_histogram

    g = 2 * 10**5
    p = make_params(0.3, dithered=False)
    s = gen_gaussian_host(g, 1.0, KEY)
    x = scs_embed(s, random_bits(KEY, g), p)
    h = build_histogram(x, -5, 5, 200)
    nodes, wts = np.polynomial.legendre.leggauss(5)
    w = h.bin_width
    oracle_mass = np.array(
        [np.sum(wts * scs_theoretical_pdf(c + nodes * w / 2, p, norm.pdf)) * w / 2 for c in h.centers()]
    )
    assert np.abs(h.mass - oracle_mass).sum() < 0.05


def test_dither_stream_is_deterministic_and_in_range():
    from stegowarden.scs import scs_dither

    p = make_params(0.5)
    d = scs_dither(p, 1000)
    assert np.array_equal(d, scs_dither(p, 1000))
    assert np.all((0 <= d) & (d < p.delta))
    assert np.all(scs_dither(make_params(0.5, dithered=False), 10) == 0)
