import numpy as np
import pytest
from scipy.stats import chisquare, norm

from stegowarden.errors import ParameterError
from stegowarden.lattice import quantize
from stegowarden.scs import delta_for_dwr
from stegowarden.signals import Key, empirical_power, gen_gaussian_host, random_bits
from stegowarden.tcq import (
    TcqParams,
    build_trellis,
    tcq_codeword_search,
    tcq_embed,
    tcq_extract,
    tcq_theoretical_pdf,
    viterbi_decode,
)
from stegowarden.warden import AttackParams, awgn_attack

KEY = Key(202)


def make_params(alpha, r=6, dwr_db=13.0, initial_state=0):
    return TcqParams(
        alpha=alpha,
        delta=delta_for_dwr(dwr_db, 1.0, alpha),
        trellis=build_trellis(r),
        initial_state=initial_state,
    )


# ---------------------------------------------------------------------------
# trellis construction
# ---------------------------------------------------------------------------


def test_trellis_rejects_small_r():
    with pytest.raises(ParameterError):
        build_trellis(1)


def test_trellis_r2_dither_table():
    # states 1..4 at bit 0 carry offsets (-1/4, -1/2, -1/4, -1/2) of delta
    tr = build_trellis(2)
    assert np.allclose(tr.dither_frac[:, 0], [-0.25, -0.5, -0.25, -0.5])
    assert np.allclose(tr.dither_frac[:, 1], [0.25, 0.0, 0.25, 0.0])


def test_trellis_dither_within_half_step():
    for r in (2, 3, 6):
        tr = build_trellis(r)
        assert np.all(np.abs(tr.dither_frac) <= 0.5)


def test_trellis_offsets_tile_a_full_step():
    tr = build_trellis(4)
    offs = np.unique(np.round(np.concatenate([tr.dither_frac[:, 0], tr.dither_frac[:, 1]]) % 1.0, 12))
    assert offs.size == tr.n_states  # N equally spaced offsets across one step
    assert np.allclose(np.diff(offs), 1.0 / tr.n_states)


def test_trellis_every_state_reachable_within_r_steps():
    # shift register: any state is reached from any start in r steps
    for r in (2, 3):
        tr = build_trellis(r)
        n = tr.n_states
        for start in range(n):
            reached = {start}
            frontier = {start}
            for _ in range(r):
                frontier = {int(tr.next_state[e, b]) for e in frontier for b in (0, 1)}
                reached |= frontier
            assert reached == set(range(n))


def test_trellis_branches_distinguishable_and_two_incoming():
    tr = build_trellis(3)
    assert np.all(tr.next_state[:, 0] != tr.next_state[:, 1])
    counts = np.bincount(tr.next_state.ravel(), minlength=tr.n_states)
    assert np.all(counts == 2)


# ---------------------------------------------------------------------------
# embedding / extraction
# ---------------------------------------------------------------------------


def test_round_trip_alpha_one():
    p = make_params(1.0)
    s = gen_gaussian_host(10**4, 1.0, KEY)
    bits = random_bits(KEY, s.size)
    assert np.array_equal(tcq_extract(tcq_embed(s, bits, p), p), bits)


def test_per_sample_distortion_bound():
    p = make_params(0.7)
    s = gen_gaussian_host(10**4, 1.0, KEY)
    x = tcq_embed(s, random_bits(KEY, s.size), p)
    assert np.max(np.abs(x - s)) <= p.alpha * p.delta / 2 + 1e-12


def test_ber_no_attack_alpha_07():
    p = make_params(0.7)
    s = gen_gaussian_host(10**5, 1.0, KEY)
    bits = random_bits(KEY, s.size)
    ber = np.mean(tcq_extract(tcq_embed(s, bits, p), p) != bits)
    assert ber < 1e-3


def test_ber_under_heavy_noise_is_half():
    p = make_params(0.7)
    s = gen_gaussian_host(10**5, 1.0, KEY)
    bits = random_bits(KEY, s.size)
    x = tcq_embed(s, bits, p)
    y = awgn_attack(x, empirical_power(x - s), AttackParams(wnr_db=-20.0, key=KEY.child("atk")))
    ber = np.mean(tcq_extract(y, p) != bits)
    assert abs(ber - 0.5) < 0.05


def test_decode_needs_r_samples():
    p = make_params(0.5, r=6)
    with pytest.raises(ParameterError):
        tcq_extract(np.zeros(3), p)


def test_distortion_matches_nominal():
    p = make_params(0.3)
    s = gen_gaussian_host(10**6, 1.0, KEY)
    x = tcq_embed(s, random_bits(KEY, s.size), p)
    nominal = p.alpha**2 * p.delta**2 / 12.0
    assert abs(empirical_power(x - s) / nominal - 1.0) < 0.03


def test_state_occupancy_uniform():
    # random message bits drive the shift register through all states evenly
    p = make_params(0.5)
    s = gen_gaussian_host(10**5, 1.0, KEY)
    bits = random_bits(KEY, s.size)
    _, _, states = tcq_codeword_search(s, bits, p)
    counts = np.bincount(states[p.trellis.r :], minlength=p.trellis.n_states)
    assert chisquare(counts).pvalue > 0.01


def test_forced_and_free_start_agree_after_transient():
    s = gen_gaussian_host(500, 1.0, KEY)
    bits = random_bits(KEY, s.size)
    fixed = make_params(0.5, r=3, initial_state=0)
    free = make_params(0.5, r=3, initial_state=None)
    u_fixed, cost_fixed, st_fixed = tcq_codeword_search(s, bits, fixed)
    u_free, cost_free, st_free = tcq_codeword_search(s, bits, free)
    assert cost_free <= cost_fixed + 1e-12
    r = fixed.trellis.r
    assert np.array_equal(st_fixed[r:], st_free[r:])  # paths merge after the transient
    assert np.allclose(u_fixed[r:], u_free[r:])


# ---------------------------------------------------------------------------
# exhaustive oracles for the path search
# ---------------------------------------------------------------------------


def _exhaustive_embed_cost(s, bits, trellis, delta, initial_state):
    """Brute force over message-consistent start states and lattice shifts."""
    starts = range(trellis.n_states) if initial_state is None else [initial_state]
    best = np.inf
    for e0 in starts:
        cost = 0.0
        e = e0
        for j, b in enumerate(bits):
            f = trellis.dither_frac[e, b] * delta
            n0 = round((s[j] - f) / delta)
            cost += min((s[j] - (n * delta + f)) ** 2 for n in range(n0 - 3, n0 + 4))
            e = int(trellis.next_state[e, b])
        best = min(best, cost)
    return best


def _exhaustive_decode_cost(y, trellis, delta):
    best = np.inf
    n_bits = len(y)
    for e0 in range(trellis.n_states):
        for word in range(2**n_bits):
            bits = [(word >> j) & 1 for j in range(n_bits)]
            cost, e = 0.0, e0
            for j, b in enumerate(bits):
                f = trellis.dither_frac[e, b] * delta
                n0 = round((y[j] - f) / delta)
                cost += min((y[j] - (n * delta + f)) ** 2 for n in range(n0 - 2, n0 + 3))
                e = int(trellis.next_state[e, b])
            best = min(best, cost)
    return best


def test_codeword_search_matches_exhaustive_small():
    rng = KEY.stream("exhaustive")
    tr = build_trellis(2)
    for trial in range(200):
        g = int(rng.integers(2, 13))
        s = rng.normal(0, 1.5, g)
        bits = rng.integers(0, 2, g).astype(np.uint8)
        init = [0, 1, 2, 3, None][trial % 5]
        p = TcqParams(alpha=0.5, delta=1.3, trellis=tr, initial_state=init)
        _, cost, _ = tcq_codeword_search(s, bits, p)
        ref = _exhaustive_embed_cost(s, bits, tr, 1.3, init)
        assert cost == pytest.approx(ref, rel=1e-9, abs=1e-12)


def test_viterbi_decode_matches_exhaustive_small():
    rng = KEY.stream("exhaustive-dec")
    tr = build_trellis(2)
    p = TcqParams(alpha=0.5, delta=1.0, trellis=tr)
    for _ in range(30):
        g = int(rng.integers(2, 9))
        y = rng.normal(0, 1.2, g)
        _, cost = viterbi_decode(y, p)
        assert cost == pytest.approx(_exhaustive_decode_cost(y, tr, 1.0), rel=1e-9, abs=1e-12)


# ---------------------------------------------------------------------------
# analytic density
# ---------------------------------------------------------------------------


def test_pdf_uniform_host_flat_interior():
    p = TcqParams(alpha=0.4, delta=0.05, trellis=build_trellis(2))

    def uniform_pdf(z):
        z = np.asarray(z, dtype=float)
        return np.where((z >= 0) & (z <= 1), 1.0, 0.0)

    xs = np.linspace(0.2, 0.8, 31)
    assert np.allclose(tcq_theoretical_pdf(xs, p, uniform_pdf), 1.0, atol=1e-9)


def test_pdf_gaussian_closed_form_at_zero():
    p = make_params(0.3)
    h = p.alpha * p.delta / 2
    expected = (norm.cdf(h) - norm.cdf(-h)) / (2 * h)
    assert tcq_theoretical_pdf(0.0, p, norm.pdf) == pytest.approx(expected, rel=1e-8)
    assert tcq_theoretical_pdf(0.0, p, norm.pdf, host_cdf=norm.cdf) == pytest.approx(expected)


def test_pdf_normalization():
    p = make_params(0.7)
    xs = np.linspace(-9, 9, 20001)
    total = np.trapezoid(tcq_theoretical_pdf(xs, p, norm.pdf, host_cdf=norm.cdf), xs)
    assert abs(total - 1.0) < 1e-3


def test_pdf_equals_uniform_kernel_convolution():
    # independent route: discrete convolution of the host density on a fine grid
    # (odd kernel length keeps 'same' mode exactly centered)
    p = make_params(0.3)
    width = p.alpha * p.delta
    dx = width / 401
    grid = np.arange(-9, 9, dx)
    kernel = np.ones(401) / 401
    conv = np.convolve(norm.pdf(grid), kernel, mode="same")
    xs = grid[(grid > -5) & (grid < 5)]
    ours = tcq_theoretical_pdf(xs, p, norm.pdf, host_cdf=norm.cdf)
    theirs = conv[(grid > -5) & (grid < 5)]
    assert np.max(np.abs(ours - theirs)) < 1e-6
