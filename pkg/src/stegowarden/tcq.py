"""Trellis-coded quantization stego-system.

A shift-register trellis on 2**r states carries a state-and-bit dependent
dither, so the active codebook hops pseudo-randomly over offsets that tile a
full quantizer step in multiples of delta/2**r.  Embedding searches the
minimum squared-error codeword sequence among paths that encode the message
(the branch for the other bit is pruned outright, which guarantees the
codeword sequence encodes the intended bits).  Extraction runs a full Viterbi
pass with both branch labels allowed and every start state open.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import ParameterError
from .lattice import check_delta, quantize
from .signals import check_bits, check_signal

__all__ = [
    "Trellis",
    "TcqParams",
    "build_trellis",
    "tcq_codeword_search",
    "tcq_embed",
    "viterbi_decode",
    "tcq_extract",
    "tcq_theoretical_pdf",
]


@dataclass(frozen=True)
class Trellis:
    """Transition table and per-(state, bit) dither offsets (as fractions of delta)."""

    r: int
    next_state: np.ndarray  # (N, 2) int64
    dither_frac: np.ndarray  # (N, 2) float64 in [-1/2, 1/2]

    def __post_init__(self):
        n = self.n_states
        if self.next_state.shape != (n, 2) or self.dither_frac.shape != (n, 2):
            raise ParameterError("trellis tables must have shape (2**r, 2)")
        if np.any(self.next_state[:, 0] == self.next_state[:, 1]):
            raise ParameterError("branches for bit 0 and bit 1 must lead to distinct states")
        # every state must have exactly two incoming branches
        counts = np.bincount(self.next_state.ravel(), minlength=n)
        if not np.all(counts == 2):
            raise ParameterError("every state must have exactly two incoming branches")
        if np.any(np.abs(self.dither_frac) > 0.5):
            raise ParameterError("dither offsets must lie within half a step")

    @property
    def n_states(self) -> int:
        return 2 ** self.r


@functools.lru_cache(maxsize=None)
def build_trellis(r: int) -> Trellis:
    """Shift-register trellis: tr(e, b) = (2e + b) mod 2**r.

    The dither for 1-based state index i is (b/2 - i/N) * delta for the lower
    half of the states, with the upper half repeating the lower half, so the
    offsets used across states and bits tile a full step in N equal parts.
    """
    if r < 2:
        raise ParameterError("trellis needs r >= 2 state bits")
    n = 2**r
    e = np.arange(n, dtype=np.int64)
    next_state = np.stack([(2 * e) % n, (2 * e + 1) % n], axis=1)
    i_eff = (e % (n // 2)) + 1  # upper half duplicates the lower half
    dither_frac = np.stack([-i_eff / n, 0.5 - i_eff / n], axis=1)
    next_state.setflags(write=False)
    dither_frac.setflags(write=False)
    return Trellis(r=int(r), next_state=next_state, dither_frac=dither_frac)


@dataclass(frozen=True)
class TcqParams:
    """Costa factor, quantizer step and trellis for one TCQ instance.

    ``initial_state=None`` lets the codeword search optimize over every start
    state; the fixed default keeps embedding deterministic.
    """

    alpha: float
    delta: float
    trellis: Trellis
    initial_state: int | None = 0

    def __post_init__(self):
        if not (0.0 < self.alpha <= 1.0):
            raise ParameterError(f"alpha must be in (0, 1], got {self.alpha}")
        check_delta(self.delta)
        if self.initial_state is not None and not (0 <= self.initial_state < self.trellis.n_states):
            raise ParameterError("initial_state out of range")


def _forced_states(bits: np.ndarray, r: int, initial_state: int) -> np.ndarray:
    """State before each step when the path is driven by the message bits."""
    init_bits = np.array([(initial_state >> (r - 1 - i)) & 1 for i in range(r)], dtype=np.uint8)
    full = np.concatenate([init_bits, bits[:-1]]) if bits.size > 1 else init_bits
    weights = 1 << np.arange(r - 1, -1, -1, dtype=np.int64)
    return sliding_window_view(full, r).astype(np.int64) @ weights


def tcq_codeword_search(s, bits, p: TcqParams):
    """Minimum squared-error codeword sequence among paths encoding ``bits``.

    Returns (codewords, cost, states) where states[j] is the state before
    step j.  With a fixed initial state the bit-driven path is unique and the
    search reduces to a per-sample nearest-codeword lookup; with
    ``initial_state=None`` a pruned Viterbi pass optimizes over start states.
    """
    s = check_signal(s)
    bits = check_bits(bits, expected_len=s.size)
    tr = p.trellis
    if p.initial_state is not None:
        states = _forced_states(bits, tr.r, p.initial_state)
        f = tr.dither_frac[states, bits] * p.delta
        u = quantize(s - f, p.delta) + f
        cost = float(np.sum((s - u) ** 2))
        return u, cost, states

    n = tr.n_states
    half = n // 2
    e1 = np.arange(half, dtype=np.int64)
    pm = np.zeros(n)
    choice = np.empty((s.size, n), dtype=np.uint8)
    for j in range(s.size):
        b = int(bits[j])
        f = tr.dither_frac[:, b] * p.delta
        c = s[j] - f
        met = (c - np.floor(c / p.delta + 0.5) * p.delta) ** 2
        cand = pm + met
        ep = (2 * e1 + b) % n
        c1, c2 = cand[e1], cand[e1 + half]
        pick = c2 < c1
        new_pm = np.full(n, np.inf)
        new_pm[ep] = np.where(pick, c2, c1)
        choice[j, ep] = pick
        pm = new_pm
    end = int(np.argmin(pm))
    cost = float(pm[end])
    states = np.empty(s.size, dtype=np.int64)
    cur = end
    for j in range(s.size - 1, -1, -1):
        cur = (cur >> 1) + int(choice[j, cur]) * half
        states[j] = cur
    f = tr.dither_frac[states, bits] * p.delta
    u = quantize(s - f, p.delta) + f
    return u, cost, states


def tcq_embed(s, bits, p: TcqParams) -> np.ndarray:
    """Move each sample a fraction alpha toward its path codeword."""
    u, _, _ = tcq_codeword_search(s, bits, p)
    return np.asarray(s, dtype=np.float64) + p.alpha * (u - np.asarray(s, dtype=np.float64))


def viterbi_decode(y, p: TcqParams):
    """Full Viterbi with both branch labels and all start states.

    Returns (bits, cost).  Branch metric is the squared distance from the
    sample to the branch codebook's nearest codeword.
    """
    y = check_signal(y)
    tr = p.trellis
    if y.size < tr.r:
        raise ParameterError(f"need at least r={tr.r} samples to decode")
    n = tr.n_states
    half = n // 2
    e1 = np.arange(half, dtype=np.int64)
    ep0 = (2 * e1) % n
    ep1 = ep0 + 1
    f0 = tr.dither_frac[:, 0] * p.delta
    f1 = tr.dither_frac[:, 1] * p.delta
    pm = np.zeros(n)
    choice = np.empty((y.size, n), dtype=np.uint8)
    new_pm = np.empty(n)
    for j in range(y.size):
        c0 = y[j] - f0
        c1 = y[j] - f1
        m0 = (c0 - np.floor(c0 / p.delta + 0.5) * p.delta) ** 2
        m1 = (c1 - np.floor(c1 / p.delta + 0.5) * p.delta) ** 2
        cand0 = pm + m0
        cand1 = pm + m1
        a, bctl = cand0[e1], cand0[e1 + half]
        pick0 = bctl < a
        new_pm[ep0] = np.where(pick0, bctl, a)
        choice[j, ep0] = pick0
        a, bctl = cand1[e1], cand1[e1 + half]
        pick1 = bctl < a
        new_pm[ep1] = np.where(pick1, bctl, a)
        choice[j, ep1] = pick1
        pm, new_pm = new_pm, pm
    end = int(np.argmin(pm))
    cost = float(pm[end])
    bits = np.empty(y.size, dtype=np.uint8)
    cur = end
    for j in range(y.size - 1, -1, -1):
        bits[j] = cur & 1  # the branch label equals the next state's low bit
        cur = (cur >> 1) + int(choice[j, cur]) * half
    return bits, cost


def tcq_extract(y, p: TcqParams) -> np.ndarray:
    """Bit labels along the minimum-cost trellis path through the signal."""
    return viterbi_decode(y, p)[0]


def tcq_theoretical_pdf(x, p: TcqParams, host_pdf, host_cdf=None):
    """Stego density as the host density averaged over a window of width alpha*delta:

        p_X(x) = 1/(alpha*delta) * integral of host_pdf over [x - alpha*delta/2, x + alpha*delta/2]

    With ``host_cdf`` the integral is evaluated in closed form; otherwise each
    point is integrated by adaptive quadrature.
    """
    if not (0.0 < p.alpha <= 1.0):
        raise ParameterError("alpha must be in (0, 1]")
    h = p.alpha * p.delta / 2.0
    xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if host_cdf is not None:
        out = (np.asarray(host_cdf(xs + h)) - np.asarray(host_cdf(xs - h))) / (2.0 * h)
    else:
        from scipy.integrate import quad

        out = np.array([quad(host_pdf, xi - h, xi + h, limit=200)[0] for xi in xs]) / (2.0 * h)
    return float(out[0]) if np.ndim(x) == 0 else out
