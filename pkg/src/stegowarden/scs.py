"""Binary scalar Costa scheme.

Embedding quantizes each host sample onto one of two interleaved codebooks
(lattice cosets spaced delta/2 apart) and moves the sample a fraction alpha
of the way toward the chosen codeword.  Extraction is hard minimum-distance
decoding on the centered residual.

The dither is a keyed per-sample offset on the messaging path.  Density and
detectability analyses model the undithered configuration: pooling samples
with independent dithers would wash out the very codebook artifacts that make
the scheme statistically detectable, so the analytic density below applies to
``dithered=False`` embeddings (or equivalently to an observer working in the
per-sample dither frame).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .lattice import check_delta, mod_residual, quantize
from .signals import Key, check_bits, check_signal

__all__ = [
    "ScsParams",
    "delta_for_dwr",
    "scs_dither",
    "scs_embed",
    "scs_extract",
    "scs_theoretical_pdf",
]


@dataclass(frozen=True)
class ScsParams:
    """Costa factor, quantizer step and dither key for one SCS instance."""

    alpha: float
    delta: float
    key: Key
    dithered: bool = True

    def __post_init__(self):
        if not (0.0 < self.alpha <= 1.0):
            raise ParameterError(f"alpha must be in (0, 1], got {self.alpha}")
        check_delta(self.delta)


def delta_for_dwr(dwr_db: float, sigma_s: float, alpha: float) -> float:
    """Quantizer step giving nominal watermark power (alpha*delta)^2/12 at the target DWR."""
    if not (sigma_s > 0 and math.isfinite(sigma_s)):
        raise ParameterError("sigma_s must be a positive finite real")
    if not (0.0 < alpha <= 1.0):
        raise ParameterError(f"alpha must be in (0, 1], got {alpha}")
    if not math.isfinite(dwr_db):
        raise ParameterError("dwr_db must be finite")
    return sigma_s * math.sqrt(12.0) * 10.0 ** (-dwr_db / 20.0) / alpha


def scs_dither(p: ScsParams, n: int) -> np.ndarray:
    """Keyed per-sample dither in [0, delta); zeros when p.dithered is False."""
    if n < 1:
        raise ParameterError("dither length must be >= 1")
    if not p.dithered:
        return np.zeros(int(n))
    return p.key.stream("scs-dither").uniform(0.0, p.delta, int(n))


def scs_embed(s, bits, p: ScsParams) -> np.ndarray:
    """Embed one bit per sample; per-sample distortion is at most alpha*delta/2."""
    s = check_signal(s)
    bits = check_bits(bits, expected_len=s.size)
    offset = scs_dither(p, s.size) + bits * (p.delta / 2.0)
    u = quantize(s - offset, p.delta) + offset
    return s + p.alpha * (u - s)


def scs_extract(y, p: ScsParams) -> np.ndarray:
    """Hard decisions: bit 0 when the dither-removed residual is within delta/4 of the lattice."""
    y = check_signal(y)
    r = mod_residual(y - scs_dither(p, y.size), p.delta)
    return (np.abs(r) >= p.delta / 4.0).astype(np.uint8)


def scs_theoretical_pdf(x, p: ScsParams, host_pdf):
    """Analytic stego density of the undithered embedder for equiprobable bits.

    Every codeword u on the half-step lattice {k*delta/2} carries a window of
    half-width (1-alpha)*delta/2; inside the window the host density appears
    compressed by the embedding blend:

        p_X(x) = 1/(2(1-alpha)) * sum_u 1[|x-u| <= (1-alpha)*delta/2]
                                    * host_pdf((x - alpha*u)/(1-alpha))

    For alpha < 1/2 neighboring windows overlap (aliasing); for alpha > 1/2
    they are separated by true gaps of zero density.  alpha = 1 is a discrete
    distribution and is rejected.
    """
    if not (0.0 < p.alpha < 1.0):
        raise ParameterError("the analytic stego density requires alpha in (0, 1)")
    xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
    alpha, delta = p.alpha, p.delta
    half = delta / 2.0
    w = (1.0 - alpha) * half  # window half-width
    k_lo = np.ceil((xs - w) / half)
    k_hi = np.floor((xs + w) / half)
    total = np.zeros_like(xs)
    span = int(np.max(k_hi - k_lo)) if xs.size else 0
    for j in range(max(span + 1, 0)):
        k = k_lo + j
        u = k * half
        valid = k <= k_hi
        contrib = host_pdf((xs - alpha * u) / (1.0 - alpha))
        total += np.where(valid, contrib, 0.0)
    total /= 2.0 * (1.0 - alpha)
    return float(total[0]) if np.ndim(x) == 0 else total
