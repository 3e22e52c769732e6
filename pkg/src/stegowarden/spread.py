"""Spread transform layer and the ST-SCS composite scheme.

The transform projects blocks of tau host samples onto a keyed +-1/sqrt(tau)
direction, embeds one SCS bit per projected sample, and adds the projected
change back along the same direction.  Per block the direction has unit norm,
so the projected host keeps the host variance while the host-domain
watermark power is the projected-domain power divided by tau.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .scs import ScsParams, delta_for_dwr, scs_embed, scs_extract
from .signals import Key, check_bits, check_signal

__all__ = [
    "SpreadParams",
    "StScsParams",
    "stscs_params_for_dwr",
    "spread_signs",
    "spread_project",
    "stscs_embed",
    "stscs_extract",
    "stscs_theoretical_pdf",
]


@dataclass(frozen=True)
class SpreadParams:
    """Spreading factor and the key for the sign direction."""

    tau: int
    key: Key

    def __post_init__(self):
        if not (isinstance(self.tau, (int, np.integer)) and self.tau >= 1):
            raise ParameterError(f"tau must be an integer >= 1, got {self.tau}")


@dataclass(frozen=True)
class StScsParams:
    """Spread transform wrapped around an SCS embedder in the projected domain."""

    spread: SpreadParams
    scs: ScsParams


def stscs_params_for_dwr(
    alpha: float,
    dwr_db: float,
    tau: int,
    sigma_s: float,
    key: Key,
    dithered: bool = True,
) -> StScsParams:
    """Build ST-SCS parameters with the projected-domain step chosen so the
    host-domain DWR is the stated one (projected DWR = DWR - 10*log10(tau))."""
    dwr_tau = dwr_db - 10.0 * math.log10(tau)
    delta = delta_for_dwr(dwr_tau, sigma_s, alpha)
    return StScsParams(
        spread=SpreadParams(tau=int(tau), key=key.child("spread")),
        scs=ScsParams(alpha=alpha, delta=delta, key=key.child("scs"), dithered=dithered),
    )


def spread_signs(p: SpreadParams, n: int) -> np.ndarray:
    """Keyed spreading direction: +-1/sqrt(tau) per host sample."""
    if n < 1:
        raise ParameterError("sign stream length must be >= 1")
    rademacher = p.key.stream("spread-signs").integers(0, 2, int(n)) * 2 - 1
    return rademacher / math.sqrt(p.tau)


def _blocks(s: np.ndarray, tau: int) -> np.ndarray:
    if s.size % tau != 0:
        raise ParameterError(f"signal length {s.size} is not divisible by tau={tau}")
    return s.reshape(-1, tau)


def spread_project(s, p: SpreadParams) -> np.ndarray:
    """Per-block inner product with the keyed direction (length G/tau)."""
    s = check_signal(s)
    t = spread_signs(p, s.size)
    return np.sum(_blocks(s, p.tau) * _blocks(t, p.tau), axis=1)


def stscs_embed(s, bits, p: StScsParams) -> np.ndarray:
    """Project, SCS-embed one bit per projected sample, add the change back."""
    s = check_signal(s)
    tau = p.spread.tau
    if s.size % tau != 0:
        raise ParameterError(f"signal length {s.size} is not divisible by tau={tau}")
    bits = check_bits(bits, expected_len=s.size // tau)
    t = spread_signs(p.spread, s.size)
    s_st = np.sum(_blocks(s, tau) * _blocks(t, tau), axis=1)
    x_st = scs_embed(s_st, bits, p.scs)
    return s + ((x_st - s_st)[:, None] * _blocks(t, tau)).ravel()


def stscs_extract(y, p: StScsParams) -> np.ndarray:
    """Project with the same keyed direction, then extract in the projected domain."""
    y = check_signal(y)
    return scs_extract(spread_project(y, p.spread), p.scs)


def stscs_theoretical_pdf(x, p: StScsParams, host_pdf, sigma_s: float):
    """Analytic per-sample stego density of ST-SCS with an undithered inner SCS.

    One sample S of a block couples to the rest of its block only through
    Y = sum of the other tau-1 signed samples, which for a Gaussian host is
    N(0, (tau-1)*sigma_s^2/tau).  Marginalizing the sample's sign t over
    +-1/sqrt(tau), the bit m over {0, 1}, the codeword u over the m coset and
    Y by quadrature gives, with a = (tau - alpha)/tau:

        p_X(x) = 1/(4a) * sum_{m,t,u} integral over the window
                 {y : |x - tau*t*(u - y)| <= a*delta*sqrt(tau)/2}
                 of host_pdf((x - alpha*(u - y)*t)/a) * p_Y(y) dy

    which in y-space is an interval of width a*delta centered at
    u - x/(tau*t).  Requires tau >= 2 (tau = 1 is plain SCS) and alpha < 1.
    """
    tau = p.spread.tau
    alpha = p.scs.alpha
    delta = p.scs.delta
    if tau < 2:
        raise ParameterError("the ST-SCS density requires tau >= 2")
    if not (0.0 < alpha < 1.0):
        raise ParameterError("the ST-SCS density requires alpha in (0, 1)")
    if not (sigma_s > 0 and math.isfinite(sigma_s)):
        raise ParameterError("sigma_s must be a positive finite real")

    a = (tau - alpha) / tau
    sigma_y = sigma_s * math.sqrt((tau - 1) / tau)
    y_reach = 8.0 * sigma_y
    nodes, weights = np.polynomial.legendre.leggauss(32)

    def p_y(y):
        return np.exp(-0.5 * (y / sigma_y) ** 2) / (sigma_y * math.sqrt(2.0 * math.pi))

    xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
    out = np.zeros_like(xs)
    for i, xi in enumerate(xs):
        acc = 0.0
        for t in (1.0 / math.sqrt(tau), -1.0 / math.sqrt(tau)):
            center = xi / (tau * t)  # u - y sits near x/(tau*t) inside each window
            for m in (0, 1):
                coset_offset = m * delta / 2.0
                k_lo = math.floor((center - y_reach - a * delta / 2.0 - coset_offset) / delta)
                k_hi = math.ceil((center + y_reach + a * delta / 2.0 - coset_offset) / delta)
                u = np.arange(k_lo, k_hi + 1) * delta + coset_offset
                lo = np.maximum(u - center - a * delta / 2.0, -y_reach)
                hi = np.minimum(u - center + a * delta / 2.0, y_reach)
                keep = hi > lo
                if not np.any(keep):
                    continue
                u, lo, hi = u[keep], lo[keep], hi[keep]
                mid = 0.5 * (hi + lo)
                rad = 0.5 * (hi - lo)
                y = mid[:, None] + rad[:, None] * nodes[None, :]
                integrand = p_y(y) * host_pdf((xi - alpha * (u[:, None] - y) * t) / a)
                acc += float(np.sum(rad[:, None] * weights[None, :] * integrand))
        out[i] = acc / (4.0 * a)
    return float(out[0]) if np.ndim(x) == 0 else out
