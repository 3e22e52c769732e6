"""Empirical densities, Kullback-Leibler detectability, capacity and BER.

Detectability is the KL distance, in bits, between binned densities of the
stego and cover signals, smoothed by a small epsilon and renormalized so the
estimate is finite and zero only for identical histograms.  Capacity comes in
two flavors: a Monte-Carlo mutual-information estimate on the dither-removed
residual statistic (SCS and ST-SCS, where that statistic is sufficient) and a
binary-symmetric-channel lower bound 1 - h2(BER) through the full
embed/attack/extract chain (all schemes, the only option for TCQ).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ParameterError
from .lattice import mod_residual
from .scs import scs_dither
from .schemes import SchemeSpec
from .signals import Key, check_bits, check_signal, empirical_power, gen_gaussian_host, random_bits
from .spread import spread_project
from .warden import AttackParams, awgn_attack

__all__ = [
    "Histogram",
    "KldReport",
    "CapacityEstimate",
    "KLD_BINS",
    "KLD_SUPPORT_SIGMAS",
    "build_histogram",
    "default_epsilon",
    "kld",
    "kld_noise_floor",
    "binary_entropy",
    "mutual_information_binary",
    "embed_and_attack",
    "estimate_capacity_mi",
    "estimate_capacity_ber",
    "measure_ber",
    "optimize_alpha",
    "scheme_kld",
    "kld_derivative_alpha",
]

# common support and resolution for every KLD comparison, so numbers are comparable
KLD_BINS = 200
KLD_SUPPORT_SIGMAS = 5.0
MI_BINS = 256


@dataclass(frozen=True)
class Histogram:
    """Binned empirical density with explicit support; mass sums to one."""

    lo: float
    hi: float
    mass: np.ndarray

    def __post_init__(self):
        if not (self.hi > self.lo):
            raise ParameterError("histogram support must satisfy hi > lo")
        if self.mass.ndim != 1 or self.mass.size < 2:
            raise ParameterError("histogram needs at least 2 bins")
        if np.any(self.mass < 0):
            raise ParameterError("histogram mass must be nonnegative")
        if abs(float(self.mass.sum()) - 1.0) > 1e-12:
            raise ParameterError("histogram mass must sum to 1")

    @property
    def bins(self) -> int:
        return self.mass.size

    @property
    def bin_width(self) -> float:
        return (self.hi - self.lo) / self.bins

    def centers(self) -> np.ndarray:
        return self.lo + (np.arange(self.bins) + 0.5) * self.bin_width

    def density(self) -> np.ndarray:
        return self.mass / self.bin_width


@dataclass(frozen=True)
class KldReport:
    kld_bits: float
    bins: int
    epsilon: float


@dataclass(frozen=True)
class CapacityEstimate:
    bits_per_sample: float
    method: str
    trials: int


def build_histogram(sig, lo: float, hi: float, bins: int) -> Histogram:
    """Normalized bin masses; samples outside [lo, hi) are clamped to the edge bins."""
    if not (hi > lo):
        raise ParameterError("need hi > lo")
    if bins < 2:
        raise ParameterError("need at least 2 bins")
    arr = check_signal(sig)
    clipped = np.clip(arr, lo, np.nextafter(hi, lo))
    counts, _ = np.histogram(clipped, bins=bins, range=(lo, hi))
    return Histogram(lo=float(lo), hi=float(hi), mass=counts / counts.sum())


def default_epsilon(n_samples: int) -> float:
    """Smoothing constant used in KLD reports: one tenth of a count."""
    if n_samples < 1:
        raise ParameterError("n_samples must be >= 1")
    return 1.0 / (10.0 * n_samples)


def kld(p_stego: Histogram, p_cover: Histogram, epsilon: float) -> KldReport:
    """D(stego || cover) in bits on epsilon-smoothed, renormalized histograms."""
    if epsilon <= 0:
        raise ParameterError("epsilon must be positive")
    same = (
        p_stego.bins == p_cover.bins
        and math.isclose(p_stego.lo, p_cover.lo, rel_tol=1e-12, abs_tol=1e-12)
        and math.isclose(p_stego.hi, p_cover.hi, rel_tol=1e-12, abs_tol=1e-12)
    )
    if not same:
        raise ParameterError("histograms must share support and bin count")
    px = p_stego.mass + epsilon
    px /= px.sum()
    ps = p_cover.mass + epsilon
    ps /= ps.sum()
    bits = float(np.sum(px * np.log2(px / ps)))
    return KldReport(kld_bits=max(bits, 0.0), bins=p_stego.bins, epsilon=float(epsilon))


def kld_noise_floor(g: int, key: Key, sigma_s: float = 1.0, bins: int = KLD_BINS) -> float:
    """Finite-sample KLD between two independent same-law host draws."""
    lim = KLD_SUPPORT_SIGMAS * sigma_s
    a = gen_gaussian_host(g, sigma_s, key.child("floor-a"))
    b = gen_gaussian_host(g, sigma_s, key.child("floor-b"))
    eps = default_epsilon(g)
    return kld(build_histogram(a, -lim, lim, bins), build_histogram(b, -lim, lim, bins), eps).kld_bits


def binary_entropy(p: float) -> float:
    if not (0.0 <= p <= 1.0):
        raise ParameterError("probability out of [0, 1]")
    if p in (0.0, 1.0):
        return 0.0
    return float(-p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p))


def _entropy_bits(counts: np.ndarray) -> float:
    n = counts.sum()
    p = counts[counts > 0] / n
    return float(-np.sum(p * np.log2(p)))


def mutual_information_binary(bits, values, lo: float, hi: float, bins: int = MI_BINS) -> float:
    """Plug-in I(M; V) in bits from class-conditional histograms of V."""
    bits = check_bits(bits)
    values = check_signal(values)
    if bits.size != values.size:
        raise ParameterError("bits and values must have equal length")
    edges = np.linspace(lo, hi, bins + 1)
    clipped = np.clip(values, lo, np.nextafter(hi, lo))
    c0, _ = np.histogram(clipped[bits == 0], bins=edges)
    c1, _ = np.histogram(clipped[bits == 1], bins=edges)
    n0, n1 = c0.sum(), c1.sum()
    if n0 == 0 or n1 == 0:
        raise ParameterError("both message classes must be populated")
    n = n0 + n1
    h_v = _entropy_bits(c0 + c1)
    h_v_m = (n0 / n) * _entropy_bits(c0) + (n1 / n) * _entropy_bits(c1)
    return max(h_v - h_v_m, 0.0)


def embed_and_attack(spec: SchemeSpec, n_bits: int, wnr_db: float, key: Key, sigma_s: float = 1.0):
    """One end-to-end trial: host, message, embedding, measured-power AWGN attack.

    Returns (host, stego, attacked, bits, params).  The attack noise level is
    set against the measured watermark power, not the nominal model.
    """
    g = n_bits * spec.block
    s = gen_gaussian_host(g, sigma_s, key)
    bits = random_bits(key, n_bits)
    params = spec.build_params(sigma_s, key)
    x = spec.embed(s, bits, params)
    sigma_w2 = empirical_power(x - s)
    y = awgn_attack(x, sigma_w2, AttackParams(wnr_db=wnr_db, key=key))
    return s, x, y, bits, params


def _residual_statistic(spec: SchemeSpec, y: np.ndarray, params) -> tuple[np.ndarray, float]:
    """Dither-removed centered residual in the (projected) embedding domain."""
    if spec.name == "scs":
        delta = params.delta
        v = mod_residual(y - scs_dither(params, y.size), delta)
    elif spec.name == "stscs":
        delta = params.scs.delta
        proj = spread_project(y, params.spread)
        v = mod_residual(proj - scs_dither(params.scs, proj.size), delta)
    else:
        raise ParameterError("no per-sample residual statistic for scheme " + spec.name)
    return v, delta


def estimate_capacity_mi(
    spec: SchemeSpec, wnr_db: float, trials: int, key: Key, sigma_s: float = 1.0
) -> CapacityEstimate:
    """Monte-Carlo I(M; V) on the residual statistic, per host sample.

    For ST-SCS the mutual information is measured in the projected domain and
    divided by tau.  SCS and ST-SCS only.
    """
    if trials < 10**5:
        raise ParameterError("mutual-information estimate needs at least 1e5 trials")
    _, _, y, bits, params = embed_and_attack(spec, int(trials), wnr_db, key, sigma_s)
    v, delta = _residual_statistic(spec, y, params)
    mi = mutual_information_binary(bits, v, -delta / 2.0, delta / 2.0, MI_BINS)
    return CapacityEstimate(bits_per_sample=mi / spec.block, method="mi", trials=int(trials))


def estimate_capacity_ber(
    spec: SchemeSpec, wnr_db: float, trials: int, key: Key, sigma_s: float = 1.0
) -> CapacityEstimate:
    """BSC lower bound 1 - h2(BER) through embed, attack and extract."""
    if trials < 10**4:
        raise ParameterError("BER estimate needs at least 1e4 bits")
    _, _, y, bits, params = embed_and_attack(spec, int(trials), wnr_db, key, sigma_s)
    decoded = spec.extract(y, params)
    ber = float(np.mean(decoded != bits))
    cap = 1.0 - binary_entropy(min(ber, 1.0 - ber))
    cap = min(max(cap, 0.0), 1.0) / spec.block
    return CapacityEstimate(bits_per_sample=cap, method="bsc", trials=int(trials))


def measure_ber(spec: SchemeSpec, wnr_db: float, trials: int, key: Key, sigma_s: float = 1.0) -> float:
    _, _, y, bits, params = embed_and_attack(spec, int(trials), wnr_db, key, sigma_s)
    return float(np.mean(spec.extract(y, params) != bits))


def optimize_alpha(
    spec: SchemeSpec,
    wnr_db: float,
    grid,
    trials: int,
    key: Key,
    sigma_s: float = 1.0,
    method: str | None = None,
) -> tuple[float, CapacityEstimate]:
    """Grid search for the Costa factor maximizing capacity; ties pick the smaller alpha.

    Common random numbers: every alpha is evaluated under the same key.
    """
    grid = sorted(float(a) for a in np.atleast_1d(grid))
    if not grid:
        raise ParameterError("alpha grid must be non-empty")
    if any(not (0.0 < a <= 1.0) for a in grid):
        raise ParameterError("alpha grid values must lie in (0, 1]")
    if method is None:
        method = "bsc" if spec.name == "tcq" else "mi"
    estimator = estimate_capacity_mi if method == "mi" else estimate_capacity_ber
    best_alpha, best = None, None
    for a in grid:
        est = estimator(spec.with_alpha(a), wnr_db, trials, key, sigma_s)
        if best is None or est.bits_per_sample > best.bits_per_sample:
            best_alpha, best = a, est
    return best_alpha, best


def scheme_kld(
    spec: SchemeSpec,
    g: int,
    key: Key,
    sigma_s: float = 1.0,
    bins: int = KLD_BINS,
    support_sigmas: float = KLD_SUPPORT_SIGMAS,
) -> KldReport:
    """Detectability of an embedding: D(stego || cover) before any attack.

    Density analyses model the undithered configuration (a keyed per-sample
    dither would smear the pooled density and hide exactly the codebook
    artifacts this metric is meant to expose), so the messaging dither is
    switched off here.
    """
    spec = replace(spec, dithered=False)
    n_bits = spec.n_bits(int(g))
    s = gen_gaussian_host(int(g), sigma_s, key)
    bits = random_bits(key, n_bits)
    params = spec.build_params(sigma_s, key)
    x = spec.embed(s, bits, params)
    lim = support_sigmas * sigma_s
    eps = default_epsilon(int(g))
    return kld(
        build_histogram(x, -lim, lim, bins),
        build_histogram(s, -lim, lim, bins),
        eps,
    )


def kld_derivative_alpha(
    spec: SchemeSpec,
    alpha: float,
    h: float,
    g: int,
    key: Key,
    sigma_s: float = 1.0,
    bins: int = KLD_BINS,
) -> float:
    """Central finite difference of the Monte-Carlo KLD with respect to alpha.

    Both sides reuse the same key (common random numbers), which cancels most
    of the Monte-Carlo variance of the difference.
    """
    if not (0.0 < alpha - h and alpha + h < 1.0):
        raise ParameterError("alpha +- h must stay inside (0, 1)")
    hi = scheme_kld(spec.with_alpha(alpha + h), g, key, sigma_s, bins).kld_bits
    lo = scheme_kld(spec.with_alpha(alpha - h), g, key, sigma_s, bins).kld_bits
    return (hi - lo) / (2.0 * h)
