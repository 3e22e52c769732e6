"""Keyed randomness, Gaussian host generation and dB ratio arithmetic.

Signals are plain 1-d float64 numpy arrays.  All randomness flows from a
single :class:`Key` seed expanded into named substreams (host, dither,
spreading signs, message bits, attack noise) so that experiments are
reproducible and the streams are mutually independent.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

__all__ = [
    "Key",
    "check_signal",
    "check_bits",
    "gen_gaussian_host",
    "random_bits",
    "empirical_power",
    "db_to_linear",
    "linear_to_db",
]


@dataclass(frozen=True)
class Key:
    """Root of all keyed randomness.

    Equal seeds produce bit-identical streams.  ``stream`` gives a named,
    position-indexed generator; ``child`` derives an independent sub-key so
    that parallel workers or grid points never share a stream.
    """

    seed: int

    def __post_init__(self):
        if not isinstance(self.seed, (int, np.integer)):
            raise ParameterError(f"key seed must be an integer, got {type(self.seed).__name__}")
        if not (0 <= int(self.seed) < 2**64):
            raise ParameterError("key seed must fit in 64 unsigned bits")

    def stream(self, name: str, index: int = 0) -> np.random.Generator:
        """Deterministic generator for the named substream."""
        ss = np.random.SeedSequence([int(self.seed), 0, zlib.crc32(name.encode()), int(index)])
        return np.random.default_rng(ss)

    def child(self, name: str, index: int = 0) -> "Key":
        """Derived key, independent of every stream of this key."""
        ss = np.random.SeedSequence([int(self.seed), 1, zlib.crc32(name.encode()), int(index)])
        return Key(int(ss.generate_state(1, np.uint64)[0]))


def check_signal(x, min_len: int = 1) -> np.ndarray:
    """Validate and return a signal as a 1-d float64 array."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise ParameterError(f"signal must be 1-d, got shape {arr.shape}")
    if arr.size < min_len:
        raise ParameterError(f"signal length {arr.size} below minimum {min_len}")
    if not np.all(np.isfinite(arr)):
        raise ParameterError("signal contains NaN or Inf samples")
    return arr


def check_bits(bits, expected_len: int | None = None) -> np.ndarray:
    """Validate a 0/1 message and return it as a uint8 array."""
    arr = np.asarray(bits)
    if arr.ndim != 1:
        raise ParameterError(f"message must be 1-d, got shape {arr.shape}")
    if not np.isin(arr, (0, 1)).all():
        raise ParameterError("message entries must be 0 or 1")
    if expected_len is not None and arr.size != expected_len:
        raise ParameterError(f"message length {arr.size} does not match expected {expected_len}")
    return arr.astype(np.uint8)


def gen_gaussian_host(g: int, sigma_s: float, key: Key) -> np.ndarray:
    """i.i.d. zero-mean Gaussian host samples, deterministic per key."""
    if g < 1:
        raise ParameterError("host length must be >= 1")
    if not (sigma_s > 0 and math.isfinite(sigma_s)):
        raise ParameterError("sigma_s must be a positive finite real")
    return key.stream("host").normal(0.0, sigma_s, int(g))


def random_bits(key: Key, n: int, index: int = 0) -> np.ndarray:
    """Keyed equiprobable message bits."""
    if n < 1:
        raise ParameterError("bit count must be >= 1")
    return key.stream("message", index).integers(0, 2, int(n), dtype=np.uint8)


def empirical_power(sig) -> float:
    """Mean squared sample value."""
    arr = check_signal(sig)
    return float(np.mean(np.square(arr)))


def db_to_linear(db: float) -> float:
    if not math.isfinite(db):
        raise ParameterError("dB value must be finite")
    return 10.0 ** (db / 10.0)


def linear_to_db(ratio: float) -> float:
    if not (ratio > 0 and math.isfinite(ratio)):
        raise ParameterError("linear ratio must be a positive finite real")
    return 10.0 * math.log10(ratio)
