"""Uniform scalar lattice: nearest-point quantization and centered residuals."""

from __future__ import annotations

import math

import numpy as np

from .errors import ParameterError

__all__ = ["check_delta", "quantize", "mod_residual"]


def check_delta(delta: float) -> float:
    if not (delta > 0 and math.isfinite(delta)):
        raise ParameterError("quantizer step delta must be a positive finite real")
    return float(delta)


def _as_array(v):
    arr = np.asarray(v, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ParameterError("quantizer input must be finite")
    return arr


def quantize(v, delta: float):
    """Nearest multiple of delta; exact half-way values round toward +inf.

    Accepts scalars or arrays and preserves the input's scalarness.
    """
    delta = check_delta(delta)
    arr = _as_array(v)
    q = np.floor(arr / delta + 0.5) * delta
    return float(q) if np.ndim(v) == 0 else q


def mod_residual(v, delta: float):
    """v minus its nearest lattice point, folded into [-delta/2, delta/2)."""
    delta = check_delta(delta)
    arr = _as_array(v)
    r = arr - np.floor(arr / delta + 0.5) * delta
    # guard against float rounding pushing a residual onto either edge
    r = np.where(r >= delta / 2, r - delta, r)
    r = np.where(r < -delta / 2, r + delta, r)
    return float(r) if np.ndim(v) == 0 else r
