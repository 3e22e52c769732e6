"""Active-warden attack channel: additive white Gaussian noise scaled by WNR.

The noise power is calibrated against the measured watermark power supplied
by the caller, not a nominal model, so the attack stays honest when a
scheme's actual distortion deviates from the uniform quantization-error
approximation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .signals import Key, check_signal

__all__ = ["AttackParams", "awgn_attack"]

NO_ATTACK = math.inf  # WNR sentinel: the warden leaves the signal untouched


@dataclass(frozen=True)
class AttackParams:
    wnr_db: float
    key: Key

    def __post_init__(self):
        if math.isnan(self.wnr_db) or self.wnr_db == -math.inf:
            raise ParameterError("wnr_db must be finite or +inf (no attack)")


def awgn_attack(x, watermark_power: float, p: AttackParams) -> np.ndarray:
    """y = x + n with noise power watermark_power / 10**(wnr/10), keyed and deterministic."""
    x = check_signal(x)
    if not (watermark_power > 0 and math.isfinite(watermark_power)):
        raise ParameterError("watermark_power must be a positive finite real")
    if math.isinf(p.wnr_db):
        return x.copy()
    sigma_n = math.sqrt(watermark_power * 10.0 ** (-p.wnr_db / 10.0))
    return x + p.key.stream("noise").normal(0.0, sigma_n, x.size)
