"""Uniform handle over the three stego-systems for sweeps and estimators.

A SchemeSpec is a recipe (scheme name, alpha, DWR, tau, trellis depth); the
concrete parameters are built per (sigma_s, key) so that grid sweeps can vary
alpha or DWR while reusing common random numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ParameterError
from .scs import ScsParams, delta_for_dwr, scs_embed, scs_extract
from .signals import Key, check_bits, check_signal
from .spread import StScsParams, stscs_embed, stscs_extract, stscs_params_for_dwr
from .tcq import TcqParams, build_trellis, tcq_embed, tcq_extract

__all__ = ["SCHEME_NAMES", "SchemeSpec"]

SCHEME_NAMES = ("scs", "tcq", "stscs")


@dataclass(frozen=True)
class SchemeSpec:
    name: str
    alpha: float
    dwr_db: float
    tau: int = 2  # stscs only
    r: int = 6  # tcq only
    dithered: bool = True  # scs / stscs messaging path

    def __post_init__(self):
        if self.name not in SCHEME_NAMES:
            raise ParameterError(f"unknown scheme {self.name!r}, expected one of {SCHEME_NAMES}")
        if not (0.0 < self.alpha <= 1.0):
            raise ParameterError(f"alpha must be in (0, 1], got {self.alpha}")
        if not math.isfinite(self.dwr_db):
            raise ParameterError("dwr_db must be finite")

    @property
    def block(self) -> int:
        """Host samples consumed per message bit."""
        return self.tau if self.name == "stscs" else 1

    def with_alpha(self, alpha: float) -> "SchemeSpec":
        return replace(self, alpha=alpha)

    def build_params(self, sigma_s: float, key: Key):
        if self.name == "scs":
            return ScsParams(
                alpha=self.alpha,
                delta=delta_for_dwr(self.dwr_db, sigma_s, self.alpha),
                key=key.child("scs"),
                dithered=self.dithered,
            )
        if self.name == "tcq":
            return TcqParams(
                alpha=self.alpha,
                delta=delta_for_dwr(self.dwr_db, sigma_s, self.alpha),
                trellis=build_trellis(self.r),
            )
        return stscs_params_for_dwr(
            self.alpha, self.dwr_db, self.tau, sigma_s, key, dithered=self.dithered
        )

    def embed(self, s, bits, params) -> np.ndarray:
        if self.name == "scs":
            return scs_embed(s, bits, params)
        if self.name == "tcq":
            return tcq_embed(s, bits, params)
        return stscs_embed(s, bits, params)

    def extract(self, y, params) -> np.ndarray:
        if self.name == "scs":
            return scs_extract(y, params)
        if self.name == "tcq":
            return tcq_extract(y, params)
        return stscs_extract(y, params)

    def n_bits(self, host_len: int) -> int:
        if host_len % self.block != 0:
            raise ParameterError(f"host length {host_len} not divisible by block {self.block}")
        return host_len // self.block
