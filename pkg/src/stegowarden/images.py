"""Grayscale PGM ingestion so the real-image experiments can run on pixels.

Only Netpbm PGM (ASCII P2 and binary P5, maxval <= 255) is supported; pixels
are lifted to mean-centered float signals for embedding and written back with
banker's rounding and clamping to [0, 255].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, PgmFormatError
from .signals import check_signal

__all__ = ["GrayImage", "load_pgm", "save_pgm", "image_to_signal", "signal_to_image"]


@dataclass(frozen=True)
class GrayImage:
    width: int
    height: int
    pixels: np.ndarray  # (height, width) uint8, row-major

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ParameterError("image dimensions must be positive")
        if self.pixels.shape != (self.height, self.width):
            raise ParameterError("pixel buffer does not match the stated dimensions")
        if self.pixels.dtype != np.uint8:
            raise ParameterError("pixels must be uint8 luminance values")


def _read_tokens(data: bytes, count: int, pos: int) -> tuple[list[bytes], int]:
    """Read whitespace-separated header tokens, skipping '#' comments."""
    tokens = []
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos : pos + 1].isspace():
            pos += 1
        if pos >= n:
            raise PgmFormatError("malformed header: unexpected end of file")
        if data[pos : pos + 1] == b"#":
            while pos < n and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < n and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
            pos += 1
        tokens.append(data[start:pos])
    return tokens, pos


def load_pgm(path) -> GrayImage:
    """Parse a P2/P5 PGM file with maxval <= 255."""
    with open(path, "rb") as fh:
        data = fh.read()
    (magic,), pos = _read_tokens(data, 1, 0)
    if magic not in (b"P2", b"P5"):
        raise PgmFormatError(f"malformed header: unsupported magic {magic!r}")
    fields, pos = _read_tokens(data, 3, pos)
    try:
        width, height, maxval = (int(t) for t in fields)
    except ValueError as exc:
        raise PgmFormatError(f"malformed header: non-numeric size field {fields!r}") from exc
    if width < 1 or height < 1:
        raise PgmFormatError("malformed header: non-positive dimensions")
    if not (0 < maxval <= 255):
        raise PgmFormatError(f"unsupported maxval {maxval}, only 8-bit images are handled")
    n_px = width * height
    if magic == b"P5":
        pos += 1  # exactly one whitespace byte separates maxval from the payload
        payload = data[pos : pos + n_px]
        if len(payload) < n_px:
            raise PgmFormatError(f"truncated payload: expected {n_px} bytes, got {len(payload)}")
        pixels = np.frombuffer(payload, dtype=np.uint8, count=n_px)
    else:
        try:
            tokens, _ = _read_tokens(data, n_px, pos)
        except PgmFormatError as exc:
            raise PgmFormatError("truncated payload: not enough ASCII samples") from exc
        pixels = np.array([int(t) for t in tokens], dtype=np.int64)
        if pixels.min() < 0 or pixels.max() > maxval:
            raise PgmFormatError("sample value outside [0, maxval]")
        pixels = pixels.astype(np.uint8)
    return GrayImage(width=width, height=height, pixels=pixels.reshape(height, width).copy())


def save_pgm(img: GrayImage, path) -> None:
    """Write a binary (P5) PGM with maxval 255."""
    with open(path, "wb") as fh:
        fh.write(f"P5\n{img.width} {img.height}\n255\n".encode())
        fh.write(img.pixels.tobytes())


def image_to_signal(img: GrayImage) -> tuple[np.ndarray, float]:
    """Raster-order lift to reals, mean-centered.  Returns (signal, mean)."""
    flat = img.pixels.astype(np.float64).ravel()
    mean = float(flat.mean())
    return flat - mean, mean


def signal_to_image(sig, width: int, height: int, mean: float) -> GrayImage:
    """Inverse lift: add the mean back, clamp to [0, 255], round half to even."""
    arr = check_signal(sig)
    if arr.size != width * height:
        raise ParameterError(f"signal length {arr.size} does not match {width}x{height}")
    px = np.clip(np.round(arr + mean), 0, 255).astype(np.uint8)
    return GrayImage(width=int(width), height=int(height), pixels=px.reshape(height, width))


def clamped_fraction(sig, mean: float) -> float:
    """Fraction of samples that the inverse lift would clamp at 0 or 255."""
    arr = check_signal(sig)
    v = np.round(arr + mean)
    return float(np.mean((v < 0) | (v > 255)))
