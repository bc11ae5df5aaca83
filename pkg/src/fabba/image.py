"""RGB image handling for the compression demo: binary PPM (P6, maxval 255)
reading/writing and channel-planar flattening to a univariate series."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import TimeSeries

__all__ = ["ImageTensor", "flatten_image", "unflatten_image", "read_ppm", "write_ppm"]


@dataclass(frozen=True)
class ImageTensor:
    """An RGB image as a (height, width, 3) uint8 array."""

    width: int
    height: int
    pixels: np.ndarray

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError("image dimensions must be >= 1")
        arr = np.asarray(self.pixels, dtype=np.uint8)
        if arr.shape != (self.height, self.width, 3):
            raise ValueError("pixels must have shape (height, width, 3)")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "pixels", arr)

    @property
    def channels(self) -> int:
        return 3


def flatten_image(img: ImageTensor) -> TimeSeries:
    """Unfold the image channel-planar: all R values row-major, then G, then B."""
    planes = [img.pixels[:, :, c].ravel() for c in range(3)]
    return TimeSeries(np.concatenate(planes).astype(float))


def unflatten_image(series, width: int, height: int) -> ImageTensor:
    """Fold a series back into an image, rounding and clamping to 0..255.

    Accepts exactly ``width * height * 3`` values, or one extra trailing
    value (dropped) as produced by chain reconstructions.
    """
    vals = series.values if isinstance(series, TimeSeries) else np.asarray(series, dtype=float)
    expected = width * height * 3
    if vals.size == expected + 1:
        vals = vals[:-1]
    elif vals.size != expected:
        raise ValueError(
            f"series length {vals.size} does not match image size {expected} (or {expected + 1})"
        )
    clamped = np.clip(np.rint(vals), 0, 255).astype(np.uint8)
    planes = clamped.reshape(3, height, width)
    return ImageTensor(width=width, height=height, pixels=np.transpose(planes, (1, 2, 0)))


def _read_token(data: bytes, pos: int) -> tuple[bytes, int]:
    """Next whitespace-delimited header token, skipping '#' comments."""
    n = len(data)
    while pos < n:
        ch = data[pos : pos + 1]
        if ch == b"#":
            while pos < n and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif ch.isspace():
            pos += 1
        else:
            break
    start = pos
    while pos < n and not data[pos : pos + 1].isspace():
        pos += 1
    if start == pos:
        raise ValueError("malformed PPM header")
    return data[start:pos], pos


def read_ppm(path) -> ImageTensor:
    """Read a binary PPM file (magic P6, maxval 255)."""
    with open(path, "rb") as fh:
        data = fh.read()
    magic, pos = _read_token(data, 0)
    if magic != b"P6":
        if magic in (b"P1", b"P2", b"P3", b"P4", b"P5", b"P7"):
            raise ValueError("unsupported PPM variant")
        raise ValueError("malformed PPM header")
    try:
        w_tok, pos = _read_token(data, pos)
        h_tok, pos = _read_token(data, pos)
        max_tok, pos = _read_token(data, pos)
        width, height, maxval = int(w_tok), int(h_tok), int(max_tok)
    except ValueError as exc:
        raise ValueError("malformed PPM header") from exc
    if width < 1 or height < 1:
        raise ValueError("malformed PPM header")
    if maxval != 255:
        raise ValueError("unsupported maxval")
    pos += 1  # single whitespace byte separates the header from pixel data
    expected = width * height * 3
    raw = data[pos : pos + expected]
    if len(raw) < expected:
        raise ValueError("truncated PPM pixel data")
    pixels = np.frombuffer(raw, dtype=np.uint8).reshape(height, width, 3)
    return ImageTensor(width=width, height=height, pixels=pixels)


def write_ppm(img: ImageTensor, path) -> None:
    """Write a binary PPM file readable by read_ppm (byte-exact round trip)."""
    header = f"P6\n{img.width} {img.height}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(img.pixels.tobytes())
