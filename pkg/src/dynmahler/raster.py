"""Escape-time pictures of filled Julia sets, Julia boundaries and Multibrot sets.

Pixel ``(row, col)`` samples the point
``re = re_min (1 - s) + re_max s`` with ``s = col / (width - 1)`` and
``im = im_max (1 - t) + im_min t`` with ``t = row / (height - 1)``, so the
corners of the window are pixel centres and row 0 is the top edge.  Black
(0) marks bounded points, white (255) escaping ones.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import kernels
from .dynamics import escape_radius
from .poly import ZPoly, coeff_array


class Mode(str, enum.Enum):
    FILLED_JULIA = "filled"
    JULIA_BOUNDARY = "boundary"
    MULTIBROT = "multibrot"


@dataclass(frozen=True)
class RasterConfig:
    window: tuple = (-2.0, 2.0, -2.0, 2.0)
    width: int = 400
    height: int = 400
    max_iter: int = 200
    mode: Mode = Mode.FILLED_JULIA

    def __post_init__(self):
        re_min, re_max, im_min, im_max = (float(v) for v in self.window)
        object.__setattr__(self, "window", (re_min, re_max, im_min, im_max))
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.width < 1 or self.height < 1:
            raise ValueError("width and height must be positive")
        if not (re_min < re_max and im_min < im_max):
            raise ValueError("window must satisfy re_min < re_max and im_min < im_max")
        if self.max_iter < 1:
            raise ValueError("max_iter must be positive")


@dataclass(frozen=True)
class RasterImage:
    pixels: np.ndarray  # uint8, shape (height, width); 0 = bounded
    counts: np.ndarray  # escape step per pixel, max_iter when bounded
    config: RasterConfig


def _axis(lo, hi, n):
    if n == 1:
        return np.array([(lo + hi) / 2])
    s = np.arange(n) / (n - 1)
    return lo * (1 - s) + hi * s


def pixel_grid(cfg):
    """Complex coordinates of all pixel centres, shape (height, width)."""
    re_min, re_max, im_min, im_max = cfg.window
    re = _axis(re_min, re_max, cfg.width)
    im = _axis(im_max, im_min, cfg.height)
    return re[None, :] + 1j * im[:, None]


def render(target, cfg):
    """Render a Julia-type picture of ``target`` (a map) or Multibrot of degree ``target``.

    Examples
    --------
    >>> img = render(ZPoly((0, 0, 1)), RasterConfig((-1.5, 1.5, -1.5, 1.5), 31, 31, 100))
    >>> int(img.pixels[15, 15]), int(img.pixels[15, 29])
    (0, 255)
    """
    grid = pixel_grid(cfg)
    if cfg.mode is Mode.MULTIBROT:
        counts = kernels.multibrot_counts(int(target), grid, cfg.max_iter)
        bounded = counts >= cfg.max_iter
    else:
        counts = kernels.escape_counts(coeff_array(target), grid, cfg.max_iter, escape_radius(target))
        bounded = counts >= cfg.max_iter
        if cfg.mode is Mode.JULIA_BOUNDARY:
            bounded = bounded & _has_escaping_neighbour(bounded)
    pixels = np.where(bounded, 0, 255).astype(np.uint8)
    return RasterImage(pixels, counts.astype(np.int32), cfg)


def _has_escaping_neighbour(bounded):
    esc = ~bounded
    out = np.zeros_like(bounded)
    out[1:, :] |= esc[:-1, :]
    out[:-1, :] |= esc[1:, :]
    out[:, 1:] |= esc[:, :-1]
    out[:, :-1] |= esc[:, 1:]
    return out


def _write_bytes(target, data):
    """Write to a path or to an open binary file object."""
    if hasattr(target, "write"):
        target.write(data)
    else:
        Path(target).write_bytes(data)


def write_ppm(path, pixels):
    """Binary P6 file (path or binary file object); grayscale input is replicated to RGB."""
    px = np.asarray(pixels, dtype=np.uint8)
    if px.ndim == 2:
        px = np.repeat(px[:, :, None], 3, axis=2)
    h, w, _ = px.shape
    _write_bytes(path, f"P6\n{w} {h}\n255\n".encode("ascii") + np.ascontiguousarray(px).tobytes())


def write_pgm(path, counts, max_iter):
    """Binary P5 escape-time map: brightness grows with escape speed."""
    c = np.asarray(counts, dtype=float)
    gray = np.where(c >= max_iter, 0, 255 - np.round(200 * c / max_iter)).astype(np.uint8)
    h, w = gray.shape
    _write_bytes(path, f"P5\n{w} {h}\n255\n".encode("ascii") + np.ascontiguousarray(gray).tobytes())


def read_pnm(path):
    """Read back a binary P5/P6 file written by this module."""
    data = Path(path).read_bytes()
    magic, size, _maxval, rest = data.split(b"\n", 3)
    w, h = (int(v) for v in size.split())
    arr = np.frombuffer(rest, dtype=np.uint8)
    if magic == b"P6":
        return arr.reshape(h, w, 3)
    return arr.reshape(h, w)


# figure recipes: name -> (target, config); figure 3 of the source is a diagram
FIGURES = {
    "1a": (ZPoly((0, 0, 1)), RasterConfig((-1.5, 1.5, -1.5, 1.5), 600, 600, 200)),
    "1b": (ZPoly((-1, 0, 1)), RasterConfig((-2.0, 2.0, -1.2, 1.2), 800, 480, 300)),
    # the Julia set of z^2 + 3/10 is a Cantor set; a modest max_iter keeps it visible
    "1c": (ZPoly((Fraction(3, 10), 0, 1)), RasterConfig((-1.5, 1.5, -1.5, 1.5), 600, 600, 40)),
    "2": (ZPoly((1, -1, 0, 1)), RasterConfig((-2.0, 2.0, -2.0, 2.0), 600, 600, 300)),
    "4": (2, RasterConfig((-2.25, 0.75, -1.5, 1.5), 600, 600, 300, Mode.MULTIBROT)),
}
