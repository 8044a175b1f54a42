"""Grayscale image I/O and geometry.

Images are plain 2-D float64 arrays of shape (height, width), row-major,
with intensities nominally in [0, 255]. Integer file formats are widened
to float on load so every downstream computation runs in real arithmetic.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"

# ITU-R BT.601 luma weights for RGB -> gray conversion.
LUMA_WEIGHTS = (0.299, 0.587, 0.114)


class FormatError(ValueError):
    """Raised for unsupported or malformed image/feature file contents."""


def as_gray_image(arr) -> np.ndarray:
    """Validate and convert `arr` to a 2-D float64 image array."""
    img = np.asarray(arr, dtype=np.float64)
    if img.ndim != 2 or img.shape[0] < 1 or img.shape[1] < 1:
        raise ValueError(f"expected a 2-D image with positive size, got shape {img.shape}")
    return img


def rgb_to_gray(rgb: np.ndarray) -> np.ndarray:
    """Convert an (..., 3) RGB array to luma (0.299 R + 0.587 G + 0.114 B)."""
    rgb = np.asarray(rgb, dtype=np.float64)
    if rgb.shape[-1] != 3:
        raise ValueError(f"expected 3 channels in the last axis, got shape {rgb.shape}")
    wr, wg, wb = LUMA_WEIGHTS
    return wr * rgb[..., 0] + wg * rgb[..., 1] + wb * rgb[..., 2]


def load_image(path) -> np.ndarray:
    """Load a PGM (P2/P5) or PNG file as a 2-D float64 image.

    RGB inputs are reduced to luma; grayscale inputs are widened to float
    unchanged. The format is detected from the file contents, not the
    extension.

    Raises
    ------
    OSError
        If the file cannot be read.
    FormatError
        If the contents are not a supported PGM or PNG image.
    """
    path = Path(path)
    with open(path, "rb") as fh:
        head = fh.read(8)
    if head[:2] in (b"P2", b"P5"):
        return read_pgm(path)
    if head == PNG_MAGIC:
        return _read_png(path)
    raise FormatError(f"{path}: not a PGM (P2/P5) or PNG file")


def _read_png(path: Path) -> np.ndarray:
    from PIL import Image

    with Image.open(path) as im:
        if im.mode in ("L", "I", "I;16", "F"):
            return np.asarray(im, dtype=np.float64)
        rgb = np.asarray(im.convert("RGB"), dtype=np.float64)
    return rgb_to_gray(rgb)


def _pgm_header_tokens(data: bytes, count: int) -> tuple[list[int], int]:
    """Read `count` whitespace-separated header integers, skipping # comments.

    Returns the values and the offset one byte past the final separator.
    """
    tokens: list[int] = []
    pos = 0
    while len(tokens) < count:
        if pos >= len(data):
            raise FormatError("truncated PGM header")
        ch = data[pos : pos + 1]
        if ch == b"#":
            eol = data.find(b"\n", pos)
            if eol < 0:
                raise FormatError("truncated PGM comment")
            pos = eol + 1
        elif ch.isspace():
            pos += 1
        else:
            m = re.match(rb"\d+", data[pos:])
            if not m:
                raise FormatError(f"bad PGM header token at byte {pos}")
            tokens.append(int(m.group(0)))
            pos += m.end()
    return tokens, pos


def read_pgm(path) -> np.ndarray:
    """Read a PGM file (binary P5 or ASCII P2) as a float64 image."""
    data = Path(path).read_bytes()
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise FormatError(f"{path}: not a PGM file (magic {magic!r})")
    (width, height, maxval), pos = _pgm_header_tokens(data[2:], 3)
    pos += 2
    if width < 1 or height < 1 or not 0 < maxval < 65536:
        raise FormatError(f"{path}: bad PGM dimensions {width}x{height} maxval {maxval}")
    n = width * height
    if magic == b"P2":
        values = np.array(data[pos:].split()[:n], dtype=np.float64)
        if values.size != n:
            raise FormatError(f"{path}: expected {n} samples, found {values.size}")
    else:
        # P5: a single whitespace byte separates header and raster.
        pos += 1
        dtype = np.dtype(">u2" if maxval > 255 else "u1")
        raster = data[pos : pos + n * dtype.itemsize]
        if len(raster) != n * dtype.itemsize:
            raise FormatError(f"{path}: truncated P5 raster")
        values = np.frombuffer(raster, dtype=dtype).astype(np.float64)
    return values.reshape(height, width)


def write_pgm(path, img: np.ndarray) -> None:
    """Write an image as binary PGM (P5), rounding and clipping to 0..255."""
    img = as_gray_image(img)
    height, width = img.shape
    samples = np.clip(np.rint(img), 0, 255).astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
        fh.write(samples.tobytes())


def pad(img: np.ndarray, margin: int, mode: str = "replicate") -> np.ndarray:
    """Grow the image by `margin` pixels on every side, replicating edges."""
    if margin < 0:
        raise ValueError(f"margin must be >= 0, got {margin}")
    if mode != "replicate":
        raise ValueError(f"unsupported border mode {mode!r}")
    img = as_gray_image(img)
    if margin == 0:
        return img.copy()
    return np.pad(img, margin, mode="edge")


def _source_coords(n_out: int, n_in: int) -> np.ndarray:
    """Map output indices to fractional source indices (endpoints aligned)."""
    if n_out == 1:
        return np.full(1, (n_in - 1) / 2.0)
    return np.arange(n_out, dtype=np.float64) * ((n_in - 1) / (n_out - 1))


def resize(img: np.ndarray, size: tuple[int, int], interpolation: str = "bilinear") -> np.ndarray:
    """Resample an image to `size` = (width, height).

    Parameters
    ----------
    img : ndarray
        2-D image.
    size : tuple
        Target (width, height), both >= 1.
    interpolation : str
        'bilinear' (default) or 'nearest'. Bilinear uses nested lerps, so a
        constant image stays exactly constant and identity targets return a
        bitwise-equal copy.
    """
    img = as_gray_image(img)
    width, height = int(size[0]), int(size[1])
    if width < 1 or height < 1:
        raise ValueError(f"target size must be >= 1, got {width}x{height}")
    if interpolation not in ("bilinear", "nearest"):
        raise ValueError(f"unknown interpolation {interpolation!r}")
    in_h, in_w = img.shape
    if (in_w, in_h) == (width, height):
        return img.copy()

    sx = _source_coords(width, in_w)
    sy = _source_coords(height, in_h)
    if interpolation == "nearest":
        ix = np.minimum(np.floor(sx + 0.5).astype(np.intp), in_w - 1)
        iy = np.minimum(np.floor(sy + 0.5).astype(np.intp), in_h - 1)
        return img[np.ix_(iy, ix)]

    x0 = np.minimum(np.floor(sx).astype(np.intp), in_w - 1)
    y0 = np.minimum(np.floor(sy).astype(np.intp), in_h - 1)
    x1 = np.minimum(x0 + 1, in_w - 1)
    y1 = np.minimum(y0 + 1, in_h - 1)
    fx = (sx - x0)[np.newaxis, :]
    fy = (sy - y0)[:, np.newaxis]

    top = img[np.ix_(y0, x0)]
    top = top + fx * (img[np.ix_(y0, x1)] - top)
    bot = img[np.ix_(y1, x0)]
    bot = bot + fx * (img[np.ix_(y1, x1)] - bot)
    return top + fy * (bot - top)
