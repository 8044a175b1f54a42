"""Ring geometry and per-pixel pattern encoders: LBP, LTP, LDP, HOLDP, AHOLDP.

Coordinate conventions, fixed once for the whole package:

* images are indexed ``img[y, x]`` with y growing downward;
* ring offsets are (dx, dy) pairs; index g = 0 sits East at (layer, 0) and
  indices advance counterclockwise in image terms (decreasing y first);
* bit p of every 8-bit code corresponds to ring/compass direction p, i.e.
  angle p * 45 degrees, East first, counterclockwise.

Directional encoders read Kirsch responses, not raw intensities. The
directional mean of layer n averages the 2n-1 ring samples at indices
``(n * i + j) mod 8n`` for ``j in [-n+1, n-1]``, so outer layers are
down-weighted relative to the center (the pyramidal multi-structure).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .image import as_gray_image, pad
from .kirsch import N_DIRECTIONS, kirsch_filter

PER_DIRECTION_PLANE = "per_direction_plane"
MAX_PLANE = "max_plane"
RESPONSE_SOURCES = (PER_DIRECTION_PLANE, MAX_PLANE)

PROMINENT = "prominent"
ADAPTIVE_MEDIAN = "adaptive_median"
MODES = (PROMINENT, ADAPTIVE_MEDIAN)


@dataclass(frozen=True)
class CodeConfig:
    """Configuration of the directional pattern family (LDP/HOLDP/AHOLDP).

    order
        Number of neighborhood layers n >= 1; order 1 with prominent mode
        is the conventional LDP.
    mode
        'prominent' sets the bits of the t top-ranked directional responses,
        'adaptive_median' thresholds the 8 responses against their median.
    t
        Rank threshold for prominent mode, 1..7 (ignored when adaptive).
    response_source
        Which filtered plane supplies ring samples: 'per_direction_plane'
        reads all samples of direction i from plane i (reduces exactly to
        LDP at layer 1); 'max_plane' reads from the pointwise maximum over
        the eight planes.
    """

    order: int = 1
    mode: str = PROMINENT
    t: int = 3
    response_source: str = PER_DIRECTION_PLANE

    def __post_init__(self):
        if self.order < 1:
            raise ValueError(f"order must be >= 1, got {self.order}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.mode == PROMINENT and not 1 <= self.t <= 7:
            raise ValueError(f"prominent-mode t must be in 1..7, got {self.t}")
        if self.response_source not in RESPONSE_SOURCES:
            raise ValueError(
                f"response_source must be one of {RESPONSE_SOURCES}, got {self.response_source!r}"
            )

    @property
    def descriptor_id(self) -> str:
        return "HOLDP" if self.mode == PROMINENT else "AHOLDP"

    def fingerprint(self) -> str:
        src = "" if self.response_source == PER_DIRECTION_PLANE else ",source=max_plane"
        if self.mode == PROMINENT:
            return f"HOLDP[order={self.order},t={self.t}{src}]"
        return f"AHOLDP[order={self.order}{src}]"


def ring_positions(layer: int) -> np.ndarray:
    """Ordered (dx, dy) offsets of the square ring at Chebyshev radius `layer`.

    The ring has 8*layer positions. Index 0 is East at (layer, 0); indices
    walk the ring counterclockwise, so index i*layer lies exactly on the
    compass direction i*45 degrees for i = 0..7.
    """
    if layer < 1:
        raise ValueError(f"layer must be >= 1, got {layer}")
    n = int(layer)
    offsets = np.empty((8 * n, 2), dtype=np.int64)
    for g in range(8 * n):
        if g <= n:  # right edge, upward
            x, y = n, -g
        elif g <= 3 * n:  # top edge, leftward
            x, y = 2 * n - g, -n
        elif g <= 5 * n:  # left edge, downward
            x, y = -n, g - 4 * n
        elif g <= 7 * n:  # bottom edge, rightward
            x, y = g - 6 * n, n
        else:  # right edge, back up to the start
            x, y = n, 8 * n - g
        offsets[g] = (x, y)
    return offsets


def ring_index_window(layer: int, direction: int) -> np.ndarray:
    """Ring indices feeding direction `direction` on `layer`.

    These are the 2*layer-1 circularly contiguous indices centered on the
    direction's corner sample: (layer*direction + j) mod 8*layer for
    j = -layer+1 .. layer-1.
    """
    if layer < 1:
        raise ValueError(f"layer must be >= 1, got {layer}")
    if not 0 <= direction < N_DIRECTIONS:
        raise ValueError(f"direction must be in 0..7, got {direction}")
    j = np.arange(-layer + 1, layer)
    return (layer * direction + j) % (8 * layer)


def _check_stack(stack: np.ndarray) -> np.ndarray:
    stack = np.asarray(stack, dtype=np.float64)
    if stack.ndim != 3 or stack.shape[0] != N_DIRECTIONS:
        raise ValueError(f"expected a response stack of shape (8, H, W), got {stack.shape}")
    return stack


def directional_responses(
    stack: np.ndarray,
    center: tuple[int, int],
    layer: int,
    source: str = PER_DIRECTION_PLANE,
) -> np.ndarray:
    """Eight directional mean edge responses of `layer` around one pixel.

    Parameters
    ----------
    stack : ndarray
        (8, H, W) Kirsch response stack.
    center : tuple
        (y, x) pixel position, at least `layer` pixels from every border.
    layer : int
        Neighborhood layer (ring radius), >= 1.
    source : str
        'per_direction_plane' or 'max_plane'.

    Returns
    -------
    ndarray
        The 8 means, entry i for compass direction i.
    """
    stack = _check_stack(stack)
    if source not in RESPONSE_SOURCES:
        raise ValueError(f"unknown response source {source!r}")
    if layer < 1:
        raise ValueError(f"layer must be >= 1, got {layer}")
    height, width = stack.shape[1:]
    y, x = center
    if not (layer <= y < height - layer and layer <= x < width - layer):
        raise ValueError(
            f"center {center} closer than layer {layer} to the border of {height}x{width} planes"
        )
    offsets = ring_positions(layer)
    shared = stack.max(axis=0) if source == MAX_PLANE else None
    means = np.empty(N_DIRECTIONS)
    for i in range(N_DIRECTIONS):
        plane = stack[i] if shared is None else shared
        acc = 0.0
        for g in ring_index_window(layer, i):
            dx, dy = offsets[g]
            acc += plane[y + dy, x + dx]
        means[i] = acc / (2 * layer - 1)
    return means


def _pack_direction_bits(bits: np.ndarray) -> np.ndarray:
    """Pack a boolean (8, ...) array into uint8 codes; bit i = direction i."""
    codes = np.zeros(bits.shape[1:], dtype=np.uint8)
    for i in range(N_DIRECTIONS):
        codes |= bits[i].astype(np.uint8) << i
    return codes


def holdp_codes(responses: np.ndarray, t: int) -> np.ndarray:
    """Prominent-direction codes for responses stacked along axis 0.

    Bit i is set iff responses[i] >= the t-th largest of the eight values.
    Ties at the threshold value set extra bits, mirroring f(0) = 1. t = 8
    (threshold at the minimum) is accepted and yields all-ones codes.
    """
    responses = np.asarray(responses, dtype=np.float64)
    if responses.shape[0] != N_DIRECTIONS:
        raise ValueError(f"expected 8 responses along axis 0, got shape {responses.shape}")
    if not 1 <= t <= 8:
        raise ValueError(f"t must be in 1..8, got {t}")
    threshold = np.sort(responses, axis=0)[N_DIRECTIONS - t]
    return _pack_direction_bits(responses >= threshold)


def holdp_code(responses, t: int) -> int:
    """8-bit code of one response vector: bits of the t top-ranked directions."""
    responses = np.asarray(responses, dtype=np.float64)
    if responses.shape != (N_DIRECTIONS,):
        raise ValueError(f"expected 8 responses, got shape {responses.shape}")
    return int(holdp_codes(responses[:, np.newaxis], t)[0])


def aholdp_codes(responses: np.ndarray) -> np.ndarray:
    """Adaptive codes: bit i set iff responses[i] >= the median of the eight.

    The median of 8 values is the mean of the 4th and 5th order statistics,
    so codes with pairwise-distinct responses always have 4 bits set.
    """
    responses = np.asarray(responses, dtype=np.float64)
    if responses.shape[0] != N_DIRECTIONS:
        raise ValueError(f"expected 8 responses along axis 0, got shape {responses.shape}")
    ordered = np.sort(responses, axis=0)
    median = (ordered[3] + ordered[4]) / 2.0
    return _pack_direction_bits(responses >= median)


def aholdp_code(responses) -> int:
    """8-bit adaptive code of one response vector (median threshold)."""
    responses = np.asarray(responses, dtype=np.float64)
    if responses.shape != (N_DIRECTIONS,):
        raise ValueError(f"expected 8 responses, got shape {responses.shape}")
    return int(aholdp_codes(responses[:, np.newaxis])[0])


def lbp_code(img: np.ndarray, center: tuple[int, int]) -> int:
    """Classic LBP: bit p set iff ring-1 neighbor p >= the center intensity."""
    img = as_gray_image(img)
    height, width = img.shape
    y, x = center
    if not (1 <= y < height - 1 and 1 <= x < width - 1):
        raise ValueError(f"center {center} must be at least 1 pixel from the border")
    c = img[y, x]
    code = 0
    for p, (dx, dy) in enumerate(ring_positions(1)):
        if img[y + dy, x + dx] >= c:
            code |= 1 << p
    return code


def ltp_codes(img: np.ndarray, center: tuple[int, int], tau: float) -> tuple[int, int]:
    """Ternary codes around one pixel, split into (positive, negative) bits.

    A neighbor maps to +1 if it is >= center + tau, to -1 if <= center - tau,
    else 0. At tau = 0 a tie counts as +1.
    """
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    img = as_gray_image(img)
    height, width = img.shape
    y, x = center
    if not (1 <= y < height - 1 and 1 <= x < width - 1):
        raise ValueError(f"center {center} must be at least 1 pixel from the border")
    c = img[y, x]
    pos = 0
    neg = 0
    for p, (dx, dy) in enumerate(ring_positions(1)):
        d = img[y + dy, x + dx]
        if d >= c + tau:
            pos |= 1 << p
        elif d <= c - tau:
            neg |= 1 << p
    return pos, neg


def ldp_code(stack: np.ndarray, center: tuple[int, int], t: int) -> int:
    """Conventional LDP code: layer-1 directional responses ranked by t."""
    return holdp_code(directional_responses(stack, center, layer=1), t)


def _layer_mean_map(planes: np.ndarray, layer: int, margin: int, shape, source: str) -> np.ndarray:
    """Directional means of one layer for every pixel of the original image.

    `planes` is the response stack of the margin-padded image; the output
    covers the (height, width) region whose origin sits at (margin, margin).
    """
    height, width = shape
    offsets = ring_positions(layer)
    shared = planes.max(axis=0) if source == MAX_PLANE else None
    means = np.empty((N_DIRECTIONS, height, width))
    for i in range(N_DIRECTIONS):
        plane = planes[i] if shared is None else shared
        acc = np.zeros((height, width))
        for g in ring_index_window(layer, i):
            dx, dy = offsets[g]
            acc += plane[margin + dy : margin + dy + height, margin + dx : margin + dx + width]
        means[i] = acc / (2 * layer - 1)
    return means


def encode_pattern_maps(img: np.ndarray, config: CodeConfig) -> list[np.ndarray]:
    """Per-pixel 8-bit code maps for layers 1..order.

    The image is replicate-padded by the order before filtering, so every
    original pixel gets a code in every layer. Returns one (H, W) uint8
    map per layer, in layer order.
    """
    img = as_gray_image(img)
    n = config.order
    height, width = img.shape
    if height < 2 * n + 1 or width < 2 * n + 1:
        raise ValueError(
            f"image {height}x{width} too small for order {n} (needs at least {2 * n + 1} per side)"
        )
    stack = kirsch_filter(pad(img, n))
    maps = []
    for layer in range(1, n + 1):
        means = _layer_mean_map(stack, layer, n, (height, width), config.response_source)
        if config.mode == PROMINENT:
            maps.append(holdp_codes(means, config.t))
        else:
            maps.append(aholdp_codes(means))
    return maps


def lbp_map(img: np.ndarray) -> np.ndarray:
    """LBP codes for every pixel (replicate-padded borders)."""
    img = as_gray_image(img)
    height, width = img.shape
    padded = pad(img, 1)
    codes = np.zeros((height, width), dtype=np.uint8)
    for p, (dx, dy) in enumerate(ring_positions(1)):
        neighbor = padded[1 + dy : 1 + dy + height, 1 + dx : 1 + dx + width]
        codes |= (neighbor >= img).astype(np.uint8) << p
    return codes


def ltp_maps(img: np.ndarray, tau: float) -> tuple[np.ndarray, np.ndarray]:
    """Positive and negative LTP code maps (replicate-padded borders)."""
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    img = as_gray_image(img)
    height, width = img.shape
    padded = pad(img, 1)
    pos = np.zeros((height, width), dtype=np.uint8)
    neg = np.zeros((height, width), dtype=np.uint8)
    for p, (dx, dy) in enumerate(ring_positions(1)):
        neighbor = padded[1 + dy : 1 + dy + height, 1 + dx : 1 + dx + width]
        hi = neighbor >= img + tau
        lo = (neighbor <= img - tau) & ~hi
        pos |= hi.astype(np.uint8) << p
        neg |= lo.astype(np.uint8) << p
    return pos, neg
