"""Eight-direction Kirsch compass filter bank.

The bank correlates an image with eight 3x3 zero-sum masks. Direction 0
points East and successive masks rotate the arc of 5-coefficients by 45
degrees counterclockwise (E, NE, N, NW, W, SW, S, SE), so direction i
matches ring angle i*45deg used by the pattern encoders. Responses are
kept as signed reals: no clipping, absolute value, or normalization.
"""

from __future__ import annotations

import numpy as np

from .image import as_gray_image, pad

# Canonical Kirsch mask table, rows top to bottom, direction 0 = East.
KIRSCH_MASKS = np.array(
    [
        [[-3, -3, 5], [-3, 0, 5], [-3, -3, 5]],  # 0: E
        [[-3, 5, 5], [-3, 0, 5], [-3, -3, -3]],  # 1: NE
        [[5, 5, 5], [-3, 0, -3], [-3, -3, -3]],  # 2: N
        [[5, 5, -3], [5, 0, -3], [-3, -3, -3]],  # 3: NW
        [[5, -3, -3], [5, 0, -3], [5, -3, -3]],  # 4: W
        [[-3, -3, -3], [5, 0, -3], [5, 5, -3]],  # 5: SW
        [[-3, -3, -3], [-3, 0, -3], [5, 5, 5]],  # 6: S
        [[-3, -3, -3], [-3, 0, 5], [-3, 5, 5]],  # 7: SE
    ],
    dtype=np.int64,
)

N_DIRECTIONS = 8


def kirsch_masks() -> np.ndarray:
    """Return the canonical (8, 3, 3) Kirsch mask table (a copy)."""
    return KIRSCH_MASKS.copy()


def kirsch_filter(img: np.ndarray) -> np.ndarray:
    """Correlate the image with all eight Kirsch masks.

    The border is replicate-padded by one pixel, so every plane has the
    input's shape. Plane i at (y, x) is the correlation (not flipped
    convolution) of mask i with the 3x3 neighborhood of (y, x). Taps are
    accumulated in row-major mask order, which keeps results bitwise
    reproducible.

    Returns
    -------
    ndarray
        Response stack of shape (8, height, width), float64.
    """
    img = as_gray_image(img)
    height, width = img.shape
    padded = pad(img, 1)
    stack = np.zeros((N_DIRECTIONS, height, width))
    for i in range(N_DIRECTIONS):
        plane = stack[i]
        mask = KIRSCH_MASKS[i]
        for r in range(3):
            for c in range(3):
                coef = mask[r, c]
                if coef:
                    plane += coef * padded[r : r + height, c : c + width]
    return stack


def rescale_plane(plane: np.ndarray) -> np.ndarray:
    """Affinely map a response plane to [0, 255] for visual inspection.

    A constant plane (e.g. all-zero responses of a constant image) maps to
    mid-gray 128.
    """
    plane = np.asarray(plane, dtype=np.float64)
    lo = plane.min()
    hi = plane.max()
    if hi == lo:
        return np.full(plane.shape, 128.0)
    return (plane - lo) * (255.0 / (hi - lo))
