"""Procedural texture dataset generation.

Each class is an oriented sinusoid (distinct orientation and frequency per
class) mixed with band-limited noise; each image adds a random phase plus
optional per-image gain/offset jitter. The noise weight is tuned so a
nearest-neighbor benchmark neither saturates at 1.0 nor approaches chance.
Amplitudes keep clipping to [0, 255] rare, so the jitter stays an
essentially clean affine transform. Everything is deterministic in
(seed, class index, image index).
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .image import write_pgm

PATTERN_AMPLITUDE = 50.0
NOISE_WEIGHT = 0.65
GAIN_RANGE = (0.75, 1.25)
OFFSET_RANGE = (-20.0, 20.0)


def _band_limited_noise(rng: np.random.Generator, shape) -> np.ndarray:
    """Unit-variance smooth noise: white noise under a 5x5 box filter."""
    white = rng.standard_normal((shape[0] + 4, shape[1] + 4))
    acc = np.zeros(shape)
    for r in range(5):
        for c in range(5):
            acc += white[r : r + shape[0], c : c + shape[1]]
    acc /= 25.0
    std = acc.std()
    return acc / std if std > 0 else acc


def synth_texture(
    class_index: int,
    image_index: int,
    n_classes: int,
    seed: int = 0,
    size: tuple[int, int] = (64, 64),
    jitter: bool = True,
) -> np.ndarray:
    """Generate one texture image (float64, values within [0, 255]).

    `size` is (width, height). With `jitter` every image gets its own gain
    and offset, which preserves class identity for descriptors that are
    invariant to affine intensity changes and penalizes those that are not.
    """
    if not 0 <= class_index < n_classes:
        raise ValueError(f"class_index {class_index} out of range for {n_classes} classes")
    width, height = size
    rng = np.random.default_rng((seed, class_index, image_index))

    theta = np.pi * class_index / n_classes
    freq = 0.06 + 0.18 * (((2 * class_index) % n_classes) + 1) / n_classes
    phase = rng.uniform(0.0, 2.0 * np.pi)

    y, x = np.mgrid[0:height, 0:width].astype(np.float64)
    wave = np.sin(2.0 * np.pi * freq * (x * np.cos(theta) + y * np.sin(theta)) + phase)
    noise = _band_limited_noise(rng, (height, width))
    base = 127.5 + PATTERN_AMPLITUDE * ((1.0 - NOISE_WEIGHT) * wave + NOISE_WEIGHT * noise)

    gain = rng.uniform(*GAIN_RANGE)
    offset = rng.uniform(*OFFSET_RANGE)
    if jitter:
        base = gain * (base - 127.5) + 127.5 + offset
    return np.clip(base, 0.0, 255.0)


def make_texture_dataset(
    out_dir,
    n_classes: int = 10,
    per_class: int = 20,
    seed: int = 0,
    size: tuple[int, int] = (64, 64),
    jitter: bool = True,
) -> Path:
    """Write a PGM texture dataset plus a `path,label` manifest.

    Returns the manifest path. Image paths in the manifest are relative to
    the manifest's directory, so the dataset is relocatable.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for c in range(n_classes):
        label = f"class{c:02d}"
        for k in range(per_class):
            name = f"{label}_img{k:03d}.pgm"
            img = synth_texture(c, k, n_classes, seed=seed, size=size, jitter=jitter)
            write_pgm(out_dir / name, img)
            rows.append((name, label))
    manifest_path = out_dir / "manifest.csv"
    with open(manifest_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("path,label\n")
        for name, label in rows:
            fh.write(f"{name},{label}\n")
    return manifest_path
