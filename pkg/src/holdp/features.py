"""Histogram descriptors and feature-file serialization.

A descriptor turns one image into a single vector of concatenated 256-bin
code histograms: one block per neighborhood layer for HOLDP/AHOLDP (length
order * 256), one block for LBP and LDP (256), and a positive plus negative
block for LTP (512). Blocks are L1-normalized by default so images with
different pixel counts stay comparable; raw counts are available for exact
bookkeeping.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .image import FormatError, as_gray_image, pad
from .kirsch import kirsch_filter
from .patterns import (
    PROMINENT,
    CodeConfig,
    _layer_mean_map,
    _pack_direction_bits,
    encode_pattern_maps,
    lbp_map,
    ltp_maps,
)

N_BINS = 256

L1 = "l1"
RAW = "raw"
NORMALIZATIONS = (L1, RAW)

FEATURE_MAGIC = b"HOLDPFT\x00"
FEATURE_VERSION = 1
CSV_SIGNATURE = "# holdp-features v1"


@dataclass(frozen=True)
class LBPConfig:
    """Baseline LBP descriptor (single 256-bin histogram)."""

    @property
    def descriptor_id(self) -> str:
        return "LBP"

    def fingerprint(self) -> str:
        return "LBP"


@dataclass(frozen=True)
class LTPConfig:
    """Baseline LTP descriptor: positive and negative histograms, 512 bins."""

    tau: float = 2.0

    def __post_init__(self):
        if self.tau < 0:
            raise ValueError(f"tau must be >= 0, got {self.tau}")

    @property
    def descriptor_id(self) -> str:
        return "LTP"

    def fingerprint(self) -> str:
        return f"LTP[tau={self.tau:g}]"


@dataclass(frozen=True)
class LDPConfig:
    """Baseline LDP descriptor: order-1 prominent directional codes."""

    t: int = 3

    def __post_init__(self):
        if not 1 <= self.t <= 7:
            raise ValueError(f"t must be in 1..7, got {self.t}")

    @property
    def descriptor_id(self) -> str:
        return "LDP"

    def fingerprint(self) -> str:
        return f"LDP[t={self.t}]"


DescriptorConfig = CodeConfig | LBPConfig | LTPConfig | LDPConfig


def descriptor_length(config: DescriptorConfig) -> int:
    """Feature-vector length implied by a descriptor configuration."""
    if isinstance(config, CodeConfig):
        return config.order * N_BINS
    if isinstance(config, LTPConfig):
        return 2 * N_BINS
    return N_BINS


@dataclass
class FeatureVector:
    """One image's descriptor: id, config fingerprint, and the bin values."""

    descriptor_id: str
    fingerprint: str
    normalization: str
    values: np.ndarray


@dataclass
class FeatureSet:
    """A batch of homogeneous feature vectors with per-record labels."""

    descriptor_id: str
    fingerprint: str
    normalization: str
    labels: list[str] = field(default_factory=list)
    vectors: np.ndarray = field(default_factory=lambda: np.empty((0, 0)))

    def __post_init__(self):
        self.vectors = np.asarray(self.vectors, dtype=np.float64)
        if self.vectors.ndim != 2:
            raise ValueError(f"vectors must be 2-D (count, length), got {self.vectors.shape}")
        if len(self.labels) != self.vectors.shape[0]:
            raise ValueError(
                f"{len(self.labels)} labels for {self.vectors.shape[0]} vectors"
            )

    def __len__(self) -> int:
        return self.vectors.shape[0]


def histogram(pattern_map: np.ndarray) -> np.ndarray:
    """256-bin code histogram of a pattern map (raw int64 counts)."""
    codes = np.asarray(pattern_map)
    if codes.size and (codes.min() < 0 or codes.max() > 255):
        raise ValueError("pattern map codes must lie in 0..255")
    return np.bincount(codes.ravel().astype(np.intp), minlength=N_BINS).astype(np.int64)


def _assemble(blocks: list[np.ndarray], normalization: str) -> np.ndarray:
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"normalization must be one of {NORMALIZATIONS}, got {normalization!r}")
    out = []
    for bins in blocks:
        bins = bins.astype(np.float64)
        out.append(bins / bins.sum() if normalization == L1 else bins)
    return np.concatenate(out)


def _histogram_blocks(img: np.ndarray, config: DescriptorConfig) -> list[np.ndarray]:
    """Raw per-block count histograms for any descriptor config."""
    if isinstance(config, LBPConfig):
        return [histogram(lbp_map(img))]
    if isinstance(config, LTPConfig):
        pos, neg = ltp_maps(img, config.tau)
        return [histogram(pos), histogram(neg)]
    if isinstance(config, LDPConfig):
        code_config = CodeConfig(order=1, t=config.t)
        return [histogram(m) for m in encode_pattern_maps(img, code_config)]
    if isinstance(config, CodeConfig):
        return [histogram(m) for m in encode_pattern_maps(img, config)]
    raise TypeError(f"unknown descriptor config {config!r}")


def extract_descriptor(
    img: np.ndarray, config: DescriptorConfig, normalization: str = L1
) -> FeatureVector:
    """Extract one image's descriptor vector.

    Per-layer histograms are concatenated in layer order (positive block
    first for LTP) and normalized per block, so the first (n-1)*256 entries
    of an order-n raw-count HOLDP vector equal the order-(n-1) vector.
    """
    img = as_gray_image(img)
    values = _assemble(_histogram_blocks(img, config), normalization)
    return FeatureVector(config.descriptor_id, config.fingerprint(), normalization, values)


def extract_many(
    img: np.ndarray, configs: list[DescriptorConfig], normalization: str = L1
) -> list[FeatureVector]:
    """Extract several descriptors of one image, sharing intermediate work.

    The Kirsch stack, per-layer directional means, and their sorted order
    statistics are computed once per response source and reused across all
    directional configs (every order, every t, adaptive). Results are
    bitwise identical to per-config `extract_descriptor` calls.
    """
    img = as_gray_image(img)
    height, width = img.shape

    directional = [c for c in configs if isinstance(c, (CodeConfig, LDPConfig))]
    needed: dict[str, int] = {}
    for c in directional:
        code_cfg = c if isinstance(c, CodeConfig) else CodeConfig(order=1, t=c.t)
        src = code_cfg.response_source
        needed[src] = max(needed.get(src, 0), code_cfg.order)

    # One padded stack at the largest required margin; replicate padding makes
    # layer responses independent of any extra margin.
    hist_cache: dict[tuple, np.ndarray] = {}
    for src, max_order in needed.items():
        if height < 2 * max_order + 1 or width < 2 * max_order + 1:
            raise ValueError(
                f"image {height}x{width} too small for order {max_order}"
            )
        stack = kirsch_filter(pad(img, max_order))
        for layer in range(1, max_order + 1):
            means = _layer_mean_map(stack, layer, max_order, (height, width), src)
            ordered = np.sort(means, axis=0)
            for c in directional:
                code_cfg = c if isinstance(c, CodeConfig) else CodeConfig(order=1, t=c.t)
                if code_cfg.response_source != src or code_cfg.order < layer:
                    continue
                key = (
                    (src, layer, "t", code_cfg.t)
                    if code_cfg.mode == PROMINENT
                    else (src, layer, "adaptive")
                )
                if key in hist_cache:
                    continue
                if code_cfg.mode == PROMINENT:
                    threshold = ordered[8 - code_cfg.t]
                else:
                    threshold = (ordered[3] + ordered[4]) / 2.0
                hist_cache[key] = histogram(_pack_direction_bits(means >= threshold))

    results = []
    for c in configs:
        if isinstance(c, (LBPConfig, LTPConfig)):
            results.append(extract_descriptor(img, c, normalization))
            continue
        code_cfg = c if isinstance(c, CodeConfig) else CodeConfig(order=1, t=c.t)
        blocks = []
        for layer in range(1, code_cfg.order + 1):
            key = (
                (code_cfg.response_source, layer, "t", code_cfg.t)
                if code_cfg.mode == PROMINENT
                else (code_cfg.response_source, layer, "adaptive")
            )
            blocks.append(hist_cache[key])
        values = _assemble(blocks, normalization)
        results.append(FeatureVector(c.descriptor_id, c.fingerprint(), normalization, values))
    return results


def feature_set(vectors: list[FeatureVector], labels: list[str]) -> FeatureSet:
    """Bundle homogeneous feature vectors and labels into a FeatureSet."""
    if len(vectors) != len(labels):
        raise ValueError(f"{len(vectors)} vectors for {len(labels)} labels")
    if not vectors:
        raise ValueError("cannot infer descriptor metadata from an empty list; build FeatureSet directly")
    first = vectors[0]
    for v in vectors[1:]:
        if (v.descriptor_id, v.fingerprint, v.normalization) != (
            first.descriptor_id,
            first.fingerprint,
            first.normalization,
        ):
            raise ValueError("mixed descriptor configs in one feature set")
    data = np.stack([v.values for v in vectors])
    return FeatureSet(first.descriptor_id, first.fingerprint, first.normalization, list(labels), data)


def save_features(path, fset: FeatureSet, fmt: str | None = None) -> None:
    """Write a feature set to `path` as binary (default) or CSV.

    `fmt` may be 'binary' or 'csv'; if None it is inferred from the
    extension ('.csv' selects text, anything else binary). Both formats
    round-trip float64 values exactly.
    """
    path = Path(path)
    if fmt is None:
        fmt = "csv" if path.suffix.lower() == ".csv" else "binary"
    if fmt == "binary":
        _save_binary(path, fset)
    elif fmt == "csv":
        _save_csv(path, fset)
    else:
        raise ValueError(f"unknown feature format {fmt!r}")


def load_features(path, expect_fingerprint: str | None = None) -> FeatureSet:
    """Read a feature set, sniffing the format from the file contents.

    Raises FormatError on unknown magic, unsupported version, or when
    `expect_fingerprint` is given and does not match the file header.
    """
    path = Path(path)
    with open(path, "rb") as fh:
        head = fh.read(len(FEATURE_MAGIC))
    if head == FEATURE_MAGIC:
        fset = _load_binary(path)
    elif head.startswith(CSV_SIGNATURE[: len(head)].encode("ascii")):
        fset = _load_csv(path)
    else:
        raise FormatError(f"{path}: not a feature file")
    if expect_fingerprint is not None and fset.fingerprint != expect_fingerprint:
        raise FormatError(
            f"{path}: fingerprint {fset.fingerprint!r} does not match expected {expect_fingerprint!r}"
        )
    return fset


def _write_str(fh, text: str) -> None:
    raw = text.encode("utf-8")
    fh.write(struct.pack("<I", len(raw)))
    fh.write(raw)


def _read_str(fh) -> str:
    (length,) = struct.unpack("<I", fh.read(4))
    return fh.read(length).decode("utf-8")


def _save_binary(path: Path, fset: FeatureSet) -> None:
    count, length = fset.vectors.shape
    with open(path, "wb") as fh:
        fh.write(FEATURE_MAGIC)
        fh.write(struct.pack("<I", FEATURE_VERSION))
        _write_str(fh, fset.descriptor_id)
        _write_str(fh, fset.fingerprint)
        _write_str(fh, fset.normalization)
        fh.write(struct.pack("<II", length, count))
        for label, row in zip(fset.labels, fset.vectors):
            _write_str(fh, label)
            fh.write(row.astype("<f8").tobytes())


def _load_binary(path: Path) -> FeatureSet:
    with open(path, "rb") as fh:
        if fh.read(len(FEATURE_MAGIC)) != FEATURE_MAGIC:
            raise FormatError(f"{path}: bad feature-file magic")
        (version,) = struct.unpack("<I", fh.read(4))
        if version != FEATURE_VERSION:
            raise FormatError(f"{path}: unsupported feature-file version {version}")
        descriptor_id = _read_str(fh)
        fingerprint = _read_str(fh)
        normalization = _read_str(fh)
        length, count = struct.unpack("<II", fh.read(8))
        labels = []
        vectors = np.empty((count, length))
        for k in range(count):
            labels.append(_read_str(fh))
            raw = fh.read(8 * length)
            if len(raw) != 8 * length:
                raise FormatError(f"{path}: truncated record {k}")
            vectors[k] = np.frombuffer(raw, dtype="<f8")
    return FeatureSet(descriptor_id, fingerprint, normalization, labels, vectors)


def _save_csv(path: Path, fset: FeatureSet) -> None:
    count, length = fset.vectors.shape
    for label in fset.labels:
        if "," in label or "\n" in label:
            raise ValueError(f"label {label!r} not representable in CSV; use the binary format")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{CSV_SIGNATURE}\n")
        fh.write(f"# descriptor={fset.descriptor_id}\n")
        fh.write(f"# fingerprint={fset.fingerprint}\n")
        fh.write(f"# normalization={fset.normalization}\n")
        fh.write(f"# length={length}\n")
        fh.write(f"# count={count}\n")
        for label, row in zip(fset.labels, fset.vectors):
            fh.write(label + "," + ",".join(f"{v:.17g}" for v in row) + "\n")


def _load_csv(path: Path) -> FeatureSet:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != CSV_SIGNATURE:
        raise FormatError(f"{path}: bad feature CSV signature")
    header = {}
    body_start = 1
    for line in lines[1:]:
        if not line.startswith("# "):
            break
        key, _, value = line[2:].partition("=")
        header[key] = value
        body_start += 1
    try:
        length = int(header["length"])
        count = int(header["count"])
        descriptor_id = header["descriptor"]
        fingerprint = header["fingerprint"]
        normalization = header["normalization"]
    except KeyError as exc:
        raise FormatError(f"{path}: missing feature CSV header field {exc}") from exc
    rows = lines[body_start : body_start + count]
    if len(rows) != count:
        raise FormatError(f"{path}: expected {count} records, found {len(rows)}")
    labels = []
    vectors = np.empty((count, length))
    for k, line in enumerate(rows):
        label, _, rest = line.partition(",")
        values = np.array(rest.split(","), dtype=np.float64) if rest else np.empty(0)
        if values.size != length:
            raise FormatError(f"{path}: record {k} has {values.size} values, expected {length}")
        labels.append(label)
        vectors[k] = values
    return FeatureSet(descriptor_id, fingerprint, normalization, labels, vectors)
