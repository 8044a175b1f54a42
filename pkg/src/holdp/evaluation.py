"""Dataset manifests, stratified splits, chi-square 1-NN, benchmark protocol.

The harness mirrors a standard closed-set identification protocol: per
subject, a fixed number of images is drawn at random into the gallery and
the rest become probes; the split/classify cycle is repeated and mean
accuracy reported. Classification is chi-square nearest neighbor, a
deterministic stand-in for margin classifiers that suits histogram
features; vectors can be exported for any external classifier instead.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .features import (
    L1,
    DescriptorConfig,
    extract_many,
)
from .image import load_image, resize

CHI2_EPS = 1e-10


@dataclass
class DatasetManifest:
    """An ordered list of (image path, subject label) pairs."""

    name: str
    entries: list[tuple[str, str]] = field(default_factory=list)

    def labels(self) -> list[str]:
        return [label for _, label in self.entries]

    def subjects(self) -> dict[str, list[int]]:
        """Map each subject label to the entry indices holding it."""
        out: dict[str, list[int]] = {}
        for idx, (_, label) in enumerate(self.entries):
            out.setdefault(label, []).append(idx)
        return out


@dataclass(frozen=True)
class SplitSpec:
    """Per-subject train count (int) or fraction (float), repeats, seed."""

    train_per_subject: int | float = 0.5
    repeats: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.repeats < 1:
            raise ValueError(f"repeats must be >= 1, got {self.repeats}")


@dataclass
class EvalReport:
    """One descriptor's benchmark outcome over all repeats."""

    descriptor_id: str
    fingerprint: str
    accuracies: list[float]
    mean: float
    std: float
    wall_time_s: float


def read_manifest(path) -> DatasetManifest:
    """Read a `path,label` CSV manifest; a literal `path,label` header row
    is skipped. Relative image paths are resolved against the manifest dir."""
    path = Path(path)
    base = path.parent
    entries = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        img, sep, label = line.partition(",")
        if not sep or not label:
            raise ValueError(f"{path}:{lineno}: expected 'path,label', got {line!r}")
        if lineno == 1 and (img, label) == ("path", "label"):
            continue
        img_path = Path(img)
        if not img_path.is_absolute():
            img_path = base / img_path
        entries.append((str(img_path), label))
    return DatasetManifest(path.stem, entries)


def write_manifest(path, entries: list[tuple[str, str]]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("path,label\n")
        for img, label in entries:
            fh.write(f"{img},{label}\n")


def _train_count(train_per_subject: int | float, total: int, subject: str) -> int:
    if isinstance(train_per_subject, float) and not train_per_subject.is_integer():
        k = int(math.floor(train_per_subject * total + 0.5))
    else:
        k = int(train_per_subject)
    if not 1 <= k < total:
        raise ValueError(
            f"subject {subject!r}: train count {k} infeasible for {total} images"
        )
    return k


def make_splits(manifest: DatasetManifest, spec: SplitSpec) -> list[tuple[np.ndarray, np.ndarray]]:
    """Stratified random train/test index splits, one pair per repeat.

    Each repeat is seeded independently from (seed, repeat index), so any
    repeat can be regenerated without replaying the previous ones. Indices
    come back sorted, which pins the nearest-neighbor tie rule to the
    earliest manifest index.
    """
    subjects = manifest.subjects()
    if len(subjects) < 2:
        raise ValueError(f"need at least 2 subjects, got {len(subjects)}")
    for subject, idxs in subjects.items():
        if len(idxs) < 2:
            raise ValueError(f"subject {subject!r} has {len(idxs)} image(s); need at least 2")
    splits = []
    for repeat in range(spec.repeats):
        rng = np.random.default_rng((spec.seed, repeat))
        train: list[int] = []
        test: list[int] = []
        for subject in sorted(subjects):
            idxs = subjects[subject]
            k = _train_count(spec.train_per_subject, len(idxs), subject)
            perm = rng.permutation(len(idxs))
            train.extend(idxs[p] for p in perm[:k])
            test.extend(idxs[p] for p in perm[k:])
        splits.append((np.sort(np.asarray(train)), np.sort(np.asarray(test))))
    return splits


def chi_square_distance(h1: np.ndarray, h2: np.ndarray, eps: float = CHI2_EPS) -> float:
    """Chi-square histogram distance: sum (h1-h2)^2 / (h1+h2+eps)."""
    h1 = np.asarray(h1, dtype=np.float64)
    h2 = np.asarray(h2, dtype=np.float64)
    if h1.shape != h2.shape:
        raise ValueError(f"length mismatch: {h1.shape} vs {h2.shape}")
    diff = h1 - h2
    return float(np.sum(diff * diff / (h1 + h2 + eps)))


def chi_square_matrix(
    probes: np.ndarray, gallery: np.ndarray, eps: float = CHI2_EPS, block: int = 64
) -> np.ndarray:
    """All-pairs chi-square distances, shape (len(probes), len(gallery))."""
    probes = np.asarray(probes, dtype=np.float64)
    gallery = np.asarray(gallery, dtype=np.float64)
    if probes.shape[1] != gallery.shape[1]:
        raise ValueError(f"length mismatch: {probes.shape[1]} vs {gallery.shape[1]}")
    out = np.empty((probes.shape[0], gallery.shape[0]))
    for start in range(0, probes.shape[0], block):
        p = probes[start : start + block, np.newaxis, :]
        diff = p - gallery[np.newaxis, :, :]
        out[start : start + block] = np.sum(diff * diff / (p + gallery + eps), axis=2)
    return out


def classify_nn(gallery: np.ndarray, gallery_labels: list[str], probe: np.ndarray) -> str:
    """Label of the chi-square nearest gallery vector (ties: earliest index)."""
    gallery = np.asarray(gallery, dtype=np.float64)
    if gallery.ndim != 2 or gallery.shape[0] == 0:
        raise ValueError("gallery must be a non-empty 2-D array")
    if len(gallery_labels) != gallery.shape[0]:
        raise ValueError(f"{len(gallery_labels)} labels for {gallery.shape[0]} vectors")
    probe = np.asarray(probe, dtype=np.float64)[np.newaxis, :]
    distances = chi_square_matrix(probe, gallery)[0]
    return gallery_labels[int(np.argmin(distances))]


def load_images(
    manifest: DatasetManifest,
    resize_to: tuple[int, int] | None = (64, 64),
    interpolation: str = "bilinear",
) -> list[np.ndarray]:
    """Load every manifest image, optionally resizing to (width, height)."""
    images = []
    for img_path, _ in manifest.entries:
        img = load_image(img_path)
        if resize_to is not None:
            img = resize(img, resize_to, interpolation)
        images.append(img)
    return images


def extract_feature_matrix(
    images: list[np.ndarray],
    configs: list[DescriptorConfig],
    normalization: str = L1,
    threads: int | None = None,
) -> list[np.ndarray]:
    """Per-config feature matrices for a batch of images.

    Extraction may run on a thread pool; results are collected in image
    order, so the output never depends on scheduling.
    """
    if threads is not None and threads > 1 and len(images) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda im: extract_many(im, configs, normalization), images))
    else:
        rows = [extract_many(im, configs, normalization) for im in images]
    return [
        np.stack([rows[i][j].values for i in range(len(images))])
        for j in range(len(configs))
    ]


def run_benchmark(
    manifest: DatasetManifest,
    spec: SplitSpec,
    configs: list[DescriptorConfig],
    normalization: str = L1,
    resize_to: tuple[int, int] | None = (64, 64),
    interpolation: str = "bilinear",
    threads: int | None = None,
    images: list[np.ndarray] | None = None,
) -> list[EvalReport]:
    """Split/classify benchmark over every config, one report per config.

    Images are loaded and features extracted once (features do not depend
    on the split); each repeat then scores its probe set against its
    gallery. `images` may be supplied to skip file loading. The report's
    wall time covers that config's classification over all repeats.
    """
    if images is None:
        images = load_images(manifest, resize_to, interpolation)
    labels = np.asarray(manifest.labels())
    splits = make_splits(manifest, spec)
    matrices = extract_feature_matrix(images, configs, normalization, threads)

    reports = []
    for config, matrix in zip(configs, matrices):
        start = time.perf_counter()
        accuracies = []
        for train_idx, test_idx in splits:
            distances = chi_square_matrix(matrix[test_idx], matrix[train_idx])
            predicted = labels[train_idx][np.argmin(distances, axis=1)]
            accuracies.append(float(np.mean(predicted == labels[test_idx])))
        elapsed = time.perf_counter() - start
        reports.append(
            EvalReport(
                descriptor_id=config.descriptor_id,
                fingerprint=config.fingerprint(),
                accuracies=accuracies,
                mean=float(np.mean(accuracies)),
                std=float(np.std(accuracies)),
                wall_time_s=elapsed,
            )
        )
    return reports


def reports_to_json(
    reports: list[EvalReport],
    dataset_name: str,
    spec: SplitSpec,
    include_timings: bool = False,
) -> str:
    """Serialize benchmark reports as deterministic JSON.

    Wall times are excluded unless `include_timings` is set: identical
    inputs and seed must produce byte-identical reports.
    """
    results = []
    for r in reports:
        entry = {
            "descriptor": r.descriptor_id,
            "fingerprint": r.fingerprint,
            "accuracies": r.accuracies,
            "mean": r.mean,
            "std": r.std,
        }
        if include_timings:
            entry["wall_time_s"] = r.wall_time_s
        results.append(entry)
    payload = {
        "dataset": dataset_name,
        "repeats": spec.repeats,
        "seed": spec.seed,
        "train_per_subject": spec.train_per_subject,
        "results": results,
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def sweep_table_csv(
    reports: list[EvalReport],
    orders: list[int],
    ts: list[int],
    adaptive: bool = True,
) -> str:
    """Mean-accuracy grid: one row per order, one column per t plus adaptive.

    Cells are matched to reports by fingerprint; absent combinations are
    left empty.
    """
    from .patterns import CodeConfig

    by_fingerprint = {r.fingerprint: r for r in reports}
    columns = [f"t={t}" for t in ts] + (["adaptive"] if adaptive else [])
    lines = ["order," + ",".join(columns)]
    for order in orders:
        cells = []
        for t in ts:
            fp = CodeConfig(order=order, t=t).fingerprint()
            cells.append(f"{by_fingerprint[fp].mean:.6f}" if fp in by_fingerprint else "")
        if adaptive:
            fp = CodeConfig(order=order, mode="adaptive_median").fingerprint()
            cells.append(f"{by_fingerprint[fp].mean:.6f}" if fp in by_fingerprint else "")
        lines.append(f"{order}," + ",".join(cells))
    return "\n".join(lines) + "\n"


def sweep_configs(
    orders=(1, 2, 3, 4),
    ts=(2, 3, 4, 5, 6),
    adaptive: bool = True,
    response_source: str = "per_direction_plane",
) -> list[DescriptorConfig]:
    """The benchmark grid: prominent configs for every (order, t), plus the
    adaptive config per order."""
    from .patterns import CodeConfig

    configs: list[DescriptorConfig] = []
    for order in orders:
        for t in ts:
            configs.append(CodeConfig(order=order, t=t, response_source=response_source))
        if adaptive:
            configs.append(
                CodeConfig(order=order, mode="adaptive_median", response_source=response_source)
            )
    return configs
