"""Command-line interface.

Subcommands: filter (Kirsch plane inspection), pattern-map (per-pixel code
dump), extract (batch descriptors to a feature file), bench (split/classify
benchmark with sweep table), synth (procedural texture dataset).

Diagnostics go to stderr; data goes to the requested files. Exit codes:
0 on success, 1 when some records were skipped, 2 on bad usage or I/O
failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .evaluation import (
    SplitSpec,
    extract_feature_matrix,
    read_manifest,
    reports_to_json,
    run_benchmark,
    sweep_configs,
    sweep_table_csv,
)
from .features import (
    L1,
    NORMALIZATIONS,
    FeatureSet,
    LBPConfig,
    LDPConfig,
    LTPConfig,
    descriptor_length,
    save_features,
)
from .image import load_image, resize, write_pgm
from .kirsch import kirsch_filter, rescale_plane
from .patterns import (
    MAX_PLANE,
    PER_DIRECTION_PLANE,
    CodeConfig,
    encode_pattern_maps,
    lbp_map,
    ltp_maps,
)
from .synth import make_texture_dataset

SOURCE_NAMES = {"per-direction": PER_DIRECTION_PLANE, "max": MAX_PLANE}


class UsageError(Exception):
    """Usage error detected after argparse; reported on stderr, exit 2."""


def _log(message: str) -> None:
    print(message, file=sys.stderr)


def _parse_size(text: str) -> tuple[int, int]:
    try:
        w, _, h = text.lower().partition("x")
        size = (int(w), int(h))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WIDTHxHEIGHT, got {text!r}")
    if size[0] < 1 or size[1] < 1:
        raise argparse.ArgumentTypeError(f"size must be >= 1x1, got {text!r}")
    return size


def _parse_int_list(text: str) -> list[int]:
    """Parse '1,2,4' or '1-4' (or a mix) into a sorted unique int list."""
    values: set[int] = set()
    for part in text.split(","):
        part = part.strip()
        if "-" in part[1:]:
            lo, _, hi = part.partition("-")
            values.update(range(int(lo), int(hi) + 1))
        elif part:
            values.add(int(part))
    if not values:
        raise argparse.ArgumentTypeError(f"empty int list {text!r}")
    return sorted(values)


def _add_resize_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--resize",
        type=_parse_size,
        default=(64, 64),
        metavar="WxH",
        help="resize inputs to WIDTHxHEIGHT before processing (default 64x64)",
    )
    parser.add_argument(
        "--no-resize",
        action="store_true",
        help="process images at their native size",
    )


def _resize_to(args) -> tuple[int, int] | None:
    return None if args.no_resize else args.resize


def _add_descriptor_flags(parser: argparse.ArgumentParser, with_ltp_parts: bool = False) -> None:
    choices = ["lbp", "ltp", "ldp", "holdp", "aholdp"]
    if with_ltp_parts:
        choices = ["lbp", "ltp-pos", "ltp-neg", "ldp", "holdp", "aholdp"]
    parser.add_argument("--descriptor", choices=choices, default="holdp")
    parser.add_argument("--order", type=int, default=1, help="number of neighborhood layers")
    parser.add_argument("--t", type=int, default=None, help="prominent-direction count (1..7)")
    parser.add_argument(
        "--adaptive",
        action="store_true",
        help="median-threshold codes (selects the adaptive descriptor)",
    )
    parser.add_argument("--tau", type=float, default=2.0, help="LTP dead-zone half-width")
    parser.add_argument(
        "--source",
        choices=sorted(SOURCE_NAMES),
        default="per-direction",
        help="which filtered plane supplies ring samples",
    )


def _descriptor_config(args):
    name = args.descriptor.split("-")[0]
    if args.t is not None and args.adaptive:
        raise UsageError("--t and --adaptive are mutually exclusive")
    if name == "aholdp" and args.t is not None:
        raise UsageError("--t does not apply to the adaptive descriptor")
    if name in ("lbp", "ltp") and (args.t is not None or args.adaptive):
        raise UsageError(f"--t/--adaptive do not apply to {name}")
    source = SOURCE_NAMES[args.source]
    if name == "lbp":
        return LBPConfig()
    if name == "ltp":
        return LTPConfig(tau=args.tau)
    if name == "ldp":
        return LDPConfig(t=3 if args.t is None else args.t)
    if name == "holdp" and args.adaptive:
        name = "aholdp"
    if name == "holdp":
        return CodeConfig(order=args.order, t=3 if args.t is None else args.t, response_source=source)
    return CodeConfig(order=args.order, mode="adaptive_median", response_source=source)


def cmd_filter(args) -> int:
    img = load_image(args.image)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stack = kirsch_filter(img)
    for i in range(8):
        write_pgm(out_dir / f"plane_{i}.pgm", rescale_plane(stack[i]))
    _log(f"wrote 8 response planes to {out_dir}")
    return 0


def cmd_pattern_map(args) -> int:
    img = load_image(args.image)
    resize_to = _resize_to(args)
    if resize_to is not None:
        img = resize(img, resize_to)
    config = _descriptor_config(args)
    if isinstance(config, LBPConfig):
        code_map = lbp_map(img)
    elif isinstance(config, LTPConfig):
        pos, neg = ltp_maps(img, config.tau)
        code_map = pos if args.descriptor == "ltp-pos" else neg
    else:
        if isinstance(config, LDPConfig):
            config = CodeConfig(order=1, t=config.t)
        maps = encode_pattern_maps(img, config)
        layer = config.order if args.layer is None else args.layer
        if not 1 <= layer <= config.order:
            raise UsageError(f"--layer must be in 1..{config.order}")
        code_map = maps[layer - 1]
    write_pgm(args.out, code_map.astype(np.float64))
    _log(f"wrote pattern map to {args.out}")
    return 0


def cmd_extract(args) -> int:
    manifest = read_manifest(args.manifest)
    config = _descriptor_config(args)
    resize_to = _resize_to(args)
    images = []
    labels = []
    skipped = 0
    for img_path, label in manifest.entries:
        try:
            img = load_image(img_path)
        except (OSError, ValueError) as exc:
            _log(f"warning: skipping {img_path}: {exc}")
            skipped += 1
            continue
        if resize_to is not None:
            img = resize(img, resize_to)
        images.append(img)
        labels.append(label)
    if images:
        matrix = extract_feature_matrix(images, [config], args.norm, args.threads)[0]
        fset = FeatureSet(config.descriptor_id, config.fingerprint(), args.norm, labels, matrix)
    else:
        fset = FeatureSet(
            config.descriptor_id,
            config.fingerprint(),
            args.norm,
            [],
            np.empty((0, descriptor_length(config))),
        )
    save_features(args.out, fset, args.format)
    _log(
        f"extracted {len(fset)} of {len(manifest.entries)} records ({skipped} skipped) "
        f"-> {args.out}"
    )
    return 1 if skipped else 0


def cmd_bench(args) -> int:
    manifest = read_manifest(args.manifest)
    if args.train_per_subject is not None:
        train = args.train_per_subject
    else:
        train = args.train_fraction
    spec = SplitSpec(train_per_subject=train, repeats=args.repeats, seed=args.seed)

    source = SOURCE_NAMES[args.source]
    adaptive = not args.no_adaptive
    configs = sweep_configs(args.orders, args.ts, adaptive, source)
    if not args.no_baselines:
        configs = [LBPConfig(), LTPConfig(tau=args.tau), LDPConfig(t=args.ldp_t)] + configs

    reports = run_benchmark(
        manifest,
        spec,
        configs,
        normalization=args.norm,
        resize_to=_resize_to(args),
        threads=args.threads,
    )

    report_json = reports_to_json(reports, manifest.name, spec, include_timings=args.timings)
    Path(args.out_report).write_text(report_json, encoding="utf-8")
    _log(f"wrote report to {args.out_report}")
    if args.out_table:
        table = sweep_table_csv(reports, args.orders, args.ts, adaptive)
        Path(args.out_table).write_text(table, encoding="utf-8")
        _log(f"wrote sweep table to {args.out_table}")
    for r in reports:
        _log(f"{r.fingerprint}: mean={r.mean:.4f} std={r.std:.4f}")
    return 0


def cmd_synth(args) -> int:
    manifest_path = make_texture_dataset(
        args.out_dir,
        n_classes=args.classes,
        per_class=args.per_class,
        seed=args.seed,
        size=args.size,
        jitter=not args.no_jitter,
    )
    _log(f"wrote {args.classes * args.per_class} images and {manifest_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="holdp",
        description="Local directional pattern descriptors and texture benchmarks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("filter", help="write the 8 Kirsch response planes as PGMs")
    p.add_argument("image")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("pattern-map", help="write one per-pixel code map as a PGM")
    p.add_argument("image")
    p.add_argument("--out", required=True)
    _add_descriptor_flags(p, with_ltp_parts=True)
    p.add_argument("--layer", type=int, default=None, help="which layer map to dump (default: the order)")
    _add_resize_flags(p)
    p.set_defaults(func=cmd_pattern_map)

    p = sub.add_parser("extract", help="extract descriptors for a manifest into a feature file")
    p.add_argument("manifest")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=["binary", "csv"], default=None,
                   help="feature file format (default: by extension)")
    _add_descriptor_flags(p)
    p.add_argument("--norm", choices=list(NORMALIZATIONS), default=L1)
    _add_resize_flags(p)
    p.add_argument("--threads", type=int, default=os.cpu_count())
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("bench", help="run the split/classify benchmark and sweep table")
    p.add_argument("manifest")
    p.add_argument("--out-report", required=True, help="JSON report path")
    p.add_argument("--out-table", default=None, help="CSV sweep table path")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--train-per-subject", type=int, default=None)
    group.add_argument("--train-fraction", type=float, default=0.5)
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--orders", type=_parse_int_list, default=[1, 2, 3, 4], metavar="LIST")
    p.add_argument("--ts", type=_parse_int_list, default=[2, 3, 4, 5, 6], metavar="LIST")
    p.add_argument("--no-adaptive", action="store_true", help="skip the adaptive column")
    p.add_argument("--no-baselines", action="store_true", help="skip LBP/LTP/LDP baselines")
    p.add_argument("--tau", type=float, default=2.0, help="LTP baseline tau")
    p.add_argument("--ldp-t", type=int, default=3, help="LDP baseline t")
    p.add_argument("--source", choices=sorted(SOURCE_NAMES), default="per-direction")
    p.add_argument("--norm", choices=list(NORMALIZATIONS), default=L1)
    _add_resize_flags(p)
    p.add_argument("--threads", type=int, default=os.cpu_count())
    p.add_argument("--timings", action="store_true", help="include wall times in the JSON report")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("synth", help="generate a procedural texture dataset")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--classes", type=int, default=10)
    p.add_argument("--per-class", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size", type=_parse_size, default=(64, 64), metavar="WxH")
    p.add_argument("--no-jitter", action="store_true")
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        _log(f"error: {exc}")
        return 2
    except (OSError, ValueError) as exc:
        _log(f"error: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
