"""Local-pattern image descriptors: LBP, LTP, LDP, and the high order
local directional pattern family (HOLDP/AHOLDP), with a chi-square
nearest-neighbor benchmark harness and a procedural texture dataset."""

__version__ = "0.1.0"

from .image import FormatError, load_image, pad, read_pgm, resize, rgb_to_gray, write_pgm
from .kirsch import KIRSCH_MASKS, kirsch_filter, kirsch_masks, rescale_plane
from .patterns import (
    CodeConfig,
    aholdp_code,
    aholdp_codes,
    directional_responses,
    encode_pattern_maps,
    holdp_code,
    holdp_codes,
    lbp_code,
    lbp_map,
    ldp_code,
    ltp_codes,
    ltp_maps,
    ring_index_window,
    ring_positions,
)
from .features import (
    FeatureSet,
    FeatureVector,
    LBPConfig,
    LDPConfig,
    LTPConfig,
    descriptor_length,
    extract_descriptor,
    extract_many,
    feature_set,
    histogram,
    load_features,
    save_features,
)
from .evaluation import (
    DatasetManifest,
    EvalReport,
    SplitSpec,
    chi_square_distance,
    chi_square_matrix,
    classify_nn,
    make_splits,
    read_manifest,
    reports_to_json,
    run_benchmark,
    sweep_configs,
    sweep_table_csv,
    write_manifest,
)
from .synth import make_texture_dataset, synth_texture

__all__ = [
    "CodeConfig",
    "DatasetManifest",
    "EvalReport",
    "FeatureSet",
    "FeatureVector",
    "FormatError",
    "KIRSCH_MASKS",
    "LBPConfig",
    "LDPConfig",
    "LTPConfig",
    "SplitSpec",
    "aholdp_code",
    "aholdp_codes",
    "chi_square_distance",
    "chi_square_matrix",
    "classify_nn",
    "descriptor_length",
    "directional_responses",
    "encode_pattern_maps",
    "extract_descriptor",
    "extract_many",
    "feature_set",
    "histogram",
    "holdp_code",
    "holdp_codes",
    "kirsch_filter",
    "kirsch_masks",
    "lbp_code",
    "lbp_map",
    "ldp_code",
    "load_features",
    "load_image",
    "ltp_codes",
    "ltp_maps",
    "make_splits",
    "make_texture_dataset",
    "pad",
    "read_manifest",
    "read_pgm",
    "reports_to_json",
    "rescale_plane",
    "resize",
    "rgb_to_gray",
    "ring_index_window",
    "ring_positions",
    "run_benchmark",
    "save_features",
    "sweep_configs",
    "sweep_table_csv",
    "synth_texture",
    "write_manifest",
    "write_pgm",
]
