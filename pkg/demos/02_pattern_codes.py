"""
From pixels to 8-bit pattern codes
==================================

Walks one pixel of a small image through every encoder: LBP and LTP on
raw intensities, then the directional family (LDP and the higher-order
HOLDP/AHOLDP layers) on Kirsch responses. Prints each code in binary;
bit p always corresponds to compass direction p (East first, then
counterclockwise in 45-degree steps).
"""

import numpy as np

from holdp import (
    CodeConfig,
    aholdp_code,
    directional_responses,
    encode_pattern_maps,
    holdp_code,
    kirsch_filter,
    lbp_code,
    ldp_code,
    ltp_codes,
    pad,
    ring_positions,
)

rng = np.random.default_rng(7)
img = rng.integers(0, 256, size=(9, 9)).astype(np.float64)
center = (4, 4)

print("3x3 neighborhood around the center pixel:")
print(img[3:6, 3:6], "\n")

# --- intensity codes -------------------------------------------------------
code = lbp_code(img, center)
print(f"LBP  code: {code:3d} = {code:08b}  (bit p set iff neighbor p >= center)")

pos, neg = ltp_codes(img, center, tau=20.0)
print(f"LTP  codes (tau=20): positive {pos:08b}, negative {neg:08b}")
print("  neighbors inside the +-tau dead zone contribute to neither code\n")

# --- directional codes -----------------------------------------------------
# All directional encoders read the 8 Kirsch response planes, not pixels.
stack = kirsch_filter(img)
responses = directional_responses(stack, center, layer=1)
print("layer-1 directional responses (one Kirsch sample per direction):")
print(np.array2string(responses, precision=1), "\n")

for t in (2, 3, 4):
    code = ldp_code(stack, center, t)
    print(f"LDP  code (t={t}): {code:08b}  ({t} most prominent directions set)")

# Layer 2 averages 3 ring samples per direction, layer 3 averages 5: the
# pyramidal weighting that makes outer layers count less per pixel.
padded_stack = kirsch_filter(pad(img, 3))
for layer in (2, 3):
    m = directional_responses(padded_stack, (4 + 3, 4 + 3), layer)
    print(f"\nlayer-{layer} responses ({2 * layer - 1} samples per direction):")
    print(np.array2string(m, precision=1))
    print(f"  HOLDP  (t=3): {holdp_code(m, 3):08b}")
    print(f"  AHOLDP      : {aholdp_code(m):08b}  (threshold = median, 4 bits set)")

# Whole-image maps: one uint8 code per pixel per layer.
maps = encode_pattern_maps(img, CodeConfig(order=3, t=3))
print(f"\nencode_pattern_maps(order=3) -> {len(maps)} maps of shape {maps[0].shape}")
print("layer-1 map corner:")
print(maps[0][:3, :3])
