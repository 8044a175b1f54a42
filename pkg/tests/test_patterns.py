import numpy as np
import pytest

from holdp.kirsch import kirsch_filter
from holdp.image import pad
from holdp.patterns import (
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
    _layer_mean_map,
)

from oracles import (
    angular_ring,
    lbp_map_loop,
    ldp_maps_bruteforce,
    ltp_maps_loop,
    pattern_maps_bruteforce,
    random_int_image,
    window_index_set,
)


class TestRingPositions:
    def test_layer1_canonical_sequence(self):
        expected = [(1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1)]
        assert ring_positions(1).tolist() == [list(c) for c in expected]

    def test_layer2_compass_alignment(self):
        ring = ring_positions(2)
        assert len(ring) == 16
        assert ring[0].tolist() == [2, 0]
        assert ring[2].tolist() == [2, -2]
        # index 2*i sits exactly on direction angle i*45 degrees
        compass = [(2, 0), (2, -2), (0, -2), (-2, -2), (-2, 0), (-2, 2), (0, 2), (2, 2)]
        for i, cell in enumerate(compass):
            assert ring[2 * i].tolist() == list(cell)

    @pytest.mark.parametrize("layer", [1, 2, 3, 4, 5, 6])
    def test_matches_angular_sort_oracle(self, layer):
        assert np.array_equal(ring_positions(layer), angular_ring(layer))

    @pytest.mark.parametrize("layer", [1, 2, 3, 4, 5, 6])
    def test_count_radius_uniqueness(self, layer):
        ring = ring_positions(layer)
        assert ring.shape == (8 * layer, 2)
        assert np.all(np.abs(ring).max(axis=1) == layer)
        assert len({tuple(c) for c in ring.tolist()}) == 8 * layer

    def test_corner_alignment_every_layer(self):
        for layer in range(1, 7):
            ring = ring_positions(layer)
            for i in range(8):
                dx, dy = ring[i * layer]
                angle = np.degrees(np.arctan2(-dy, dx)) % 360
                assert angle == pytest.approx(i * 45.0)

    def test_rejects_layer_below_one(self):
        with pytest.raises(ValueError):
            ring_positions(0)


class TestRingIndexWindow:
    @pytest.mark.parametrize("layer", [1, 2, 3, 4, 5, 6])
    def test_matches_enumeration(self, layer):
        for i in range(8):
            assert ring_index_window(layer, i).tolist() == window_index_set(layer, i)

    @pytest.mark.parametrize("layer", [1, 2, 3, 4])
    def test_contiguous_circular_and_centered(self, layer):
        size = 8 * layer
        for i in range(8):
            window = ring_index_window(layer, i).tolist()
            assert len(set(window)) == 2 * layer - 1
            center = (layer * i) % size
            expected = [(center + j) % size for j in range(-layer + 1, layer)]
            assert window == expected

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            ring_index_window(0, 0)
        with pytest.raises(ValueError):
            ring_index_window(1, 8)


class TestDirectionalResponses:
    def test_layer1_is_the_ring_sample(self, rng):
        img = random_int_image(rng, 9, 9)
        stack = kirsch_filter(img)
        center = (4, 4)
        m = directional_responses(stack, center, layer=1)
        for i, (dx, dy) in enumerate(ring_positions(1)):
            assert m[i] == stack[i, 4 + dy, 4 + dx]

    def test_layer2_direction0_window(self):
        # m_{0,2} averages ring indices 15, 0, 1 of plane 0
        stack = np.zeros((8, 11, 11))
        ring = ring_positions(2)
        values = {15: 30.0, 0: 3.0, 1: 12.0}
        for g, v in values.items():
            dx, dy = ring[g]
            stack[0, 5 + dy, 5 + dx] = v
        m = directional_responses(stack, (5, 5), layer=2)
        assert m[0] == (30.0 + 3.0 + 12.0) / 3
        assert np.all(m[1:] == 0.0)

    def test_layer3_direction6_window(self):
        # the 270-degree response averages ring indices 16..20 of plane 6
        stack = np.zeros((8, 15, 15))
        ring = ring_positions(3)
        for g in range(16, 21):
            dx, dy = ring[g]
            stack[6, 7 + dy, 7 + dx] = float(g)
        m = directional_responses(stack, (7, 7), layer=3)
        assert m[6] == (16 + 17 + 18 + 19 + 20) / 5
        assert m[0] == 0.0

    def test_max_plane_source_reads_pointwise_maximum(self, rng):
        stack = rng.standard_normal((8, 9, 9))
        shared = stack.max(axis=0)
        m = directional_responses(stack, (4, 4), layer=1, source="max_plane")
        for i, (dx, dy) in enumerate(ring_positions(1)):
            assert m[i] == shared[4 + dy, 4 + dx]

    def test_center_too_close_to_border(self):
        stack = np.zeros((8, 9, 9))
        with pytest.raises(ValueError):
            directional_responses(stack, (0, 4), layer=1)
        with pytest.raises(ValueError):
            directional_responses(stack, (4, 7), layer=2)

    def test_bad_source_and_stack(self):
        with pytest.raises(ValueError):
            directional_responses(np.zeros((8, 9, 9)), (4, 4), 1, source="median_plane")
        with pytest.raises(ValueError):
            directional_responses(np.zeros((7, 9, 9)), (4, 4), 1)


class TestHoldpCode:
    def test_descending_responses_set_low_bits(self):
        assert holdp_code([8, 7, 6, 5, 4, 3, 2, 1], t=3) == 0b00000111

    def test_all_equal_responses_set_every_bit(self):
        for t in range(1, 8):
            assert holdp_code([4.0] * 8, t) == 255

    def test_threshold_at_minimum_sets_every_bit(self):
        assert holdp_code([8, 7, 6, 5, 4, 3, 2, 1], t=8) == 255

    def test_ties_at_threshold_set_extra_bits(self):
        # threshold value 4 appears twice: both bits are set
        code = holdp_code([5, 4, 4, 3, 2, 1, 0, -1], t=2)
        assert code == 0b00000111

    def test_popcount_equals_t_for_distinct_responses(self, rng):
        responses = rng.permuted(np.tile(np.arange(8.0), (200, 1)), axis=1)
        for t in range(1, 8):
            codes = holdp_codes(responses.T, t)
            assert np.all(np.vectorize(lambda c: bin(c).count("1"))(codes) == t)

    def test_scalar_matches_vectorized(self, rng):
        block = rng.standard_normal((8, 64))
        for t in (2, 4, 6):
            vector = holdp_codes(block, t)
            for k in range(block.shape[1]):
                assert holdp_code(block[:, k], t) == vector[k]

    def test_validation(self):
        with pytest.raises(ValueError):
            holdp_code([1] * 8, 0)
        with pytest.raises(ValueError):
            holdp_code([1] * 8, 9)
        with pytest.raises(ValueError):
            holdp_code([1] * 7, 3)


class TestAholdpCode:
    def test_ascending_responses(self):
        # median 4.5: the four largest values sit at bits 4..7
        assert aholdp_code([1, 2, 3, 4, 5, 6, 7, 8]) == 0b11110000

    def test_all_equal_responses(self):
        assert aholdp_code([7.0] * 8) == 255

    def test_two_level_responses(self):
        assert aholdp_code([0, 0, 0, 0, 10, 10, 10, 10]) == 0b11110000

    def test_popcount_is_four_for_distinct_responses(self, rng):
        responses = rng.permuted(np.tile(np.arange(8.0), (200, 1)), axis=1)
        codes = aholdp_codes(responses.T)
        assert np.all(np.vectorize(lambda c: bin(c).count("1"))(codes) == 4)

    def test_scalar_matches_vectorized(self, rng):
        block = rng.standard_normal((8, 64))
        vector = aholdp_codes(block)
        for k in range(block.shape[1]):
            assert aholdp_code(block[:, k]) == vector[k]


class TestLbp:
    def test_constant_patch(self):
        assert lbp_code(np.full((3, 3), 9.0), (1, 1)) == 255

    def test_all_neighbors_below(self):
        img = np.full((3, 3), 99.0)
        img[1, 1] = 100.0
        assert lbp_code(img, (1, 1)) == 0

    def test_alternating_ring(self):
        img = np.zeros((3, 3))
        img[1, 1] = 5.0
        for p, (dx, dy) in enumerate(ring_positions(1)):
            img[1 + dy, 1 + dx] = 6.0 if p % 2 == 0 else 4.0
        assert lbp_code(img, (1, 1)) == 0b01010101

    def test_border_center_rejected(self):
        with pytest.raises(ValueError):
            lbp_code(np.zeros((3, 3)), (0, 1))

    def test_map_matches_loop_oracle(self, rng):
        img = random_int_image(rng, 11, 13)
        assert np.array_equal(lbp_map(img), lbp_map_loop(img))


class TestLtp:
    def test_constant_patch_all_dead_zone(self):
        img = np.full((3, 3), 50.0)
        assert ltp_codes(img, (1, 1), tau=0.5) == (0, 0)

    def test_tau_zero_degenerates(self, rng):
        img = random_int_image(rng, 5, 5)
        for y in range(1, 4):
            for x in range(1, 4):
                pos, neg = ltp_codes(img, (y, x), tau=0.0)
                assert pos == lbp_code(img, (y, x))
                # negative bits are exactly the strictly-below neighbors
                assert neg == 255 - pos

    def test_hand_example(self):
        img = np.zeros((3, 3))
        img[1, 1] = 100.0
        neighbors = [103, 100, 97, 101, 99, 110, 90, 100]
        for p, (dx, dy) in enumerate(ring_positions(1)):
            img[1 + dy, 1 + dx] = neighbors[p]
        pos, neg = ltp_codes(img, (1, 1), tau=2.0)
        assert pos == (1 << 0) | (1 << 5)
        assert neg == (1 << 2) | (1 << 6)

    def test_negative_tau_rejected(self):
        with pytest.raises(ValueError):
            ltp_codes(np.zeros((3, 3)), (1, 1), tau=-1.0)
        with pytest.raises(ValueError):
            ltp_maps(np.zeros((3, 3)), tau=-0.1)

    def test_maps_match_loop_oracle(self, rng):
        img = random_int_image(rng, 10, 12)
        for tau in (0.0, 1.0, 5.0):
            pos, neg = ltp_maps(img, tau)
            opos, oneg = ltp_maps_loop(img, tau)
            assert np.array_equal(pos, opos)
            assert np.array_equal(neg, oneg)


class TestLdp:
    def test_equals_order1_responses_ranking(self, rng):
        img = random_int_image(rng, 9, 9)
        stack = kirsch_filter(img)
        for t in range(2, 7):
            expected = holdp_code(directional_responses(stack, (4, 4), 1), t)
            assert ldp_code(stack, (4, 4), t) == expected

    def test_constant_image_gives_255(self):
        stack = kirsch_filter(np.full((5, 5), 3.0))
        assert ldp_code(stack, (2, 2), t=3) == 255

    def test_map_matches_bruteforce_oracle(self, rng):
        img = random_int_image(rng, 16, 16)
        oracle = ldp_maps_bruteforce(img, ts=range(2, 7))
        for t in range(2, 7):
            maps = encode_pattern_maps(img, CodeConfig(order=1, t=t))
            assert np.array_equal(maps[0], oracle[t])

    def test_order1_map_equals_per_pixel_ldp_codes(self, rng):
        img = random_int_image(rng, 8, 8)
        code_map = encode_pattern_maps(img, CodeConfig(order=1, t=3))[0]
        stack = kirsch_filter(pad(img, 1))
        for y in range(8):
            for x in range(8):
                assert code_map[y, x] == ldp_code(stack, (y + 1, x + 1), t=3)


class TestEncodePatternMaps:
    def test_constant_image_all_codes_255(self):
        img = np.full((9, 9), 101.0)
        for config in [
            CodeConfig(order=3, t=4),
            CodeConfig(order=2, mode="adaptive_median"),
        ]:
            for code_map in encode_pattern_maps(img, config):
                assert np.all(code_map == 255)

    def test_order3_adaptive_matches_ring_oracle(self, rng):
        img = random_int_image(rng, 9, 9)
        maps = encode_pattern_maps(img, CodeConfig(order=3, mode="adaptive_median"))
        oracle = pattern_maps_bruteforce(img, 3, mode="adaptive_median")
        for got, expected in zip(maps, oracle):
            assert np.array_equal(got, expected)

    def test_order3_prominent_matches_ring_oracle(self, rng):
        img = random_int_image(rng, 10, 11)
        maps = encode_pattern_maps(img, CodeConfig(order=3, t=4))
        oracle = pattern_maps_bruteforce(img, 3, mode="prominent", t=4)
        for got, expected in zip(maps, oracle):
            assert np.array_equal(got, expected)

    def test_max_plane_source_matches_ring_oracle(self, rng):
        img = random_int_image(rng, 9, 9)
        config = CodeConfig(order=2, t=3, response_source="max_plane")
        maps = encode_pattern_maps(img, config)
        oracle = pattern_maps_bruteforce(img, 2, mode="prominent", t=3, source="max_plane")
        for got, expected in zip(maps, oracle):
            assert np.array_equal(got, expected)

    def test_layer_maps_do_not_depend_on_order(self, rng):
        # replicate padding makes layer l identical under any margin >= l
        img = random_int_image(rng, 12, 12)
        big = encode_pattern_maps(img, CodeConfig(order=3, t=3))
        for order in (1, 2):
            small = encode_pattern_maps(img, CodeConfig(order=order, t=3))
            for layer in range(order):
                assert np.array_equal(big[layer], small[layer])

    def test_scalar_responses_match_map_values_bitwise(self, rng):
        img = rng.random((9, 9)) * 255  # non-integer values on purpose
        n = 2
        stack = kirsch_filter(pad(img, n))
        for layer in (1, 2):
            means = _layer_mean_map(stack, layer, n, img.shape, "per_direction_plane")
            for y, x in [(0, 0), (3, 5), (8, 8)]:
                scalar = directional_responses(stack, (y + n, x + n), layer)
                assert np.array_equal(scalar, means[:, y, x])

    def test_image_too_small(self):
        with pytest.raises(ValueError):
            encode_pattern_maps(np.zeros((6, 9)), CodeConfig(order=3, t=3))

    def test_deterministic(self, rng):
        img = random_int_image(rng, 9, 9)
        config = CodeConfig(order=2, t=5)
        first = encode_pattern_maps(img, config)
        second = encode_pattern_maps(img, config)
        for a, b in zip(first, second):
            assert np.array_equal(a, b)


class TestCodeConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            CodeConfig(order=0)
        with pytest.raises(ValueError):
            CodeConfig(mode="top_k")
        with pytest.raises(ValueError):
            CodeConfig(t=8)
        with pytest.raises(ValueError):
            CodeConfig(response_source="mean_plane")
        # t is ignored in adaptive mode
        CodeConfig(order=2, mode="adaptive_median", t=3)

    def test_fingerprints(self):
        assert CodeConfig(order=2, t=3).fingerprint() == "HOLDP[order=2,t=3]"
        assert (
            CodeConfig(order=4, mode="adaptive_median").fingerprint() == "AHOLDP[order=4]"
        )
        assert "max_plane" in CodeConfig(order=1, t=2, response_source="max_plane").fingerprint()


class TestAffineInvariance:
    CONFIGS = [
        CodeConfig(order=1, t=3),
        CodeConfig(order=3, t=5),
        CodeConfig(order=2, mode="adaptive_median"),
        CodeConfig(order=2, t=2, response_source="max_plane"),
    ]

    def test_directional_maps_invariant(self, rng):
        img = random_int_image(rng, 12, 12)
        for a, b in [(2, 10), (3, -25), (7, 100)]:
            transformed = a * img + b
            for config in self.CONFIGS:
                before = encode_pattern_maps(img, config)
                after = encode_pattern_maps(transformed, config)
                for x, y in zip(before, after):
                    assert np.array_equal(x, y)

    def test_lbp_map_invariant(self, rng):
        img = random_int_image(rng, 12, 12)
        assert np.array_equal(lbp_map(img), lbp_map(3 * img + 40))

    def test_ltp_not_invariant_with_unscaled_tau(self, rng):
        # gain stretches differences across the dead zone: find a counterexample
        tau = 2.0
        found = False
        for trial in range(50):
            img = random_int_image(np.random.default_rng(trial), 8, 8, lo=0, hi=8)
            before = ltp_maps(img, tau)
            after = ltp_maps(5 * img + 11, tau)
            if not (np.array_equal(before[0], after[0]) and np.array_equal(before[1], after[1])):
                found = True
                break
        assert found

    def test_ltp_invariant_when_tau_scales(self, rng):
        img = random_int_image(rng, 10, 10)
        a, b = 3, 17
        before = ltp_maps(img, 2.0)
        after = ltp_maps(a * img + b, a * 2.0)
        assert np.array_equal(before[0], after[0])
        assert np.array_equal(before[1], after[1])
