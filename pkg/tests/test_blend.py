import numpy as np
import pytest

from wordbox.blend import BlendMode, blend, blend_pixel, blend_table

from oracles import REFERENCE

C = np.arange(256)


def test_every_mode_has_a_reference():
    assert {m.value for m in BlendMode} == set(REFERENCE)


def test_multiply_white_identity():
    assert np.array_equal(blend_table(BlendMode.MULTIPLY)[:, 255], C)


def test_screen_black_identity():
    assert np.array_equal(blend_table(BlendMode.SCREEN)[:, 0], C)


def test_difference_self_zero():
    assert not blend_table(BlendMode.DIFFERENCE)[C, C].any()


def test_addition_clamps():
    assert blend_pixel(200, 100, BlendMode.ADDITION) == (255,)


def test_overlay_sample_matches_reference():
    assert blend_pixel(64, 128, "overlay") == (REFERENCE["overlay"](64, 128),)


def test_divide_by_zero_is_white():
    assert (blend_table(BlendMode.DIVIDE)[:, 0] == 255).all()


def test_darken_lighten_are_min_max():
    a, b = np.meshgrid(C, C, indexing="ij")
    assert np.array_equal(blend_table(BlendMode.DARKEN_ONLY), np.minimum(a, b))
    assert np.array_equal(blend_table(BlendMode.LIGHTEN_ONLY), np.maximum(a, b))


@pytest.mark.parametrize("mode", list(BlendMode))
def test_random_pairs_match_reference(mode):
    rng = np.random.default_rng(hash(mode.value) % 2 ** 32)
    table = blend_table(mode)
    for a, b in rng.integers(0, 256, (500, 2)):
        assert table[a, b] == REFERENCE[mode.value](int(a), int(b)), (mode, a, b)


def test_tables_are_read_only():
    with pytest.raises(ValueError):
        blend_table(BlendMode.NORMAL)[0, 0] = 1


def test_blend_arrays_elementwise(rng):
    base = rng.integers(0, 256, (7, 5, 3), dtype=np.uint8)
    top = rng.integers(0, 256, (7, 5, 3), dtype=np.uint8)
    out = blend(base, top, "screen")
    assert out.shape == base.shape and out.dtype == np.uint8
    assert out[3, 2, 1] == REFERENCE["screen"](int(base[3, 2, 1]), int(top[3, 2, 1]))


def test_unknown_mode():
    with pytest.raises(ValueError):
        blend_table("burn")
