import numpy as np
import pytest

from wordbox.blend import BlendMode
from wordbox.compositor import (
    CompositeScene, composite, leak_ratio, make_background, protected_mask, to_gray, visibility_check,
)
from wordbox.layer import Layer, layers_equal

from oracles import leak_counts_oracle


def _fg(w=20, h=10, gray=0, x=5, y=4, seed=0):
    rng = np.random.default_rng(seed)
    alpha = np.zeros((h, w), np.uint8)
    alpha[2:-2, 2:-2] = 255
    alpha[2:-2, 2] = rng.integers(1, 255, h - 4)
    return Layer.from_alpha(alpha, gray, x, y)


def test_background_opacity_zero_is_solid(rng, resources):
    bg = make_background(resources, (30, 20), 77, rng, opacity=0.0)
    assert (bg.rgb == 77).all() and (bg.alpha == 255).all()


def test_background_opacity_one_is_texture(rng):
    tex = np.full((10, 10, 3), 201, np.uint8)
    bg = make_background(None, (30, 20), 77, rng, opacity=1.0, texture=tex)
    assert (bg.rgb == 201).all()


def test_background_half_opacity_midpoint(rng):
    tex = np.full((10, 10, 3), 200, np.uint8)
    bg = make_background(None, (30, 20), 77, rng, opacity=0.5, texture=tex)
    assert (bg.rgb == (77 + 200 + 1) // 2).all()


def test_background_from_pool(rng, resources):
    bg = make_background(resources, (64, 32), 128, rng)
    assert (bg.width, bg.height) == (64, 32)


def test_opaque_fg_verbatim():
    bg = Layer.solid(40, 20, 200)
    alpha = np.zeros((10, 20), np.uint8)
    alpha[3:7, 3:17] = 255
    fg = Layer.from_alpha(alpha, 30, 5, 4)
    out = composite(CompositeScene(bg, fg))
    region = out.pixels[4:14, 5:25, :3]
    assert (region[alpha == 255] == 30).all()
    assert (region[alpha == 0] == 200).all()
    assert (out.pixels[:4, :, :3] == 200).all()


def test_normal_mode_equals_alpha_over_oracle(rng):
    bg_rgb = rng.integers(0, 256, (20, 40, 3), dtype=np.uint8)
    bg = Layer(np.concatenate([bg_rgb, np.full((20, 40, 1), 255, np.uint8)], axis=2))
    fg_px = rng.integers(0, 256, (20, 40, 4), dtype=np.uint8)
    fg_px[..., :3][fg_px[..., 3] == 0] = 0
    fg = Layer(fg_px)
    out = composite(CompositeScene(bg, fg, midground=Layer.blank(8, 8)))
    a = fg_px[..., 3:].astype(np.int64)
    num = fg_px[..., :3].astype(np.int64) * a + bg_rgb.astype(np.int64) * (255 - a)
    expected = (2 * num + 255) // 510
    assert np.array_equal(out.rgb, expected)


def test_midground_off_canvas_is_ignored():
    bg = Layer.solid(40, 20, 128)
    fg = _fg()
    mid = Layer.from_alpha(np.full((6, 6), 255, np.uint8), 0)
    plain = composite(CompositeScene(bg, fg), fg_mode=BlendMode.MULTIPLY)
    for shift in ((-6, 0), (40, 3), (5, -6), (0, 20)):
        with_mid = composite(CompositeScene(bg, fg, mid), BlendMode.SCREEN, BlendMode.MULTIPLY, shift)
        assert layers_equal(with_mid, plain)


@pytest.mark.parametrize("margin", [0, 2, 4])
def test_protected_region_free_of_midground(margin):
    bg = Layer.solid(60, 30, 180)
    fg = _fg(20, 12, 10, 20, 9)
    mid = Layer.from_alpha(np.full((30, 60), 255, np.uint8), 60)
    scene = CompositeScene(bg, fg, mid, fg_protect_margin=margin)
    with_mid = composite(scene, BlendMode.NORMAL, BlendMode.NORMAL, (0, 0))
    without = composite(CompositeScene(bg, fg, None, margin))
    canvas_alpha = np.zeros((30, 60), np.uint8)
    canvas_alpha[9:21, 20:40] = fg.alpha
    # oracle: brute-force disk neighbourhood of every text pixel
    ys, xs = np.nonzero(canvas_alpha)
    protect = np.zeros_like(canvas_alpha, bool)
    for y, x in zip(ys, xs):
        for dy in range(-margin, margin + 1):
            for dx in range(-margin, margin + 1):
                if dx * dx + dy * dy <= margin * margin and 0 <= y + dy < 30 and 0 <= x + dx < 60:
                    protect[y + dy, x + dx] = True
    assert np.array_equal(with_mid.rgb[protect], without.rgb[protect])
    assert (with_mid.rgb[~protect] == 60).all()
    assert np.array_equal(protected_mask(canvas_alpha, margin), protect)


def test_background_must_be_opaque():
    with pytest.raises(ValueError):
        CompositeScene(Layer.blank(4, 4), Layer.blank(1, 1))


def _scene_image(text_gray, bg_gray, size=32):
    alpha = np.zeros((size, size), np.uint8)
    alpha[8:24, 6:26] = 255
    fg = Layer.from_alpha(alpha, text_gray)
    return composite(CompositeScene(Layer.solid(size, size, bg_gray), fg)), alpha


def test_max_contrast_kept():
    image, alpha = _scene_image(0, 255)
    assert leak_ratio(image, alpha, 10) == 0.0
    assert visibility_check(image, alpha, 10)


@pytest.mark.parametrize("tol", [0, 10, 255])
def test_equal_color_discarded(tol):
    image, alpha = _scene_image(140, 140)
    assert leak_ratio(image, alpha, tol) == 1.0
    assert not visibility_check(image, alpha, tol)


def test_half_broken_boundary():
    gray = np.full((16, 16), 200, np.uint8)
    text = np.zeros((16, 16), bool)
    text[3:7, 3:13] = True
    text[9:13, 3:13] = True
    gray[3:7, 3:13] = 20       # contrasting block
    gray[9:13, 3:13] = 205     # blends into the background
    assert leak_counts_oracle(gray, text, 10) == (24, 48)
    image = np.repeat(gray[..., None], 3, axis=2)
    assert leak_ratio(image, text.astype(np.uint8) * 255, 10) == 0.5


def test_no_text_discarded():
    image, _ = _scene_image(0, 255)
    assert leak_ratio(image, np.zeros((32, 32), np.uint8)) is None
    assert not visibility_check(image, np.zeros((32, 32), np.uint8))


def test_gray_is_integer_mean():
    px = np.array([[[255, 255, 254], [1, 1, 0]]], np.uint8)
    assert to_gray(px).tolist() == [[254, 0]]


def test_decision_is_deterministic(rng):
    image = rng.integers(0, 256, (24, 24, 3), dtype=np.uint8)
    alpha = (rng.random((24, 24)) > 0.6).astype(np.uint8) * 255
    results = {(leak_ratio(image, alpha, 12), visibility_check(image, alpha, 12)) for _ in range(5)}
    assert len(results) == 1
