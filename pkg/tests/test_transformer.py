import numpy as np
import pytest

from wordbox.layer import Layer, layers_equal
from wordbox.transformer import TransformError, TransformParams, add_margins, transform, transform_matrix


def _text_like(w=40, h=20, seed=0):
    rng = np.random.default_rng(seed)
    alpha = np.zeros((h, w), np.uint8)
    alpha[1:h - 1, 1:w - 1] = 255
    alpha[2:h - 2, 3:w - 3] = 0
    layer = Layer.from_alpha(alpha, 0, 7, -3)
    layer.pixels[..., :3][alpha > 0] = rng.integers(0, 256, (int((alpha > 0).sum()), 3))
    return layer


IDENTITIES = [
    TransformParams(),
    TransformParams("rotate", rotate_angle=0.0),
    TransformParams("rotate", rotate_angle=360.0),
    TransformParams("stretch", stretch=(1.0, 1.0)),
    TransformParams("skew", skew_angle=0.0),
    TransformParams("trapezoidate", trapezoid_ratio=1.0),
]


@pytest.mark.parametrize("params", IDENTITIES)
def test_identity_params(params):
    layer = _text_like()
    assert layers_equal(transform(layer, params), layer)


@pytest.mark.parametrize("w,h", [(40, 20), (227, 30), (41, 21), (5, 8)])
def test_rotate_90_swaps_dims(w, h):
    layer = _text_like(w, h)
    out = transform(layer, TransformParams("rotate", rotate_angle=90.0))
    assert (out.width, out.height) == (h, w)
    # positive angles turn anticlockwise, like np.rot90
    assert np.array_equal(out.pixels, np.rot90(layer.pixels))


def test_stretch_corner_mapping():
    w, h = 30, 12
    m = transform_matrix(TransformParams("stretch", stretch=(2.0, 1.0)), w, h)
    corner = m @ np.array([w, 0, 1.0])
    assert tuple(corner[:2] / corner[2]) == (2 * w, 0)
    out = transform(Layer.solid(w, h, (9, 9, 9)), TransformParams("stretch", stretch=(2.0, 1.0)))
    assert (out.width, out.height) == (2 * w, h)


def test_trapezoid_keeps_ratio_on_edge():
    w, h = 40, 20
    m = transform_matrix(TransformParams("trapezoidate", trapezoid_edge="top", trapezoid_ratio=0.5), w, h)
    pts = [(m @ np.array([x, y, 1.0])) for x, y in ((0, 0), (w, 0), (0, h), (w, h))]
    pts = [p[:2] / p[2] for p in pts]
    assert np.allclose(pts[1][0] - pts[0][0], w / 2)
    assert np.allclose(pts[3][0] - pts[2][0], w)


def test_zero_margins_unchanged():
    layer = _text_like()
    assert layers_equal(add_margins(layer, (0, 0, 0, 0)), layer)


def test_margins_size_and_translation():
    layer = _text_like(40, 20)
    out = add_margins(layer, (1, 2, 3, 4))
    assert (out.width, out.height) == (40 + 7, 20 + 3)
    assert np.array_equal(out.pixels[1:21, 3:43], layer.pixels)
    assert (out.alpha > 0).sum() == (layer.alpha > 0).sum()


def test_negative_margin_rejected():
    with pytest.raises(ValueError):
        add_margins(_text_like(), (0, -1, 0, 0))


@pytest.mark.parametrize("params", [
    TransformParams("rotate", rotate_angle=17.0),
    TransformParams("rotate", rotate_angle=-23.0),
    TransformParams("skew", skew_direction="right", skew_angle=12.0),
    TransformParams("skew", skew_direction="top", skew_angle=9.0),
])
def test_coverage_preserved(params):
    alpha = np.zeros((60, 120), np.uint8)
    alpha[10:50, 10:110] = 255
    layer = Layer.from_alpha(alpha, 0)
    out = transform(layer, params)
    before = layer.alpha.astype(np.float64).sum()
    after = out.alpha.astype(np.float64).sum()
    assert abs(after - before) <= 0.05 * before


def test_transform_and_margins_do_not_commute():
    layer = _text_like()
    params = TransformParams("rotate", rotate_angle=20.0)
    a = add_margins(transform(layer, params), (2, 5, 1, 9))
    b = transform(add_margins(layer, (2, 5, 1, 9)), params)
    assert not layers_equal(a.normalized(), b.normalized())


def test_oversized_canvas_raises():
    with pytest.raises(TransformError):
        transform(_text_like(), TransformParams("stretch", stretch=(100.0, 1.0)), max_dim=500)


def test_params_validation():
    with pytest.raises(ValueError):
        TransformParams("spin")
    with pytest.raises(ValueError):
        TransformParams("stretch", stretch=(0.0, 1.0))
