"""Per-sample rendering pipeline, parallel batch generation and corpus stats.

Each sample draws its randomness from streams keyed on ``(seed, index)``,
so the output of a run does not depend on worker count or scheduling.
"""

from __future__ import annotations

import json
import logging
import multiprocessing
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple

import cv2
import numpy as np
from PIL import Image

from wordbox import kernels
from wordbox.blend import BlendMode
from wordbox.compositor import CompositeScene, composite, leak_ratio, make_background
from wordbox.config import GenConfig
from wordbox.glyph_shaper import GlyphRenderError, ShapeParams, shape_text
from wordbox.layer import Layer
from wordbox.postprocessor import (GaussianBlur, GaussianNoise, Jpeg, MedianBlur, PostParams,
                                   Resize, postprocess)
from wordbox.resources import (FontInfo, NoFontError, ResourceSet, load_resources, pick_font,
                               pick_texture)
from wordbox.styler import Border, Extrude, Shadow, apply_effect, apply_texture, colorize, sample_colors
from wordbox.text_sampler import sample as sample_text
from wordbox.text_sampler import sample_plain
from wordbox.transformer import TransformError, TransformParams, add_margins, transform

log = logging.getLogger(__name__)

IMAGE_DIR = "images"
MANIFEST_NAME = "gt.txt"
SUMMARY_NAME = "summary.json"

# stream keys below the (seed, index) root
_TEXT_STREAM = 0
_RENDER_STREAM = 1


class ManifestError(ValueError):
    pass


@dataclass(frozen=True)
class GtRecord:
    path: str
    label: str
    index: int
    origin: str


@dataclass
class SampleResult:
    index: int
    status: str  # "ok" or "failed"
    image: Optional[np.ndarray] = None
    record: Optional[GtRecord] = None
    attempts: int = 0
    discards: int = 0
    error: Optional[str] = None
    trace: Dict[str, object] = field(default_factory=dict)
    stages: Dict[str, np.ndarray] = field(default_factory=dict)


def sample_rng(seed: int, index: int, *key: int) -> np.random.Generator:
    """Independent stream for ``(seed, index, *key)``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,) + tuple(key)))


def load_resources_for(cfg: GenConfig) -> ResourceSet:
    r = cfg.resources
    return load_resources(r.lexicon, r.fonts, r.textures, r.color_map, r.case_augment)


def image_relpath(index: int, fmt: str) -> str:
    return f"{IMAGE_DIR}/{index:08d}.{fmt}"


def _uniform(rng: np.random.Generator, bounds) -> float:
    lo, hi = bounds
    return float(rng.uniform(lo, hi)) if hi > lo else float(lo)


def _randint(rng: np.random.Generator, bounds) -> int:
    lo, hi = bounds
    return int(rng.integers(int(lo), int(hi) + 1))


def _chance(rng: np.random.Generator, p: float) -> bool:
    return p > 0 and rng.random() < p


# -- per-stage parameter sampling -------------------------------------------

def _shape_params(font: FontInfo, cfg: GenConfig, rng: np.random.Generator,
                  trace: Dict[str, object]) -> ShapeParams:
    sh = cfg.shape
    curved = sh.curve.enabled and _chance(rng, sh.curve.prob)
    elastic = None
    if sh.elastic.enabled and _chance(rng, sh.elastic.prob):
        elastic = (_uniform(rng, sh.elastic.alpha), _uniform(rng, sh.elastic.sigma))
    params = ShapeParams(
        font=font,
        font_size=_randint(rng, sh.font_size),
        thickness=_randint(rng, sh.thickness),
        char_margin=_randint(rng, sh.char_margin),
        curved=curved,
        curve_gap=_randint(rng, sh.curve.gap) if curved else 0,
        curve_upward=curved and _chance(rng, sh.curve.upward_prob),
        rotate_with_slope=curved and _chance(rng, sh.curve.rotate_prob),
        elastic=elastic,
    )
    trace["curved_text"] = bool(trace.get("curved_text")) or curved
    trace["elastic_distortion"] = bool(trace.get("elastic_distortion")) or elastic is not None
    return params


def _colors(res: ResourceSet, cfg: GenConfig, rng: np.random.Generator) -> List[int]:
    """Text, background and effect grays."""
    if cfg.style.color_map.enabled:
        colors = sample_colors(res.color_map, rng)
        if len(colors) == 2:
            colors.append(int(rng.integers(256)))
        return colors
    return [int(v) for v in rng.integers(0, 256, size=3)]


def _effect(cfg: GenConfig, gray: int, rng: np.random.Generator):
    ec = cfg.style.effect
    kind = int(rng.integers(3))
    if kind == 0:
        return Border(_randint(rng, ec.border_width), gray)
    if kind == 1:
        return Shadow(_randint(rng, ec.shadow_offset), _randint(rng, ec.shadow_offset), gray)
    direction = (int(rng.choice((-1, 1))), int(rng.choice((-1, 1))))
    return Extrude(_randint(rng, ec.extrude_depth), gray, direction)


def _transform_params(cfg: GenConfig, rng: np.random.Generator) -> TransformParams:
    tc = cfg.transform
    kind = tc.kinds[int(rng.integers(len(tc.kinds)))]
    if kind == "stretch":
        return TransformParams("stretch", stretch=(_uniform(rng, tc.stretch), _uniform(rng, tc.stretch)))
    if kind == "trapezoidate":
        edge = ("top", "bottom", "left", "right")[int(rng.integers(4))]
        return TransformParams("trapezoidate", trapezoid_edge=edge,
                               trapezoid_ratio=_uniform(rng, tc.trapezoid_ratio))
    if kind == "skew":
        direction = ("right", "left", "top", "bottom")[int(rng.integers(4))]
        return TransformParams("skew", skew_direction=direction, skew_angle=_uniform(rng, tc.skew_angle))
    if kind == "rotate":
        return TransformParams("rotate", rotate_angle=_uniform(rng, tc.rotate_angle))
    return TransformParams("none")


def _post_params(cfg: GenConfig, rng: np.random.Generator) -> PostParams:
    pc = cfg.post
    ops = []
    if _chance(rng, pc.prob):
        ops.append(GaussianNoise(_uniform(rng, pc.noise_sigma)))
    if _chance(rng, pc.prob):
        ops.append(GaussianBlur(_uniform(rng, pc.blur_radius)))
    if _chance(rng, pc.prob):
        ops.append(Resize(_uniform(rng, pc.resize_scale)))
    if _chance(rng, pc.prob):
        ops.append(MedianBlur(int(pc.median_kernel[int(rng.integers(len(pc.median_kernel)))])))
    if _chance(rng, pc.prob):
        ops.append(Jpeg(_randint(rng, pc.jpeg_quality)))
    return PostParams(tuple(ops))


def _blend_mode(cfg: GenConfig, rng: np.random.Generator) -> BlendMode:
    if not cfg.blend.enabled:
        return BlendMode.NORMAL
    return BlendMode(cfg.blend.modes[int(rng.integers(len(cfg.blend.modes)))])


# -- rendering -------------------------------------------------------------

def _render_text_layer(text: str, font: FontInfo, text_gray: int, effect_gray: int,
                       res: ResourceSet, cfg: GenConfig, rng: np.random.Generator,
                       trace: Dict[str, object], stages: Optional[Dict[str, np.ndarray]],
                       prefix: str) -> Layer:
    """Stages (a) shape, (b) style and (c) transform for one text layer."""
    trace[f"{prefix}_text"] = text
    layer = shape_text(text, _shape_params(font, cfg, rng, trace), rng)
    if stages is not None:
        stages[f"{prefix}_a_shape"] = layer.pixels.copy()

    layer = colorize(layer, text_gray)
    tc = cfg.style.texture
    if tc.enabled and _chance(rng, tc.prob):
        layer = apply_texture(layer, pick_texture(res.textures, rng), _uniform(rng, tc.alpha), rng)
        trace["texture_blending"] = True
    if cfg.style.effect.enabled and _chance(rng, cfg.style.effect.prob):
        layer = apply_effect(layer, _effect(cfg, effect_gray, rng))
        trace["text_effect"] = True
    if stages is not None:
        stages[f"{prefix}_b_style"] = layer.pixels.copy()

    if cfg.transform.enabled:
        params = _transform_params(cfg, rng)
        layer = transform(layer, params, cfg.transform.max_dim).crop_to_content()
        trace["transformation"] = True
        trace[f"{prefix}_transform"] = params.kind
    if stages is not None:
        stages[f"{prefix}_c_transform"] = layer.pixels.copy()
    return layer


def _margins(layer: Layer, cfg: GenConfig, rng: np.random.Generator) -> Tuple[int, int, int, int]:
    lo, hi = cfg.margin.ratio
    h, w = layer.height, layer.width
    return (int(round(_uniform(rng, (lo, hi)) * h)), int(round(_uniform(rng, (lo, hi)) * h)),
            int(round(_uniform(rng, (lo, hi)) * w)), int(round(_uniform(rng, (lo, hi)) * w)))


def _attempt(text: str, font: FontInfo, res: ResourceSet, cfg: GenConfig, rng: np.random.Generator,
             capture: bool):
    trace: Dict[str, object] = {name: False for name in (
        "curved_text", "elastic_distortion", "color_map", "texture_blending", "text_effect",
        "transformation", "margin", "midground_text", "blending_modes", "visibility_check",
        "post_processing")}
    stages: Optional[Dict[str, np.ndarray]] = {} if capture else None

    text_gray, bg_gray, effect_gray = _colors(res, cfg, rng)
    trace["color_map"] = cfg.style.color_map.enabled
    fg = _render_text_layer(text, font, text_gray, effect_gray, res, cfg, rng, trace, stages, "fg")

    if cfg.margin.enabled:
        fg = add_margins(fg, _margins(fg, cfg, rng))
        trace["margin"] = True
    if stages is not None:
        stages["fg_margin"] = fg.pixels.copy()

    mid = None
    mid_shift = (0, 0)
    if cfg.midground.enabled and _chance(rng, cfg.midground.prob):
        mid_text = sample_plain(res.lexicon, rng).text
        try:
            mid_font = pick_font(res.fonts, mid_text, rng)
        except NoFontError:
            mid_font = None
        if mid_font is not None:
            mid_gray, _, mid_effect_gray = _colors(res, cfg, rng)
            mid = _render_text_layer(mid_text, mid_font, mid_gray, mid_effect_gray, res, cfg, rng,
                                     trace, stages, "mid")
            mid_shift = (int(rng.integers(-(mid.width - 1), fg.width)),
                         int(rng.integers(-(mid.height - 1), fg.height)))
            trace["midground_text"] = True

    tex = cfg.style.texture
    bg_opacity = _uniform(rng, tex.background_alpha) if tex.enabled else 0.0
    background = make_background(res, (fg.width, fg.height), bg_gray, rng, opacity=bg_opacity)
    background.offset_x, background.offset_y = fg.offset_x, fg.offset_y
    if bg_opacity > 0:
        trace["texture_blending"] = True
    if stages is not None:
        stages["background"] = background.pixels.copy()

    mid_mode, fg_mode = _blend_mode(cfg, rng), _blend_mode(cfg, rng)
    trace["blending_modes"] = cfg.blend.enabled
    trace["mid_mode"], trace["fg_mode"] = mid_mode.value, fg_mode.value
    scene = CompositeScene(background, fg, mid, cfg.visibility.protect_margin)
    merged = composite(scene, mid_mode, fg_mode, mid_shift)
    if stages is not None:
        stages["d_blend"] = merged.pixels.copy()

    keep = True
    if cfg.visibility.enabled:
        ratio = leak_ratio(merged, fg.alpha, cfg.visibility.tolerance)
        trace["visibility_check"] = True
        trace["leak_ratio"] = ratio
        keep = ratio is not None and ratio <= cfg.visibility.threshold

    final = merged
    if keep and cfg.post.enabled:
        params = _post_params(cfg, rng)
        final = postprocess(merged, params, rng)
        trace["post_processing"] = True
        trace["post_ops"] = [type(op).__name__ for op in params.ops]
    if stages is not None:
        stages["e_post"] = final.pixels.copy()
    return keep, final, trace, stages


def _select_text(res: ResourceSet, cfg: GenConfig, index: int):
    rng = sample_rng(cfg.output.seed, index, _TEXT_STREAM)
    for _ in range(cfg.retry_limit):
        sample = sample_text(res.lexicon, cfg.text, rng)
        try:
            return sample, pick_font(res.fonts, sample.text, rng)
        except NoFontError:
            continue
    return None, None


def generate_sample(res: ResourceSet, cfg: GenConfig, index: int, capture: bool = False) -> SampleResult:
    """Render sample ``index``; failures are reported in the result, not raised."""
    sample, font = _select_text(res, cfg, index)
    if sample is None:
        return SampleResult(index, "failed", error="no font covers the sampled texts")
    discards = 0
    last_trace: Dict[str, object] = {}
    last_stages: Dict[str, np.ndarray] = {}
    last_error = None
    for attempt in range(cfg.retry_limit):
        rng = sample_rng(cfg.output.seed, index, _RENDER_STREAM, attempt)
        try:
            keep, final, trace, stages = _attempt(sample.text, font, res, cfg, rng, capture)
        except (TransformError, GlyphRenderError) as exc:
            last_error = str(exc)
            continue
        trace["attempt"] = attempt
        trace["font"] = font.family
        last_trace, last_stages = trace, stages or {}
        if not keep:
            discards += 1
            last_error = "visibility check discarded every attempt"
            continue
        record = GtRecord(image_relpath(index, cfg.output.format), sample.text, index, sample.origin.value)
        return SampleResult(index, "ok", final.rgb.copy(), record, attempt + 1, discards,
                            trace=trace, stages=stages or {})
    return SampleResult(index, "failed", attempts=cfg.retry_limit, discards=discards,
                        error=last_error, trace=last_trace, stages=last_stages)


# -- batch -----------------------------------------------------------------

def encode_image(rgb: np.ndarray, path: Path, fmt: str) -> None:
    im = Image.fromarray(rgb, "RGB")
    if fmt == "png":
        im.save(path, format="PNG")
    else:
        im.save(path, format="JPEG", quality=95)


def write_manifest(records: Iterable[GtRecord], path: Path) -> None:
    lines = []
    for rec in records:
        if any(c in rec.label for c in "\t\r\n"):
            raise ManifestError(f"label of sample {rec.index} contains a tab or newline")
        lines.append(f"{rec.path}\t{rec.label}\n")
    Path(path).write_text("".join(lines), encoding="utf-8")


def read_manifest(path) -> List[Tuple[str, str]]:
    entries = []
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0]:
                raise ManifestError(f"{path}:{lineno}: expected 'path<TAB>label'")
            entries.append((parts[0], parts[1]))
    return entries


@dataclass
class RunSummary:
    count: int
    succeeded: int
    failed: int
    discard_retries: int
    failed_indices: List[int]
    label_mismatches: int
    wall_time: float
    backend: str
    config: Dict[str, object]

    def to_dict(self):
        return asdict(self)


_worker_state: Dict[str, object] = {}


def _init_worker(cfg: GenConfig) -> None:
    cv2.setNumThreads(1)
    _worker_state["cfg"] = cfg
    _worker_state["res"] = load_resources_for(cfg)


def _run_one(index: int):
    cfg: GenConfig = _worker_state["cfg"]
    res: ResourceSet = _worker_state["res"]
    result = generate_sample(res, cfg, index)
    if result.status == "ok":
        encode_image(result.image, Path(cfg.output.dir) / result.record.path, cfg.output.format)
    trace = {k: result.trace.get(k) for k in ("fg_text",)}
    return result.index, result.status, result.record, result.discards, result.error, trace


def generate_batch(cfg: GenConfig) -> RunSummary:
    """Generate ``cfg.output.count`` samples and write images, manifest and summary."""
    start = time.perf_counter()
    out_dir = Path(cfg.output.dir)
    (out_dir / IMAGE_DIR).mkdir(parents=True, exist_ok=True)
    indices = range(cfg.output.count)
    if cfg.output.workers == 1:
        _init_worker(cfg)
        results = [_run_one(i) for i in indices]
    else:
        ctx = multiprocessing.get_context("spawn")
        chunk = max(1, cfg.output.count // (cfg.output.workers * 4))
        with ProcessPoolExecutor(cfg.output.workers, mp_context=ctx,
                                 initializer=_init_worker, initargs=(cfg,)) as pool:
            results = list(pool.map(_run_one, indices, chunksize=chunk))
    records, failed, discards, mismatches = [], [], 0, 0
    for index, status, record, n_discards, error, trace in results:
        discards += n_discards
        if status == "ok":
            records.append(record)
            if record.label != trace["fg_text"]:
                mismatches += 1
        else:
            failed.append(index)
            log.warning("sample %d failed: %s", index, error)
    write_manifest(records, out_dir / MANIFEST_NAME)
    summary = RunSummary(
        count=cfg.output.count,
        succeeded=len(records),
        failed=len(failed),
        discard_retries=discards,
        failed_indices=failed,
        label_mismatches=mismatches,
        wall_time=time.perf_counter() - start,
        backend=kernels.BACKEND,
        config=cfg.to_dict(),
    )
    (out_dir / SUMMARY_NAME).write_text(json.dumps(summary.to_dict(), indent=2, ensure_ascii=False),
                                        encoding="utf-8")
    return summary


def stats(manifest) -> Dict[str, object]:
    """Label-length histogram and per-character word counts of a manifest."""
    labels = [label for _, label in read_manifest(manifest)]
    lengths = Counter(len(label) for label in labels)
    chars = Counter(ch for label in labels for ch in set(label))
    return {
        "count": len(labels),
        "length_histogram": {str(k): lengths[k] for k in sorted(lengths)},
        "char_word_counts": [[ch, n] for ch, n in sorted(chars.items(), key=lambda kv: (-kv[1], kv[0]))],
    }


def preview(cfg: GenConfig, count: int, out_dir) -> List[Dict[str, object]]:
    """Render ``count`` samples with every intermediate stage saved as PNG.

    Returns the per-sample stage traces, which are also written as
    ``trace.json`` next to the stage images.
    """
    out_dir = Path(out_dir)
    res = load_resources_for(cfg)
    traces = []
    for index in range(count):
        result = generate_sample(res, cfg, index, capture=True)
        sample_dir = out_dir / f"{index:04d}"
        sample_dir.mkdir(parents=True, exist_ok=True)
        for name, px in result.stages.items():
            mode = "RGBA" if px.shape[-1] == 4 else "RGB"
            Image.fromarray(px, mode).save(sample_dir / f"{name}.png")
        if result.image is not None:
            Image.fromarray(result.image, "RGB").save(sample_dir / "final.png")
        trace = dict(result.trace, index=index, status=result.status, label=(
            result.record.label if result.record else None))
        (sample_dir / "trace.json").write_text(json.dumps(trace, indent=2, ensure_ascii=False),
                                               encoding="utf-8")
        traces.append(trace)
    return traces
