"""Generation config: the parameter tree for one run.

A user config is a YAML document merged key-by-key over the packaged
``default_config.yaml``.
"""

from __future__ import annotations

import copy
import dataclasses
import typing
from dataclasses import dataclass, field
from importlib import resources as importlib_resources
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple

import yaml

from wordbox.blend import BlendMode
from wordbox.text_sampler import SamplerConfig
from wordbox.transformer import KINDS


class ConfigError(ValueError):
    pass


Range = Tuple[float, float]
IntRange = Tuple[int, int]


@dataclass
class ResourcePaths:
    lexicon: str
    fonts: str
    textures: str
    color_map: str
    case_augment: bool = True


@dataclass
class CurveConfig:
    enabled: bool = True
    prob: float = 0.3
    gap: IntRange = (2, 10)
    upward_prob: float = 0.5
    rotate_prob: float = 0.5


@dataclass
class ElasticConfig:
    enabled: bool = True
    prob: float = 0.5
    alpha: Range = (0.5, 1.5)
    sigma: Range = (2.0, 4.0)


@dataclass
class ShapeConfig:
    font_size: IntRange = (24, 40)
    thickness: IntRange = (0, 1)
    char_margin: IntRange = (0, 3)
    curve: CurveConfig = field(default_factory=CurveConfig)
    elastic: ElasticConfig = field(default_factory=ElasticConfig)


@dataclass
class ColorMapToggle:
    enabled: bool = True


@dataclass
class TextureConfig:
    enabled: bool = True
    prob: float = 0.5
    alpha: Range = (0.0, 1.0)
    background_alpha: Range = (0.0, 1.0)


@dataclass
class EffectConfig:
    enabled: bool = True
    prob: float = 0.5
    border_width: IntRange = (1, 4)
    shadow_offset: IntRange = (-4, 4)
    extrude_depth: IntRange = (1, 4)


@dataclass
class StyleConfig:
    color_map: ColorMapToggle = field(default_factory=ColorMapToggle)
    texture: TextureConfig = field(default_factory=TextureConfig)
    effect: EffectConfig = field(default_factory=EffectConfig)


@dataclass
class TransformConfig:
    enabled: bool = True
    kinds: Tuple[str, ...] = KINDS
    stretch: Range = (0.75, 1.25)
    trapezoid_ratio: Range = (0.5, 1.0)
    skew_angle: Range = (0.0, 15.0)
    rotate_angle: Range = (-25.0, 25.0)
    max_dim: int = 2048


@dataclass
class MarginConfig:
    enabled: bool = True
    ratio: Range = (0.0, 0.15)


@dataclass
class MidgroundConfig:
    enabled: bool = True
    prob: float = 1.0


@dataclass
class BlendConfig:
    enabled: bool = True
    modes: Tuple[str, ...] = tuple(m.value for m in BlendMode)


@dataclass
class VisibilityConfig:
    enabled: bool = True
    tolerance: int = 10
    threshold: float = 0.5
    protect_margin: int = 2


@dataclass
class PostConfig:
    enabled: bool = True
    prob: float = 0.25
    noise_sigma: Range = (2.0, 8.0)
    blur_radius: Range = (0.5, 2.0)
    resize_scale: Range = (0.4, 1.0)
    median_kernel: Tuple[int, ...] = (1, 3, 5)
    jpeg_quality: IntRange = (50, 95)


@dataclass
class OutputConfig:
    dir: str = "output"
    format: str = "png"
    count: int = 100
    seed: int = 0
    workers: int = 1


@dataclass
class GenConfig:
    resources: ResourcePaths
    text: SamplerConfig = field(default_factory=SamplerConfig)
    shape: ShapeConfig = field(default_factory=ShapeConfig)
    style: StyleConfig = field(default_factory=StyleConfig)
    transform: TransformConfig = field(default_factory=TransformConfig)
    margin: MarginConfig = field(default_factory=MarginConfig)
    midground: MidgroundConfig = field(default_factory=MidgroundConfig)
    blend: BlendConfig = field(default_factory=BlendConfig)
    visibility: VisibilityConfig = field(default_factory=VisibilityConfig)
    post: PostConfig = field(default_factory=PostConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    retry_limit: int = 10

    def __post_init__(self):
        validate(self)

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)


# Table of rendering functions that can be switched off one at a time,
# mapped to the config key that disables them.
ABLATIONS = {
    "curved_text": "shape.curve.enabled",
    "elastic_distortion": "shape.elastic.enabled",
    "color_map": "style.color_map.enabled",
    "texture_blending": "style.texture.enabled",
    "text_effect": "style.effect.enabled",
    "transformation": "transform.enabled",
    "margin": "margin.enabled",
    "midground_text": "midground.enabled",
    "blending_modes": "blend.enabled",
    "visibility_check": "visibility.enabled",
    "post_processing": "post.enabled",
}


def _probabilities(cfg: GenConfig):
    yield "text.p_length", cfg.text.p_length
    yield "text.p_char", cfg.text.p_char
    yield "shape.curve.prob", cfg.shape.curve.prob
    yield "shape.curve.upward_prob", cfg.shape.curve.upward_prob
    yield "shape.curve.rotate_prob", cfg.shape.curve.rotate_prob
    yield "shape.elastic.prob", cfg.shape.elastic.prob
    yield "style.texture.prob", cfg.style.texture.prob
    yield "style.effect.prob", cfg.style.effect.prob
    yield "midground.prob", cfg.midground.prob
    yield "visibility.threshold", cfg.visibility.threshold
    yield "post.prob", cfg.post.prob


def _check_range(name: str, rng: Sequence[float], lo: Optional[float] = None, hi: Optional[float] = None):
    if len(rng) != 2 or rng[0] > rng[1]:
        raise ConfigError(f"{name} must be [low, high] with low <= high, got {list(rng)}")
    if lo is not None and rng[0] < lo:
        raise ConfigError(f"{name} low end must be >= {lo}")
    if hi is not None and rng[1] > hi:
        raise ConfigError(f"{name} high end must be <= {hi}")


def validate(cfg: GenConfig) -> None:
    out = cfg.output
    if out.count < 1:
        raise ConfigError("output.count must be >= 1")
    if out.workers < 1:
        raise ConfigError("output.workers must be >= 1")
    if out.format not in ("png", "jpg"):
        raise ConfigError(f"output.format must be png or jpg, got {out.format!r}")
    if cfg.retry_limit < 1:
        raise ConfigError("retry_limit must be >= 1")
    for name, p in _probabilities(cfg):
        if not 0.0 <= p <= 1.0:
            raise ConfigError(f"{name} must be in [0, 1], got {p}")
    sh = cfg.shape
    _check_range("shape.font_size", sh.font_size, lo=1)
    _check_range("shape.thickness", sh.thickness)
    _check_range("shape.char_margin", sh.char_margin)
    _check_range("shape.curve.gap", sh.curve.gap, lo=0)
    _check_range("shape.elastic.alpha", sh.elastic.alpha, lo=0)
    _check_range("shape.elastic.sigma", sh.elastic.sigma)
    if sh.elastic.sigma[0] <= 0:
        raise ConfigError("shape.elastic.sigma must be positive")
    st = cfg.style
    _check_range("style.texture.alpha", st.texture.alpha, 0, 1)
    _check_range("style.texture.background_alpha", st.texture.background_alpha, 0, 1)
    _check_range("style.effect.border_width", st.effect.border_width, lo=1)
    _check_range("style.effect.shadow_offset", st.effect.shadow_offset)
    _check_range("style.effect.extrude_depth", st.effect.extrude_depth, lo=1)
    tr = cfg.transform
    if not tr.kinds or any(k not in KINDS for k in tr.kinds):
        raise ConfigError(f"transform.kinds must be a non-empty subset of {list(KINDS)}")
    _check_range("transform.stretch", tr.stretch)
    if tr.stretch[0] <= 0:
        raise ConfigError("transform.stretch must be positive")
    _check_range("transform.trapezoid_ratio", tr.trapezoid_ratio, hi=1)
    if tr.trapezoid_ratio[0] <= 0:
        raise ConfigError("transform.trapezoid_ratio must be in (0, 1]")
    _check_range("transform.skew_angle", tr.skew_angle, -89, 89)
    _check_range("transform.rotate_angle", tr.rotate_angle)
    _check_range("margin.ratio", cfg.margin.ratio, lo=0)
    valid_modes = {m.value for m in BlendMode}
    if not cfg.blend.modes or any(m not in valid_modes for m in cfg.blend.modes):
        raise ConfigError(f"blend.modes must be a non-empty subset of {sorted(valid_modes)}")
    if cfg.visibility.tolerance < 0 or cfg.visibility.protect_margin < 0:
        raise ConfigError("visibility.tolerance and protect_margin must be >= 0")
    po = cfg.post
    _check_range("post.noise_sigma", po.noise_sigma, lo=0)
    _check_range("post.blur_radius", po.blur_radius, lo=0)
    _check_range("post.resize_scale", po.resize_scale)
    if not 0 < po.resize_scale[0] <= po.resize_scale[1] <= 1:
        raise ConfigError("post.resize_scale must lie in (0, 1]")
    if not po.median_kernel or any(k < 1 or k % 2 == 0 for k in po.median_kernel):
        raise ConfigError("post.median_kernel values must be odd and >= 1")
    _check_range("post.jpeg_quality", po.jpeg_quality, 1, 100)


def _convert(tp, value, where: str):
    origin = typing.get_origin(tp)
    if dataclasses.is_dataclass(tp):
        if not isinstance(value, dict):
            raise ConfigError(f"{where} must be a mapping")
        return _from_dict(tp, value, where)
    if origin is tuple:
        if not isinstance(value, (list, tuple)):
            raise ConfigError(f"{where} must be a list")
        args = typing.get_args(tp)
        item = args[0]
        return tuple(_convert(item, v, where) for v in value)
    if tp is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"{where} must be true or false")
        return value
    if tp is int:
        if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
            raise ConfigError(f"{where} must be an integer")
        return int(value)
    if tp is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{where} must be a number")
        return float(value)
    if tp is str:
        return str(value)
    return value


def _from_dict(cls, data: Dict[str, Any], where: str = ""):
    hints = typing.get_type_hints(cls)
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - names
    if unknown:
        raise ConfigError(f"unknown config keys under {where or 'root'}: {sorted(unknown)}")
    kwargs = {}
    for name, value in data.items():
        kwargs[name] = _convert(hints[name], value, f"{where}.{name}" if where else name)
    try:
        return cls(**kwargs)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where or 'config'}: {exc}") from exc


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    out = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = value
    return out


def _resolve_paths(resources: Dict[str, Any], base_dir: Path) -> Dict[str, Any]:
    out = dict(resources)
    for key in ("lexicon", "fonts", "textures", "color_map"):
        if key in out:
            p = Path(out[key]).expanduser()
            out[key] = str(p if p.is_absolute() else (base_dir / p).resolve())
    return out


def package_dir() -> Path:
    return Path(str(importlib_resources.files("wordbox")))


def default_dict() -> Dict[str, Any]:
    text = (package_dir() / "default_config.yaml").read_text(encoding="utf-8")
    data = yaml.safe_load(text)
    data["resources"] = _resolve_paths(data["resources"], package_dir())
    return data


def set_key(data: Dict[str, Any], dotted: str, value: Any) -> None:
    node = data
    *parents, leaf = dotted.split(".")
    for part in parents:
        node = node.setdefault(part, {})
    node[leaf] = value


def config_from_dict(data: Optional[Dict[str, Any]] = None, base_dir=None) -> GenConfig:
    """Build a GenConfig from overrides on top of the packaged defaults.

    Relative resource paths in ``data`` resolve against ``base_dir``
    (default: the current directory).
    """
    data = dict(data or {})
    if "resources" in data:
        data["resources"] = _resolve_paths(data["resources"], Path(base_dir or ".").resolve())
    merged = _merge(default_dict(), data)
    return _from_dict(GenConfig, merged)


def load_config(path=None, overrides: Optional[Dict[str, Any]] = None,
                disable: Sequence[str] = ()) -> GenConfig:
    """Load a YAML config, apply dotted-key ``overrides`` and switch off ablations."""
    data: Dict[str, Any] = {}
    base_dir = Path(".")
    if path is not None:
        path = Path(path)
        try:
            loaded = yaml.safe_load(path.read_text(encoding="utf-8"))
        except (OSError, yaml.YAMLError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if loaded is not None and not isinstance(loaded, dict):
            raise ConfigError(f"config {path} must be a mapping")
        data = loaded or {}
        base_dir = path.parent
    for key, value in (overrides or {}).items():
        set_key(data, key, value)
    for name in disable:
        if name not in ABLATIONS:
            raise ConfigError(f"unknown ablation {name!r}; choose from {sorted(ABLATIONS)}")
        set_key(data, ABLATIONS[name], False)
    return config_from_dict(data, base_dir)
