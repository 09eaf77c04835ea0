"""Lexicon, font, texture and colour-map resources.

All loaders return immutable objects that can be shared across worker
processes.  Randomness is always supplied by the caller as a
``numpy.random.Generator``.
"""

from __future__ import annotations

import functools
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, List, Tuple

import numpy as np
from PIL import Image

FONT_SUFFIXES = (".ttf", ".otf", ".ttc", ".otc")
TEXTURE_SUFFIXES = (".png", ".jpg", ".jpeg")


class ResourceError(ValueError):
    """A resource file is missing, unreadable or malformed."""


class NoFontError(LookupError):
    """No font in the pool covers every character of the text."""


@dataclass(frozen=True)
class Lexicon:
    words: Tuple[str, ...]
    vocabulary: Tuple[str, ...] = field(init=False)
    _char_index: Dict[str, Tuple[int, ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.words:
            raise ResourceError("lexicon is empty")
        if any(not w for w in self.words):
            raise ResourceError("lexicon contains an empty word")
        index: Dict[str, List[int]] = {}
        for i, word in enumerate(self.words):
            for ch in dict.fromkeys(word):
                index.setdefault(ch, []).append(i)
        object.__setattr__(self, "vocabulary", tuple(sorted(index)))
        object.__setattr__(self, "_char_index", {c: tuple(v) for c, v in index.items()})

    def __len__(self):
        return len(self.words)

    def words_with(self, char: str) -> Tuple[int, ...]:
        """Indices of the words containing ``char``."""
        return self._char_index.get(char, ())


def case_variants(word: str) -> List[str]:
    """Capitalized, upper-cased and lower-cased forms of ``word``.

    A mixed-case word (``iPhone``) that matches none of the three keeps its
    own spelling in place of the capitalized form, so no source word is
    ever lost from the augmented lexicon.
    """
    cap, upper, lower = word.capitalize(), word.upper(), word.lower()
    if word not in (cap, upper, lower):
        cap = word
    return list(dict.fromkeys((cap, upper, lower)))


def load_lexicon(path, case_augment: bool = False) -> Lexicon:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ResourceError(f"cannot read lexicon {path}: {exc}") from exc
    words = [line.strip() for line in text.splitlines()]
    words = [w for w in words if w]
    if case_augment:
        words = [v for w in words for v in case_variants(w)]
    words = list(dict.fromkeys(words))
    if not words:
        raise ResourceError(f"lexicon {path} is empty")
    return Lexicon(tuple(words))


@dataclass(frozen=True)
class ColorMap:
    # each entry is a tuple of (mean, std) clusters
    entries: Tuple[Tuple[Tuple[float, float], ...], ...]

    def __post_init__(self):
        if not self.entries:
            raise ResourceError("color map is empty")
        for entry in self.entries:
            _validate_entry(entry)


def _validate_entry(entry) -> None:
    if len(entry) not in (2, 3):
        raise ResourceError(f"color map entry needs 2 or 3 clusters, got {len(entry)}")
    for mean, std in entry:
        if not 0.0 <= mean <= 255.0:
            raise ResourceError(f"cluster mean {mean} outside [0, 255]")
        if std < 0:
            raise ResourceError(f"cluster std {std} is negative")


def parse_color_map_line(line: str) -> Tuple[Tuple[float, float], ...]:
    """Parse ``K m1 s1 m2 s2 [m3 s3]``."""
    tokens = line.split()
    try:
        k = int(tokens[0])
        values = [float(t) for t in tokens[1:]]
    except (IndexError, ValueError) as exc:
        raise ResourceError(f"malformed color map line: {line!r}") from exc
    if k not in (2, 3):
        raise ResourceError(f"color map entry needs 2 or 3 clusters, got {k}")
    if len(values) != 2 * k:
        raise ResourceError(f"expected {2 * k} values after K={k}: {line!r}")
    entry = tuple((values[2 * i], values[2 * i + 1]) for i in range(k))
    _validate_entry(entry)
    return entry


def load_color_map(path) -> ColorMap:
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except (OSError, UnicodeDecodeError) as exc:
        raise ResourceError(f"cannot read color map {path}: {exc}") from exc
    entries = [parse_color_map_line(line) for line in lines
               if line.strip() and not line.lstrip().startswith("#")]
    if not entries:
        raise ResourceError(f"color map {path} is empty")
    return ColorMap(tuple(entries))


@dataclass(frozen=True)
class FontInfo:
    path: str
    family: str
    codepoints: FrozenSet[int] = field(repr=False)

    def covers(self, text: str) -> bool:
        return all(ord(ch) in self.codepoints for ch in text)


@dataclass(frozen=True)
class FontPool:
    fonts: Tuple[FontInfo, ...]

    def __post_init__(self):
        if not self.fonts:
            raise ResourceError("font pool is empty")


def read_font_info(path) -> FontInfo:
    from fontTools.ttLib import TTFont

    try:
        font = TTFont(str(path), fontNumber=0, lazy=True)
        cmap = font.getBestCmap() or {}
        family = font["name"].getBestFamilyName() or Path(path).stem
        font.close()
    except Exception as exc:
        raise ResourceError(f"cannot read font {path}: {exc}") from exc
    return FontInfo(str(path), family, frozenset(cmap))


def load_font_pool(directory) -> FontPool:
    root = Path(directory)
    if not root.is_dir():
        raise ResourceError(f"font directory {directory} does not exist")
    paths = sorted(p for p in root.rglob("*") if p.suffix.lower() in FONT_SUFFIXES)
    if not paths:
        raise ResourceError(f"no font files under {directory}")
    return FontPool(tuple(read_font_info(p) for p in paths))


def pick_font(pool: FontPool, text: str, rng: np.random.Generator) -> FontInfo:
    """Uniformly pick a font among those covering every character of ``text``."""
    candidates = [f for f in pool.fonts if f.covers(text)]
    if not candidates:
        raise NoFontError(f"no font covers {text!r}")
    return candidates[int(rng.integers(len(candidates)))]


@dataclass(frozen=True)
class TextureRef:
    path: str
    width: int
    height: int


@dataclass(frozen=True)
class TexturePool:
    textures: Tuple[TextureRef, ...]

    def __post_init__(self):
        if not self.textures:
            raise ResourceError("texture pool is empty")


def load_texture_pool(directory) -> TexturePool:
    root = Path(directory)
    if not root.is_dir():
        raise ResourceError(f"texture directory {directory} does not exist")
    refs = []
    for p in sorted(root.rglob("*")):
        if p.suffix.lower() not in TEXTURE_SUFFIXES:
            continue
        try:
            with Image.open(p) as im:
                w, h = im.size
        except OSError as exc:
            raise ResourceError(f"cannot read texture {p}: {exc}") from exc
        if w < 1 or h < 1:
            raise ResourceError(f"texture {p} is empty")
        refs.append(TextureRef(str(p), w, h))
    if not refs:
        raise ResourceError(f"no PNG/JPEG textures under {directory}")
    return TexturePool(tuple(refs))


@functools.lru_cache(maxsize=64)
def _read_texture(path: str) -> np.ndarray:
    try:
        with Image.open(path) as im:
            arr = np.asarray(im.convert("RGB"), dtype=np.uint8)
    except OSError as exc:
        raise ResourceError(f"cannot read texture {path}: {exc}") from exc
    arr.setflags(write=False)
    return arr


def load_texture(ref) -> np.ndarray:
    """RGB pixels of a texture; ``ref`` is a TextureRef or a path."""
    path = ref.path if isinstance(ref, TextureRef) else os.fspath(ref)
    return _read_texture(path)


def pick_texture(pool: TexturePool, rng: np.random.Generator) -> TextureRef:
    return pool.textures[int(rng.integers(len(pool.textures)))]


@dataclass(frozen=True)
class ResourceSet:
    lexicon: Lexicon
    fonts: FontPool
    textures: TexturePool
    color_map: ColorMap


def load_resources(lexicon, fonts, textures, color_map, case_augment: bool = False) -> ResourceSet:
    return ResourceSet(
        lexicon=load_lexicon(lexicon, case_augment),
        fonts=load_font_pool(fonts),
        textures=load_texture_pool(textures),
        color_map=load_color_map(color_map),
    )
