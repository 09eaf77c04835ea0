"""Target-text selection with length and character distribution control."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from wordbox.resources import Lexicon


class Origin(str, enum.Enum):
    PLAIN = "plain"
    LENGTH_AUGMENTED = "length_augmented"
    CHAR_AUGMENTED = "char_augmented"


@dataclass(frozen=True)
class SamplerConfig:
    p_length: float = 0.5
    p_char: float = 0.0
    max_length: int = 25

    def __post_init__(self):
        if not 0.0 <= self.p_length <= 1.0:
            raise ValueError(f"p_length must be in [0, 1], got {self.p_length}")
        if not 0.0 <= self.p_char <= 1.0:
            raise ValueError(f"p_char must be in [0, 1], got {self.p_char}")
        if self.max_length < 1:
            raise ValueError(f"max_length must be >= 1, got {self.max_length}")


@dataclass(frozen=True)
class TextSample:
    text: str
    origin: Origin
    # character chosen as the pivot of a char-augmented draw
    pivot: Optional[str] = None


def sample_plain(lexicon: Lexicon, rng: np.random.Generator) -> TextSample:
    word = lexicon.words[int(rng.integers(len(lexicon.words)))]
    return TextSample(word, Origin.PLAIN)


def sample_length_augmented(lexicon: Lexicon, max_length: int, rng: np.random.Generator) -> TextSample:
    """Draw a target length uniformly from ``[1, max_length]`` and fill it.

    Words are appended left to right until the target is reached or
    exceeded; the overflow on the right is cut off.
    """
    if max_length < 1:
        raise ValueError("max_length must be >= 1")
    target = int(rng.integers(1, max_length + 1))
    parts = []
    size = 0
    while size < target:
        word = lexicon.words[int(rng.integers(len(lexicon.words)))]
        parts.append(word)
        size += len(word)
    return TextSample("".join(parts)[:target], Origin.LENGTH_AUGMENTED)


def sample_char_augmented(lexicon: Lexicon, rng: np.random.Generator) -> TextSample:
    """Pick a vocabulary character uniformly, then a word containing it."""
    pivot = lexicon.vocabulary[int(rng.integers(len(lexicon.vocabulary)))]
    holders = lexicon.words_with(pivot)
    word = lexicon.words[holders[int(rng.integers(len(holders)))]]
    return TextSample(word, Origin.CHAR_AUGMENTED, pivot)


def sample(lexicon: Lexicon, cfg: SamplerConfig, rng: np.random.Generator) -> TextSample:
    # A zero probability consumes no randomness, so p_length = p_char = 0
    # reproduces sample_plain draw for draw.
    if cfg.p_length > 0 and rng.random() < cfg.p_length:
        return sample_length_augmented(lexicon, cfg.max_length, rng)
    if cfg.p_char > 0 and rng.random() < cfg.p_char:
        return sample_char_augmented(lexicon, rng)
    return sample_plain(lexicon, rng)
