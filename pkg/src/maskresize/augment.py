"""Paired image/mask augmentation: random left-right flip and integer translation.

Shifts are whole pixels, so no resampling happens and masks keep their
label set by construction.

Random streams use numpy's PCG64. The stream for pair ``i`` of a run seeded
with ``s`` is ``PCG64(SeedSequence(s, spawn_key=(i,)))``; each pair draws, in
order, one uniform for the flip, one uniform for the translation gate and
two integers for ``(dx, dy)``. All four are drawn every time so streams stay
aligned whatever the outcome.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .raster import Image, LabelMask

TRANSLATE_PROBABILITY = 0.5


@dataclass(frozen=True)
class AugmentSpec:
    flip_probability: float = 0.5
    translation_range: tuple[int, int] = (-10, 10)
    translate_probability: float = TRANSLATE_PROBABILITY
    rng_seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.flip_probability <= 1.0:
            raise ValueError(f"flip probability must be in [0, 1], got {self.flip_probability}")
        if not 0.0 <= self.translate_probability <= 1.0:
            raise ValueError(f"translate probability must be in [0, 1], got {self.translate_probability}")
        lo, hi = self.translation_range
        if int(lo) != lo or int(hi) != hi or lo > hi:
            raise ValueError(f"bad translation range {self.translation_range}")


def pair_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def flip_lr(raster):
    if isinstance(raster, LabelMask):
        return LabelMask(raster.labels[:, ::-1], raster.label_set)
    return Image(raster.pixels[:, ::-1], raster.value_range)


def _shift(arr: np.ndarray, dx: int, dy: int, fill) -> np.ndarray:
    h, w = arr.shape
    out = np.full_like(arr, fill)
    if abs(dx) >= w or abs(dy) >= h:
        return out
    src_y = slice(max(0, -dy), h - max(0, dy))
    src_x = slice(max(0, -dx), w - max(0, dx))
    dst_y = slice(max(0, dy), h - max(0, -dy))
    dst_x = slice(max(0, dx), w - max(0, -dx))
    out[dst_y, dst_x] = arr[src_y, src_x]
    return out


def translate(raster, dx: int, dy: int, fill=None):
    """Shift content by ``(dx, dy)`` whole pixels; vacated pixels take ``fill``.

    ``fill`` defaults to the background label for masks and the bottom of the
    value range for images.
    """
    if isinstance(raster, LabelMask):
        fill = raster.label_set.background if fill is None else fill
        if fill not in raster.label_set:
            raise ValueError(f"fill {fill} not in label set {raster.label_set.labels}")
        return LabelMask(_shift(raster.labels, int(dx), int(dy), fill), raster.label_set)
    lo, hi = raster.value_range
    fill = lo if fill is None else float(fill)
    if not lo <= fill <= hi:
        raise ValueError(f"fill {fill} outside value range {raster.value_range}")
    return Image(_shift(raster.pixels, int(dx), int(dy), fill), raster.value_range)


@dataclass(frozen=True)
class Draw:
    flip: bool
    dx: int
    dy: int


def draw_transform(spec: AugmentSpec, rng: np.random.Generator) -> Draw:
    flip = rng.random() < spec.flip_probability
    gate = rng.random() < spec.translate_probability
    lo, hi = spec.translation_range
    dx, dy = (int(v) for v in rng.integers(lo, hi, size=2, endpoint=True))
    if not gate:
        dx = dy = 0
    return Draw(bool(flip), dx, dy)


def apply_transform(raster, draw: Draw):
    if draw.flip:
        raster = flip_lr(raster)
    if draw.dx or draw.dy:
        raster = translate(raster, draw.dx, draw.dy)
    return raster


def augment_pair(img: Image, mask: LabelMask, spec: AugmentSpec, rng: np.random.Generator):
    """Apply one random draw to both members of an image/mask pair.

    Returns ``(image, mask, rng)``; the generator is advanced in place.
    """
    if img.size != mask.size:
        raise ValueError(f"image {img.size} and mask {mask.size} differ in size")
    draw = draw_transform(spec, rng)
    return apply_transform(img, draw), apply_transform(mask, draw), rng
