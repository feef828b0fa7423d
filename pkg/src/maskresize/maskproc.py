"""Label-preserving mask resampling.

Extra-pixel resamplers (bilinear, bicubic) average neighbouring labels and
so invent values that are not classes. The processed strategies avoid that
by resampling each class separately as a binary image and then cleaning up:

1. split the mask into one binary image per foreground label,
2. resize each binary with the extra-pixel resampler,
3. threshold back to {0, 255},
4. median-filter to remove isolated speckle,
5. recombine in priority order, subtracting pixels already claimed by a
   higher-priority class.

The output therefore only ever contains labels of the input's label set.
A resize to the mask's own size returns the mask untouched for every
strategy.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .interp import CubicKernelParams, ResizeSpec, resize_bicubic, resize_bilinear, resize_nn
from .raster import Image, LabelMask, LabelSet, labels_to_image

FULL_SCALE = 255.0


class Strategy(str, enum.Enum):
    NN = "NN"
    BIC_PROCESSED = "BIC_PROCESSED"
    BIL_PROCESSED = "BIL_PROCESSED"


@dataclass(frozen=True)
class MaskResizeStrategy:
    tag: Strategy = Strategy.BIC_PROCESSED
    cubic: CubicKernelParams = field(default_factory=CubicKernelParams)
    median_window: int = 3
    threshold_level: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "tag", Strategy(self.tag))
        if self.median_window < 3 or self.median_window % 2 == 0:
            raise ValueError(f"median window must be odd and >= 3, got {self.median_window}")
        if not 0.0 < self.threshold_level < 1.0:
            raise ValueError(f"threshold level must be in (0, 1), got {self.threshold_level}")


def split_classes(mask: LabelMask) -> list[Image]:
    """One 0/255 image per foreground label, in priority order."""
    return [
        Image(np.where(mask.labels == label, FULL_SCALE, 0.0))
        for label in mask.label_set.foreground
    ]


def threshold(img: Image, level: float = 0.5) -> Image:
    cut = level * FULL_SCALE
    return Image(np.where(img.pixels >= cut, FULL_SCALE, 0.0))


def median_filter(binary: Image, window: int = 3) -> Image:
    """Median of each ``window`` x ``window`` neighbourhood, edges replicated.

    For binary input the median is 255 exactly when the neighbourhood holds a
    majority of 255s, so it is computed from box sums of the foreground
    indicator rather than by sorting.
    """
    if window < 3 or window % 2 == 0:
        raise ValueError(f"median window must be odd and >= 3, got {window}")
    px = binary.pixels
    if not np.isin(px, (0.0, FULL_SCALE)).all():
        raise ValueError("median_filter expects a binary {0, 255} image")
    r = window // 2
    ones = np.pad((px == FULL_SCALE).astype(np.int64), r, mode="edge")
    # summed-area table with a zero row/column in front
    sat = np.zeros((ones.shape[0] + 1, ones.shape[1] + 1), dtype=np.int64)
    sat[1:, 1:] = ones.cumsum(axis=0).cumsum(axis=1)
    h, w = px.shape
    counts = (
        sat[window:window + h, window:window + w]
        - sat[:h, window:window + w]
        - sat[window:window + h, :w]
        + sat[:h, :w]
    )
    majority = (window * window) // 2 + 1
    return Image(np.where(counts >= majority, FULL_SCALE, 0.0))


def combine_subtract(binaries: list[Image], label_set: LabelSet) -> LabelMask:
    if len(binaries) != len(label_set.foreground):
        raise ValueError(
            f"expected {len(label_set.foreground)} binaries for labels {label_set.labels}, got {len(binaries)}"
        )
    shapes = {b.pixels.shape for b in binaries}
    if len(shapes) > 1:
        raise ValueError(f"binary images differ in size: {sorted(shapes)}")
    if not binaries:
        raise ValueError("nothing to combine: label set has no foreground labels")
    shape = shapes.pop()
    out = np.full(shape, label_set.background, dtype=np.int32)
    claimed = np.zeros(shape, dtype=bool)
    for label, b in zip(label_set.foreground, binaries):
        take = (b.pixels >= FULL_SCALE / 2) & ~claimed
        out[take] = label
        claimed |= take
    return LabelMask(out, label_set)


def _resize_processed(mask: LabelMask, spec: ResizeSpec, strategy: MaskResizeStrategy) -> LabelMask:
    if strategy.tag is Strategy.BIC_PROCESSED:
        resampler = resize_bicubic
        spec = ResizeSpec(spec.target, spec.mapping, spec.boundary, spec.clamp_output, strategy.cubic)
    else:
        resampler = resize_bilinear
    if not mask.label_set.foreground:
        return LabelMask(np.full(spec.target.shape, mask.label_set.background), mask.label_set)
    cleaned = []
    for binary in split_classes(mask):
        up = resampler(binary, spec)
        cleaned.append(median_filter(threshold(up, strategy.threshold_level), strategy.median_window))
    return combine_subtract(cleaned, mask.label_set)


def mask_resize(mask: LabelMask, spec: ResizeSpec, strategy: MaskResizeStrategy = MaskResizeStrategy()) -> LabelMask:
    if spec.target == mask.size:
        return mask
    if strategy.tag is Strategy.NN:
        out = resize_nn(labels_to_image(mask), spec)
        return LabelMask(out.pixels.astype(np.int32), mask.label_set)
    return _resize_processed(mask, spec, strategy)
