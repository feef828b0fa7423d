"""Raster types shared by the resamplers, mask pipeline, metrics and harness.

Rasters are row-major with a top-left origin; ``y`` grows downward. Pixel
data is held in read-only numpy arrays of shape ``(height, width)`` so the
types can be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

DEFAULT_LABELS = (255, 128, 0)


@dataclass(frozen=True)
class Size:
    width: int
    height: int

    def __post_init__(self):
        if int(self.width) != self.width or int(self.height) != self.height:
            raise ValueError(f"size must be integral, got {self.width}x{self.height}")
        if self.width < 1 or self.height < 1:
            raise ValueError(f"size must be positive, got {self.width}x{self.height}")
        object.__setattr__(self, "width", int(self.width))
        object.__setattr__(self, "height", int(self.height))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.height, self.width)

    @classmethod
    def parse(cls, text: str) -> "Size":
        """Parse ``"WxH"`` (or a bare ``"N"`` for a square)."""
        parts = text.lower().replace("×", "x").split("x")
        try:
            if len(parts) == 1:
                return cls(int(parts[0]), int(parts[0]))
            if len(parts) == 2:
                return cls(int(parts[0]), int(parts[1]))
        except ValueError:
            pass
        raise ValueError(f"cannot parse size {text!r}")

    def __str__(self):
        return f"{self.width}x{self.height}"


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Image:
    """Grayscale raster of real intensities."""

    pixels: np.ndarray
    value_range: tuple[float, float] = (0.0, 255.0)

    def __post_init__(self):
        px = np.array(self.pixels, dtype=np.float64)
        if px.ndim != 2 or px.size == 0:
            raise ValueError(f"image pixels must be a non-empty 2-D array, got shape {px.shape}")
        lo, hi = (float(v) for v in self.value_range)
        if not lo <= hi:
            raise ValueError(f"bad value range {self.value_range}")
        if np.isnan(px).any():
            raise ValueError("image contains NaN")
        object.__setattr__(self, "pixels", _frozen(px))
        object.__setattr__(self, "value_range", (lo, hi))

    @classmethod
    def from_flat(cls, width: int, height: int, values: Sequence[float], **kw) -> "Image":
        size = Size(width, height)
        values = np.asarray(values, dtype=np.float64)
        if values.size != size.width * size.height:
            raise ValueError(f"expected {size.width * size.height} values, got {values.size}")
        return cls(values.reshape(size.shape), **kw)

    @property
    def size(self) -> Size:
        return Size(self.pixels.shape[1], self.pixels.shape[0])

    def clamped(self) -> "Image":
        lo, hi = self.value_range
        return Image(np.clip(self.pixels, lo, hi), self.value_range)

    def __eq__(self, other):
        if not isinstance(other, Image):
            return NotImplemented
        return self.value_range == other.value_range and np.array_equal(self.pixels, other.pixels)

    __hash__ = None


@dataclass(frozen=True)
class LabelSet:
    """Admissible class labels in priority order (earlier wins overlaps).

    The background label always takes the lowest priority and is moved to the
    end of ``labels`` if given elsewhere.
    """

    labels: tuple[int, ...] = DEFAULT_LABELS
    background: int = 0

    def __post_init__(self):
        labels = tuple(int(v) for v in self.labels)
        if not labels:
            raise ValueError("label set is empty")
        if len(set(labels)) != len(labels):
            raise ValueError(f"labels must be distinct: {labels}")
        if any(v < 0 or v > 255 for v in labels):
            raise ValueError(f"labels must lie in [0, 255]: {labels}")
        if self.background not in labels:
            raise ValueError(f"background {self.background} not in {labels}")
        labels = tuple(v for v in labels if v != self.background) + (int(self.background),)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def parse(cls, text: str, background: int = 0) -> "LabelSet":
        try:
            labels = tuple(int(v) for v in text.split(",") if v.strip())
        except ValueError:
            raise ValueError(f"cannot parse label list {text!r}") from None
        return cls(labels, background)

    @property
    def foreground(self) -> tuple[int, ...]:
        return self.labels[:-1]

    def index(self, label: int) -> int:
        try:
            return self.labels.index(int(label))
        except ValueError:
            raise ValueError(f"label {label} not in label set {self.labels}") from None

    def __contains__(self, label) -> bool:
        return int(label) in self.labels

    def __len__(self):
        return len(self.labels)

    def __str__(self):
        return ",".join(str(v) for v in self.labels)


@dataclass(frozen=True)
class Violation:
    x: int
    y: int
    value: float


@dataclass(frozen=True)
class ValidationResult:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def _violations(values: np.ndarray, label_set: LabelSet) -> tuple[Violation, ...]:
    bad = ~np.isin(values, np.asarray(label_set.labels, dtype=values.dtype))
    ys, xs = np.nonzero(bad)
    return tuple(Violation(int(x), int(y), values[y, x].item()) for y, x in zip(ys, xs))


@dataclass(frozen=True, eq=False)
class LabelMask:
    """Raster of discrete labels, every one drawn from ``label_set``.

    Construction rejects out-of-set values; use :func:`check_labels` to
    inspect raw arrays (e.g. naively resampled ones) without raising.
    """

    labels: np.ndarray
    label_set: LabelSet = field(default_factory=LabelSet)

    def __post_init__(self):
        raw = np.asarray(self.labels)
        if raw.ndim != 2 or raw.size == 0:
            raise ValueError(f"mask labels must be a non-empty 2-D array, got shape {raw.shape}")
        bad = _violations(raw, self.label_set)
        if bad:
            v = bad[0]
            raise ValueError(
                f"{len(bad)} pixel(s) outside label set {self.label_set.labels}, "
                f"first at (x={v.x}, y={v.y}) value {v.value}"
            )
        object.__setattr__(self, "labels", _frozen(raw.astype(np.int32)))

    @classmethod
    def from_flat(cls, width: int, height: int, values: Sequence[int], label_set: LabelSet | None = None):
        size = Size(width, height)
        values = np.asarray(values)
        if values.size != size.width * size.height:
            raise ValueError(f"expected {size.width * size.height} values, got {values.size}")
        return cls(values.reshape(size.shape), label_set or LabelSet())

    @property
    def size(self) -> Size:
        return Size(self.labels.shape[1], self.labels.shape[0])

    def __eq__(self, other):
        if not isinstance(other, LabelMask):
            return NotImplemented
        return self.label_set == other.label_set and np.array_equal(self.labels, other.labels)

    __hash__ = None


def image_get(img: Image, x: int, y: int) -> float:
    w, h = img.size.width, img.size.height
    if not (0 <= x < w and 0 <= y < h):
        raise IndexError(f"pixel ({x}, {y}) outside {w}x{h} image")
    return float(img.pixels[y, x])


def check_labels(values: np.ndarray, label_set: LabelSet) -> ValidationResult:
    """Validate a raw label raster, reporting every out-of-set pixel."""
    return ValidationResult(_violations(np.asarray(values), label_set))


def mask_validate(mask: LabelMask) -> ValidationResult:
    return check_labels(mask.labels, mask.label_set)


def labels_to_image(mask: LabelMask) -> Image:
    return Image(mask.labels.astype(np.float64))


def image_to_labels(img: Image, label_set: LabelSet | None = None) -> LabelMask:
    """Inverse of :func:`labels_to_image`; raises if any value is not an exact label."""
    px = img.pixels
    rounded = np.rint(px)
    if not np.array_equal(rounded, px):
        raise ValueError("image holds non-integral values; it is not a label raster")
    return LabelMask(rounded.astype(np.int32), label_set or LabelSet())
