"""Synthetic nested-ellipse masks standing in for 3-class cardiac segmentations.

Shapes are described in normalised raster coordinates (0..1 on each axis)
so one drawn shape can be rendered at several resolutions. A pixel belongs
to an ellipse when its centre ``((x + 0.5) / W, (y + 0.5) / H)`` satisfies
the closed ellipse inequality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..augment import pair_rng
from ..raster import LabelMask, LabelSet, Size


@dataclass(frozen=True)
class NestedEllipses:
    cx: float
    cy: float
    a: float
    b: float
    angle: float = 0.0
    inner_scale: float = 0.5
    inner_dx: float = 0.0
    inner_dy: float = 0.0

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError(f"outer semi-axes must be positive, got a={self.a}, b={self.b}")
        if not 0.0 <= self.inner_scale < 1.0:
            raise ValueError(f"inner scale must be in [0, 1), got {self.inner_scale}")


@dataclass(frozen=True)
class ShapeBounds:
    center: tuple[float, float] = (0.35, 0.65)
    axes: tuple[float, float] = (0.12, 0.30)
    inner_scale: tuple[float, float] = (0.3, 0.6)

    def __post_init__(self):
        for name in ("center", "axes", "inner_scale"):
            lo, hi = getattr(self, name)
            if not lo <= hi:
                raise ValueError(f"bad {name} bounds {(lo, hi)}")
        if self.axes[0] <= 0:
            raise ValueError(f"axis bounds must be positive, got {self.axes}")

    def draw(self, rng: np.random.Generator) -> NestedEllipses:
        cx, cy = rng.uniform(*self.center, size=2)
        a, b = rng.uniform(*self.axes, size=2)
        angle = rng.uniform(0.0, math.pi)
        k = rng.uniform(*self.inner_scale)
        # keeps the inner ellipse inside the outer one
        reach = 0.5 * (1.0 - k) * min(a, b) / math.sqrt(2.0)
        dx, dy = rng.uniform(-reach, reach, size=2)
        return NestedEllipses(float(cx), float(cy), float(a), float(b), float(angle), float(k), float(dx), float(dy))


def _inside(size: Size, cx, cy, a, b, angle) -> np.ndarray:
    xs = (np.arange(size.width) + 0.5) / size.width - cx
    ys = (np.arange(size.height) + 0.5) / size.height - cy
    X, Y = np.meshgrid(xs, ys)
    c, s = math.cos(angle), math.sin(angle)
    u = X * c + Y * s
    v = -X * s + Y * c
    return (u / a) ** 2 + (v / b) ** 2 <= 1.0


def render(shape: NestedEllipses, size: Size, label_set: LabelSet | None = None) -> LabelMask:
    """Rasterise ``shape``: outer ring gets the second foreground label, the core the first."""
    label_set = label_set or LabelSet()
    fg = label_set.foreground
    if not fg:
        raise ValueError("label set needs at least one foreground label")
    inner_label, outer_label = fg[0], fg[min(1, len(fg) - 1)]
    out = np.full(size.shape, label_set.background, dtype=np.int32)
    out[_inside(size, shape.cx, shape.cy, shape.a, shape.b, shape.angle)] = outer_label
    if shape.inner_scale > 0:
        k = shape.inner_scale
        core = _inside(size, shape.cx + shape.inner_dx, shape.cy + shape.inner_dy,
                       k * shape.a, k * shape.b, shape.angle)
        out[core] = inner_label
    return LabelMask(out, label_set)


def synth_mask(shape_spec, size: Size, label_set: LabelSet | None = None, seed: int = 0) -> LabelMask:
    """Render a concrete :class:`NestedEllipses`, or draw one from :class:`ShapeBounds` with ``seed``."""
    if isinstance(shape_spec, ShapeBounds):
        shape_spec = shape_spec.draw(pair_rng(seed, 0))
    return render(shape_spec, size, label_set)


def draw_shapes(bounds: ShapeBounds, n: int, seed: int) -> list[NestedEllipses]:
    """``n`` shapes, shape ``i`` drawn from its own sub-stream of ``seed``."""
    return [bounds.draw(pair_rng(seed, i)) for i in range(n)]
